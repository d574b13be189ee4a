#include <gtest/gtest.h>

#include <cmath>

#include "bogo/fock/oracle.hpp"

using namespace bogo;
using namespace bogo::fock;

namespace {
std::shared_ptr<const FockBasis> make_basis(std::vector<int> shells, int cap, std::size_t limit = 200000) {
    return std::make_shared<const FockBasis>(shell_modes(shells), cap, BasisOptions{limit, false});
}
} // namespace

TEST(Basis, SizeAndOrdering) {
    auto b = make_basis({1}, 5);
    EXPECT_EQ(b->size(), static_cast<std::size_t>(binomial(11, 6)));
    EXPECT_EQ(b->total(0), 0);
    for (std::size_t i = 1; i < b->size(); ++i) EXPECT_LE(b->total(i - 1), b->total(i));
    for (std::size_t i = 0; i < b->size(); ++i) {
        const auto s = b->state(i);
        EXPECT_EQ(b->find(s.occ, s.total), static_cast<long>(i));
    }
    EXPECT_TRUE(b->negation_closed());
}

TEST(Basis, SizeLimitRefusesWithCount) {
    try {
        make_basis({1, 2}, 12, 1000);
        FAIL();
    } catch (const GuardError& e) {
        EXPECT_NE(std::string(e.what()).find("states"), std::string::npos);
    }
}

TEST(Basis, RejectsZeroModeAndDuplicates) {
    EXPECT_THROW(FockBasis({Mode{{0, 0, 0}}}, 2), InvalidArgument);
    EXPECT_THROW(FockBasis({Mode{{1, 0, 0}}, Mode{{1, 0, 0}}}, 2), InvalidArgument);
}

TEST(Operators, CanonicalCommutatorBelowCap) {
    auto b = make_basis({1}, 4);
    const Mode p{{1, 0, 0}}, q{{0, 1, 0}};
    const auto c = commutator(ladder(b, p, Ladder::annihilate), ladder(b, p, Ladder::create));
    const auto cq = commutator(ladder(b, p, Ladder::annihilate), ladder(b, q, Ladder::create));
    for (std::size_t i = 0; i < b->size(); ++i) {
        if (b->total(i) >= 4) continue; // truncation edge
        EXPECT_NEAR(c.matrix.coeff(i, i), 1.0, 1e-14);
        for (std::size_t j = 0; j < b->size(); ++j)
            if (b->total(j) < 4) EXPECT_NEAR(cq.matrix.coeff(j, i), 0.0, 1e-14);
    }
}

TEST(Operators, AdjointAndNumber) {
    auto b = make_basis({1}, 3);
    const Mode p{{0, 0, -1}};
    const auto cr = ladder(b, p, Ladder::create);
    const auto an = ladder(b, p, Ladder::annihilate);
    EXPECT_LT(max_abs(adjoint(cr).matrix - an.matrix), 1e-15);
    const auto n = ladder_product(b, {{p, Ladder::create}, {p, Ladder::annihilate}});
    EXPECT_LT(max_abs(n.matrix - mode_number(b, p).matrix), 1e-15);
}

TEST(Operators, ModifiedLaddersPreserveTruncation) {
    const int N = 6;
    auto b = make_basis({1}, N);
    const Mode p{{1, 0, 0}};
    const auto bc = ladder(b, p, Ladder::b_create, N);
    for (std::size_t i = 0; i < b->size(); ++i)
        if (b->total(i) == N) EXPECT_EQ(bc.matrix.col(i).norm(), 0.0);
    // b*_p b_p = a*_p sqrt(1 - N+/N)^2 a_p on states below the cap.
    const auto bn = ladder_product(b, {{p, Ladder::b_create}, {p, Ladder::b_annihilate}}, N);
    for (std::size_t i = 0; i < b->size(); ++i) {
        const double np = b->occ(i)[b->mode_index(p)];
        const double t = b->total(i);
        EXPECT_NEAR(bn.matrix.coeff(i, i), np * (1.0 - (t - 1.0) / N), 1e-14);
    }
}

TEST(Operators, HamiltonianConservesMomentumAndIsSymmetric) {
    auto b = make_basis({1}, 4);
    const auto H = build_LN(b, 20, RadialPotential::soft_sphere(10, 0.5));
    EXPECT_LT(symmetry_defect(H.matrix), 1e-12);
    for (int d = 0; d < 3; ++d) {
        const auto P = momentum_operator(b, d);
        EXPECT_LT(max_abs(commutator(H, P).matrix), 1e-10);
    }
}

TEST(Operators, FreeHamiltonianIsKinetic) {
    auto b = make_basis({1, 2}, 2);
    const auto H = build_LN(b, 10, RadialPotential::zero());
    EXPECT_LT(max_abs(H.matrix - build_K(b).matrix), 1e-12);
}

TEST(Gibbs, QuadraticOracleMatchesClosedForm) {
    auto b = make_basis({1}, 12);
    for (double beta : {0.5, 1.0, 2.0}) {
        std::vector<double> eps(6, 4 * M_PI * M_PI);
        const auto g = gibbs(build_D(b, eps), beta);
        EXPECT_NEAR(g.trace(), 1.0, 1e-14);
        const auto joint = capped_occupations(eps, beta, 12);
        for (int k = 0; k < 6; ++k) {
            const double n = expect(g, mode_number(b, b->modes()[k]));
            EXPECT_NEAR(n, occupation_closed_form(eps[k], beta, 12).capped, 1e-12);
            EXPECT_NEAR(n, joint[k], 1e-12);
        }
    }
}

TEST(Gibbs, HighTemperatureCapMatters) {
    // With a low cap and small beta the joint cap differs from the single-mode cap.
    auto b = make_basis({1}, 3);
    std::vector<double> eps(6, 1.0);
    const auto g = gibbs(build_D(b, eps), 0.1);
    const auto joint = capped_occupations(eps, 0.1, 3);
    const double n = expect(g, mode_number(b, b->modes()[0]));
    EXPECT_NEAR(n, joint[0], 1e-13);
    EXPECT_GT(std::abs(n - occupation_closed_form(1.0, 0.1, 3).capped), 1e-3);
    EXPECT_LT(occupation_closed_form(1.0, 0.1, 3).capped, occupation_closed_form(1.0, 0.1, 3).uncapped);
}

TEST(Gibbs, RejectsNonHermitian) {
    auto b = make_basis({1}, 2);
    EXPECT_THROW(gibbs(ladder(b, Mode{{1, 0, 0}}, Ladder::create), 1.0), InvalidArgument);
    EXPECT_THROW(gibbs(number_operator(b), 0.0), InvalidArgument);
}

TEST(Partition, SandwichAndGap) {
    std::vector<double> eps(6, dispersion(4 * M_PI * M_PI, 0.05));
    double prev_gap = INFINITY;
    for (int M : {8, 12, 16}) {
        const FockBasis b(shell_modes(std::vector<int>{1}), M);
        const auto pc = partition_product_check(b, eps, 0.05);
        EXPECT_TRUE(pc.sandwich_holds());
        EXPECT_TRUE(pc.gap_holds());
        EXPECT_NEAR(pc.product_full - pc.brute, pc.excess, 1e-10 * pc.product_full);
        EXPECT_LT(pc.gap, prev_gap);
        prev_gap = pc.gap;
    }
}

TEST(Rotation, UnitaryAndActsLinearly) {
    auto b = make_basis({1}, 10);
    std::vector<double> c(6, 0.2);
    const auto U = exponentiate(build_quadratic_generator(b, c, GeneratorKind::a_type));
    EXPECT_LT(U.unitarity_defect, 1e-12);
    // Vacuum: <a*_p a_p> = sinh^2 c up to truncation.
    const double n = rotated_diagonal(U, mode_number(b, b->modes()[0]).matrix, 0);
    EXPECT_NEAR(n, std::pow(std::sinh(0.2), 2), 1e-6);
}

TEST(Rotation, GroundStateWithinTruncationBound) {
    for (double a : {0.05, 2.0}) {
        auto b = make_basis({1}, 12);
        std::vector<double> nu, eps, pair_c;
        for (const auto& m : b->modes()) {
            nu.push_back(nu_coefficient(m.p_sq(), a));
            eps.push_back(dispersion(m.p_sq(), a));
            if (-m < m) pair_c.push_back(nu.back());
        }
        ASSERT_EQ(pair_c.size(), 3u);
        const auto tail = squeezing_truncation_bound(pair_c, 12);
        const auto num = rotated_number_expectation(b, nu, eps, 1e3);
        double exp_n = 0;
        for (double c : pair_c) exp_n += 2 * std::pow(std::sinh(c), 2);
        EXPECT_LE(std::abs(num.oracle.value - exp_n), tail.number_bound + rounding_allowance(12, exp_n)) << a;
        const auto pr = pairing_expectation(b, nu, eps, 1e3, b->modes()[0]);
        const double exp_p = 0.5 * std::sinh(2 * nu[0]);
        EXPECT_LE(std::abs(pr.oracle.value - exp_p), tail.pairing_bound + rounding_allowance(12, exp_p)) << a;
    }
}

TEST(Rotation, BoundIsNontrivialForStrongSqueezing) {
    std::vector<double> c(3, -0.316);
    const auto t = squeezing_truncation_bound(c, 12);
    EXPECT_GT(t.number_bound, 0.0);
    // Loose but below the squeezed occupation itself (6 sinh^2 0.316 = 0.62).
    EXPECT_LT(t.number_bound, 0.5 * 6 * std::pow(std::sinh(0.316), 2));
    EXPECT_GT(squeezing_truncation_bound(c, 6).number_bound, t.number_bound);
    EXPECT_LT(squeezing_truncation_bound(c, 16).number_bound, t.number_bound);
}

TEST(Rotation, GuardRefusesOverloadedCap) {
    auto b = make_basis({1}, 2);
    std::vector<double> nu(6, -1.5), eps(6, 1.0);
    EXPECT_THROW(RotatedGibbs(b, nu, eps, 1.0), GuardError);
}

TEST(Adjudication, DerivedVariantWins) {
    const std::vector<int> shells{1};
    const auto rep = adjudicate_variants(0.05, 2.0, shells, 10);
    EXPECT_EQ(rep.theta.winner, "B_derived");
    EXPECT_EQ(rep.pairing.winner, "B_derived");
    EXPECT_GT(rep.theta.ratio, 10.0);
    EXPECT_EQ(rep.rows.size(), 1u);
}

TEST(Adjudication, JudgeClassifiesDegenerateCases) {
    EXPECT_EQ(fock::detail::judge(1.0, 2.0, 2.0).winner, "degenerate");
    EXPECT_EQ(fock::detail::judge(0.0, 1.0, 2.0).winner, "degenerate");
    EXPECT_EQ(fock::detail::judge(1.0, 1.1, 0.92).winner, "inconclusive");
    EXPECT_EQ(fock::detail::judge(1.0, 1.0, 3.0).winner, "A_paper");
}

TEST(Toy, FreeGasIsExact) {
    const std::vector<int> shells{1};
    const auto r = toy_gibbs_experiment(20, RadialPotential::zero(), shells, 8, 0.5, 0.0);
    std::vector<double> eps(6, 4 * M_PI * M_PI);
    const auto ex = capped_occupations(eps, 0.5, 8);
    for (double n : r.gibbs.occupations) EXPECT_NEAR(n, ex[0], 1e-12);
    EXPECT_LT(r.max_offdiagonal, 1e-14);
    EXPECT_EQ(r.rows.size(), 1u);
}

TEST(Toy, InteractingGasIsMomentumDiagonal) {
    const std::vector<int> shells{1};
    const auto r = toy_gibbs_experiment(20, RadialPotential::soft_sphere(10, 0.5), shells, 6, 1.0, 0.03);
    EXPECT_LT(r.max_offdiagonal, 1e-12);
    EXPECT_GT(r.gibbs.n_plus, 0.0);
    EXPECT_LT(r.gibbs.pairings[0], 0.0);
    EXPECT_THROW(toy_gibbs_experiment(4, RadialPotential::zero(), shells, 6, 1.0, 0.0), GuardError);
}
