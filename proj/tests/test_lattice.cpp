#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "bogo/lattice.hpp"
#include "bogo/quadrature.hpp"

using namespace bogo;

TEST(Lattice, ShellMultiplicities) {
    const auto shells = enumerate_shells(9);
    std::map<int, std::size_t> mult;
    for (const auto& s : *shells) mult[s.norm_sq] = s.multiplicity();
    EXPECT_EQ(mult[1], 6u);
    EXPECT_EQ(mult[2], 12u);
    EXPECT_EQ(mult[3], 8u);
    EXPECT_EQ(mult[4], 6u);
    EXPECT_EQ(mult[5], 24u);
    EXPECT_EQ(mult[9], 30u);
    EXPECT_EQ(mult.count(7), 0u); // 7 is not a sum of three squares
}

TEST(Lattice, ModesClosedUnderNegation) {
    const auto modes = enumerate_modes(30);
    std::set<Mode> all(modes.begin(), modes.end());
    EXPECT_EQ(all.size(), modes.size());
    for (const auto& m : modes) EXPECT_TRUE(all.count(-m));
}

TEST(Lattice, ShellOrderAscending) {
    const auto shells = enumerate_shells(50);
    for (std::size_t i = 1; i < shells->size(); ++i) EXPECT_LT((*shells)[i - 1].norm_sq, (*shells)[i].norm_sq);
    for (const auto& s : *shells)
        for (const auto& m : s.members) EXPECT_EQ(m.norm_sq(), s.norm_sq);
}

TEST(Lattice, CachedListIsShared) { EXPECT_EQ(enumerate_shells(20).get(), enumerate_shells(20).get()); }

TEST(Lattice, MomentumUnits) {
    const Mode m{{1, -2, 0}};
    EXPECT_DOUBLE_EQ(m.p_sq(), 4 * M_PI * M_PI * 5);
    EXPECT_DOUBLE_EQ(m.p()[1], -4 * M_PI);
}

TEST(Lattice, TailBoundCoversTruncation) {
    // sum |n|^-4 converges; the difference between cutoffs must sit under the bound.
    auto f = [](const Mode& m) { return 1.0 / std::pow(m.norm_sq(), 2.0); };
    const auto small = lattice_sum(f, 50, 2.0);
    const auto big = lattice_sum(f, 400, 2.0);
    EXPECT_GT(big.value, small.value);
    EXPECT_LE(big.value - small.value, small.tail_bound);
    EXPECT_GT(small.tail_bound, 0.0);
}

TEST(Lattice, TailExponentGuard) {
    EXPECT_THROW(lattice_sum([](const Mode&) { return 1.0; }, 10, 1.5), InvalidArgument);
}

TEST(Lattice, CompensatedSumRecoversSmallTerms) {
    CompensatedSum s;
    s += 1.0;
    for (int i = 0; i < 1000; ++i) s += 1e-16;
    s += -1.0;
    EXPECT_NEAR(s.value(), 1e-13, 1e-25);
}

TEST(Quadrature, GaussLegendreExactOnPolynomials) {
    const double v = quad::panels([](double x) { return std::pow(x, 19) - 3 * x * x; }, -1.0, 2.0, 1);
    const double exact = (std::pow(2.0, 20) - 1.0) / 20.0 - (8.0 + 1.0);
    EXPECT_NEAR(v, exact, 1e-12 * std::abs(exact));
}

TEST(Quadrature, RadialFourierOfBall) {
    // Indicator of the unit ball: 4 pi (sin k - k cos k) / k^3.
    for (double k : {0.0, 0.5, 3.0, 20.0}) {
        const double v = quad::radial_fourier([](double) { return 1.0; }, k, 1.0, std::vector<double>{}, 4);
        const double exact = k == 0.0 ? 4.0 * M_PI / 3.0 : 4.0 * M_PI * (std::sin(k) - k * std::cos(k)) / (k * k * k);
        EXPECT_NEAR(v, exact, 1e-12 * (1.0 + std::abs(exact))) << "k=" << k;
    }
}
