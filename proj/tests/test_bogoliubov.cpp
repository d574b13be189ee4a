#include <gtest/gtest.h>

#include <cmath>

#include "bogo/bogoliubov.hpp"

using namespace bogo;

namespace {
double rel(double x, double y) { return std::abs(x - y) / std::max(std::abs(y), 1e-300); }
} // namespace

TEST(Bogoliubov, HyperbolicIdentities) {
    for (double a : {0.1, 1.0, 10.0})
        for (const auto& sh : *enumerate_shells(50)) {
            const auto c = mode_coefficients(sh.members.front(), a, 1.0);
            EXPECT_LT(rel(std::pow(std::sinh(c.nu), 2), c.mu_sq), 1e-12) << a << " " << sh.norm_sq;
            EXPECT_LT(rel(std::cosh(2 * c.nu), (c.p_sq + 8 * M_PI * a) / c.eps), 1e-12);
        }
}

TEST(Bogoliubov, DispersionClosedForm) {
    const double p2 = 4 * M_PI * M_PI;
    EXPECT_DOUBLE_EQ(dispersion(p2, 0.0), p2);
    EXPECT_NEAR(dispersion(p2, 0.5), std::sqrt(p2 * p2 + 8 * M_PI * p2), 1e-12 * p2);
}

TEST(Bogoliubov, MuSqStableAgainstNaiveForm) {
    const double p2 = 4 * M_PI * M_PI * 2;
    for (double a : {0.05, 3.0}) {
        const double e = dispersion(p2, a);
        const double naive = (p2 + 8 * M_PI * a - e) / (2 * e);
        EXPECT_NEAR(mu_sq(p2, a), naive, 1e-9 * naive);
    }
    // Small a: the naive form cancels; compare with the leading term 16 pi^2 a^2 / p^4.
    const double a = 1e-6;
    const double lead = 16 * M_PI * M_PI * a * a / (p2 * p2);
    EXPECT_NEAR(mu_sq(p2, a), lead, 1e-5 * lead);
}

TEST(Bogoliubov, ZeroScatteringLength) {
    for (const auto& c : shell_coefficients({0.0, 2.0, Variant::B_derived}, 20)) {
        EXPECT_EQ(c.mu_sq, 0.0);
        EXPECT_EQ(c.nu, 0.0);
        EXPECT_EQ(c.pairing_A, 0.0);
        EXPECT_EQ(c.pairing_B, 0.0);
        EXPECT_EQ(c.eps, c.p_sq);
    }
}

TEST(Bogoliubov, VariantRelation) {
    const auto c = mode_coefficients(Mode{{1, 1, 0}}, 0.3, 0.01);
    EXPECT_NEAR(c.theta_sq_A, c.theta_sq_B * c.eps, 1e-14 * c.theta_sq_A);
    EXPECT_GT(c.theta_sq_B, 0.0);
}

TEST(Bogoliubov, ThetaDecreasesInBeta) {
    for (const auto& sh : *enumerate_shells(30)) {
        const Mode& m = sh.members.front();
        double prev = INFINITY;
        for (double beta : {0.001, 0.005, 0.01}) {
            const double t = theta_sq(m.p_sq(), 0.2, beta, Variant::B_derived);
            EXPECT_LT(t, prev);
            prev = t;
        }
    }
}

TEST(Bogoliubov, BoseFactorUnderflowsToZero) {
    EXPECT_EQ(bose_factor(1e5), 0.0);
    EXPECT_NEAR(bose_factor(1e-8), 1e8, 1.0);
    EXPECT_EQ(theta_sq(4 * M_PI * M_PI, 0.1, 1e3, Variant::A_paper), 0.0);
}

TEST(Bogoliubov, PairingZeroTemperatureLimit) {
    const double p2 = 4 * M_PI * M_PI;
    const double e = dispersion(p2, 0.1);
    for (Variant v : {Variant::A_paper, Variant::B_derived})
        EXPECT_NEAR(pairing_coeff(p2, 0.1, 1e3, v), -4 * M_PI * 0.1 / e, 1e-15);
}

TEST(Bogoliubov, PairingThermalPart) {
    const double p2 = 4 * M_PI * M_PI, a = 0.4, beta = 0.02;
    for (Variant v : {Variant::A_paper, Variant::B_derived}) {
        const double full = pairing_coeff(p2, a, beta, v);
        const double ground = pairing_coeff(p2, a, 1e4, v);
        EXPECT_NEAR(full - ground, pairing_thermal(p2, a, beta, v), 1e-12 * std::abs(full));
    }
}

TEST(Bogoliubov, DepletionTailCoversCutoffDoubling) {
    const ThermalConfig cfg{0.3, 1.0, Variant::B_derived};
    const auto d1 = depletion_sums(cfg, 100);
    const auto d2 = depletion_sums(cfg, 200);
    EXPECT_LE(std::abs(d2.sum_mu.value - d1.sum_mu.value), d1.sum_mu.tail_bound);
    EXPECT_LE(std::abs(d2.sum_theta.value - d1.sum_theta.value), d1.sum_theta.tail_bound + 1e-300);
}

TEST(Bogoliubov, InvalidConfig) {
    EXPECT_THROW((ThermalConfig{-1.0, 1.0}).validate(), InvalidArgument);
    EXPECT_THROW((ThermalConfig{0.1, 0.0}).validate(), InvalidArgument);
    EXPECT_THROW((ThermalConfig{0.1, INFINITY}).validate(), InvalidArgument);
}
