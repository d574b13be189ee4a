#include <gtest/gtest.h>

#include <cmath>

#include "bogo/scattering.hpp"

using namespace bogo;

namespace {
double soft_sphere_a(double v0, double R) {
    const double k = std::sqrt(v0 / 2.0);
    return R - std::tanh(k * R) / k;
}
} // namespace

TEST(Potential, Evaluation) {
    const auto V = RadialPotential::soft_sphere(100, 0.5);
    EXPECT_EQ(V(0.2), 100.0);
    EXPECT_EQ(V(0.6), 0.0);
    const auto G = RadialPotential::gaussian_truncated(2.0, 1.0, 3.0);
    EXPECT_NEAR(G(1.0), 2.0 * std::exp(-1.0), 1e-15);
    EXPECT_EQ(G(3.1), 0.0);
    const auto T = RadialPotential::tabulated({0.0, 1.0, 2.0}, {4.0, 2.0, 0.0});
    EXPECT_DOUBLE_EQ(T(0.5), 3.0);
    EXPECT_EQ(T(2.5), 0.0);
    EXPECT_DOUBLE_EQ(V.scaled(0.1)(0.1), 10.0);
}

TEST(Potential, RejectsBadInput) {
    EXPECT_THROW(RadialPotential::soft_sphere(-1, 1), InvalidArgument);
    EXPECT_THROW(RadialPotential::soft_sphere(1, 0), InvalidArgument);
    EXPECT_THROW(RadialPotential::tabulated({0.0, 1.0, 0.5}, {1, 1, 1}), InvalidArgument);
    EXPECT_THROW(RadialPotential::tabulated({0.1, 1.0}, {1, 1}), InvalidArgument);
}

TEST(Potential, SoftSphereFourier) {
    const double v0 = 100, R = 0.5;
    const auto V = RadialPotential::soft_sphere(v0, R);
    for (double k : {0.0, 1.0, 7.0, 40.0}) {
        const double exact =
            k == 0 ? 4 * M_PI * v0 * R * R * R / 3 : 4 * M_PI * v0 * (std::sin(k * R) - k * R * std::cos(k * R)) / (k * k * k);
        EXPECT_NEAR(V.fourier(k), exact, 1e-11 * 4 * M_PI * v0 * R * R * R / 3) << k;
    }
}

TEST(Scattering, SoftSphereClosedForm) {
    for (auto [v0, R] : {std::pair{100.0, 0.5}, {10.0, 1.0}, {0.5, 2.0}}) {
        const auto sol = solve_scattering(RadialPotential::soft_sphere(v0, R), 20 * R);
        const double a = soft_sphere_a(v0, R);
        EXPECT_NEAR(sol.a, a, 1e-10 * a) << v0 << " " << R;
    }
}

TEST(Scattering, ZeroPotential) {
    EXPECT_EQ(solve_scattering(RadialPotential::zero(), 5.0).a, 0.0);
    EXPECT_EQ(solve_scattering(RadialPotential::soft_sphere(0.0, 1.0), 5.0).a, 0.0);
}

TEST(Scattering, SolutionIsAffineOutside) {
    const auto sol = solve_scattering(RadialPotential::soft_sphere(100, 0.5), 10.0);
    for (double r : {1.0, 3.0, 9.5}) {
        const auto [u, du] = sol.trajectory.eval(r);
        EXPECT_NEAR(u, r - sol.a, 1e-12);
        EXPECT_NEAR(du, 1.0, 1e-12);
    }
}

TEST(Scattering, EnergyFunctionalMatchesOde) {
    const auto V = RadialPotential::gaussian_truncated(20.0, 0.4, 1.0);
    const auto sol = solve_scattering(V, 20.0);
    EXPECT_GT(sol.a, 0.0);
    EXPECT_NEAR(energy_functional(sol), sol.a, 1e-6 * sol.a);
}

TEST(Scattering, ScatteringLengthBelowBornAndRadius) {
    const auto V = RadialPotential::soft_sphere(100, 0.5);
    const double a = solve_scattering(V, 10.0).a;
    EXPECT_LT(a, 0.5);
    EXPECT_LT(a, V.fourier(0.0) / (8 * M_PI));
}

TEST(Scattering, RejectsSmallRmax) {
    EXPECT_THROW(solve_scattering(RadialPotential::soft_sphere(1, 1), 0.5), InvalidArgument);
}

TEST(Neumann, LambdaApproachesScatteringLength) {
    const auto V = RadialPotential::soft_sphere(100, 0.5);
    const double a = solve_scattering(V, 10.0).a;
    double prev = INFINITY;
    for (double R : {25.0, 50.0, 100.0}) {
        const auto ns = solve_neumann(V, R);
        const double err = std::abs(ns.lambda * R * R * R / 3 / a - 1);
        EXPECT_LT(err, prev);
        prev = err;
        EXPECT_LT(std::abs(ns.boundary_residual), 1e-10);
        EXPECT_NEAR(ns.f(R), 1.0, 1e-12);
    }
    EXPECT_LT(prev, 0.01);
}

TEST(Neumann, ZeroPotentialIsTrivial) {
    const auto ns = solve_neumann(RadialPotential::zero(), 10.0);
    EXPECT_EQ(ns.lambda, 0.0);
    EXPECT_NEAR(ns.f(3.0), 1.0, 1e-14);
}

TEST(Kernels, IdentityAndDecay) {
    const auto V = RadialPotential::soft_sphere(100, 0.5);
    const double a = solve_scattering(V, 10.0).a;
    const auto kt = build_kernel_table(V, a, 100, 0.495, 60);
    ASSERT_EQ(kt.modes.size(), kt.eta.size());
    for (std::size_t i = 0; i < kt.modes.size(); i += 7) {
        const auto id = kernel_identity(*kt.neumann, 100, kt.modes[i], kt.eta[i]);
        EXPECT_LT(id.residual(), 1e-11 * id.scale) << kt.modes[i].norm_sq();
    }
    for (const auto& r : kt.shell_rows()) {
        EXPECT_TRUE(std::isfinite(r.eta) && std::isfinite(r.tau));
        EXPECT_LT(r.eta, 0.0);
        EXPECT_LT(std::abs(r.eta) * r.p_abs * r.p_abs, 10.0);
    }
}

TEST(Kernels, ZeroPotential) {
    const auto kt = build_kernel_table(RadialPotential::zero(), 0.0, 50, 0.4, 10);
    for (std::size_t i = 0; i < kt.modes.size(); ++i) {
        EXPECT_EQ(kt.eta[i], 0.0);
        EXPECT_EQ(kt.tau[i], 0.0);
        EXPECT_EQ(kt.nu[i], 0.0);
    }
}

TEST(Kernels, RejectsBadEll) {
    const auto V = RadialPotential::soft_sphere(100, 0.5);
    EXPECT_THROW(build_kernel_table(V, 0.3, 100, 0.5, 10), InvalidArgument);
    EXPECT_THROW(build_kernel_table(V, 0.3, 0, 0.4, 10), InvalidArgument);
}
