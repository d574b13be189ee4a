#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "bogo/error.hpp"
#include "bogo/lattice.hpp"

namespace bogo {

enum class Variant { A_paper, B_derived };

inline std::string variant_name(Variant v) { return v == Variant::A_paper ? "A_paper" : "B_derived"; }

inline double dispersion(double p_sq, double a) {
    return std::sqrt(p_sq * p_sq + 16.0 * std::numbers::pi * a * p_sq);
}

/// (p^2 + 8 pi a - eps) / (2 eps), rewritten without the cancellation.
inline double mu_sq(double p_sq, double a) {
    const double pi = std::numbers::pi;
    const double eps = dispersion(p_sq, a);
    return 32.0 * pi * pi * a * a / (eps * (p_sq + 8.0 * pi * a + eps));
}

/// 1 / (e^{x} - 1); exactly 0 once e^{x} overflows.
inline double bose_factor(double x) {
    const double d = std::expm1(x);
    return std::isinf(d) ? 0.0 : 1.0 / d;
}

inline double theta_sq(double p_sq, double a, double beta, Variant v) {
    const double eps = dispersion(p_sq, a);
    const double t = (p_sq + 8.0 * std::numbers::pi * a) * bose_factor(beta * eps);
    return v == Variant::A_paper ? t : t / eps;
}

inline double pairing_coeff(double p_sq, double a, double beta, Variant v) {
    const double eps = dispersion(p_sq, a);
    const double n = bose_factor(beta * eps);
    const double c = 4.0 * std::numbers::pi * a;
    return v == Variant::A_paper ? -c * (1.0 / eps + 2.0 * n) : -(c / eps) * (1.0 + 2.0 * n);
}

/// pairing_coeff minus its zero-temperature value -4 pi a / eps.
inline double pairing_thermal(double p_sq, double a, double beta, Variant v) {
    const double eps = dispersion(p_sq, a);
    const double t = -8.0 * std::numbers::pi * a * bose_factor(beta * eps);
    return v == Variant::A_paper ? t : t / eps;
}

inline double nu_coefficient(double p_sq, double a) { return -0.25 * std::log1p(16.0 * std::numbers::pi * a / p_sq); }

struct ThermalConfig {
    double a = 0.0;
    double beta = 1.0;
    Variant variant = Variant::B_derived;

    void validate() const {
        if (!(a >= 0.0) || !std::isfinite(a)) throw InvalidArgument("ThermalConfig: a must be finite and >= 0");
        if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidArgument("ThermalConfig: beta must be finite and > 0");
    }
};

struct ModeCoefficients {
    Mode mode;
    double p_sq = 0.0;
    double eps = 0.0;
    double mu_sq = 0.0;
    double theta_sq_A = 0.0;
    double theta_sq_B = 0.0;
    double nu = 0.0;
    double pairing_A = 0.0;
    double pairing_B = 0.0;

    double theta_sq(Variant v) const { return v == Variant::A_paper ? theta_sq_A : theta_sq_B; }
    double pairing(Variant v) const { return v == Variant::A_paper ? pairing_A : pairing_B; }
};

inline ModeCoefficients mode_coefficients(const Mode& m, double a, double beta) {
    ModeCoefficients c;
    c.mode = m;
    c.p_sq = m.p_sq();
    c.eps = dispersion(c.p_sq, a);
    c.mu_sq = bogo::mu_sq(c.p_sq, a);
    c.theta_sq_B = bogo::theta_sq(c.p_sq, a, beta, Variant::B_derived);
    c.theta_sq_A = c.theta_sq_B * c.eps;
    c.nu = nu_coefficient(c.p_sq, a);
    c.pairing_A = pairing_coeff(c.p_sq, a, beta, Variant::A_paper);
    c.pairing_B = pairing_coeff(c.p_sq, a, beta, Variant::B_derived);
    return c;
}

/// One row per shell up to the cutoff, evaluated at the shell's first member.
inline std::vector<ModeCoefficients> shell_coefficients(const ThermalConfig& cfg, int max_norm_sq) {
    cfg.validate();
    std::vector<ModeCoefficients> rows;
    for (const Shell& sh : *enumerate_shells(max_norm_sq)) rows.push_back(mode_coefficients(sh.members.front(), cfg.a, cfg.beta));
    return rows;
}

struct DepletionSums {
    SumResult sum_mu;
    SumResult sum_theta;
    double total() const { return sum_mu.value + sum_theta.value; }
};

/// Lattice sums of mu_p^2 and theta_p^2 (cfg.variant) over 1 <= |n|^2 <= max_norm_sq.
inline DepletionSums depletion_sums(const ThermalConfig& cfg, int max_norm_sq) {
    cfg.validate();
    DepletionSums d;
    d.sum_mu = lattice_sum([&](const Mode& m) { return mu_sq(m.p_sq(), cfg.a); }, max_norm_sq, 2.0);
    // theta decays exponentially; any s > 3/2 gives a valid (loose) tail.
    d.sum_theta = lattice_sum([&](const Mode& m) { return theta_sq(m.p_sq(), cfg.a, cfg.beta, cfg.variant); },
                              max_norm_sq, 2.0);
    return d;
}

} // namespace bogo
