#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <span>
#include <vector>

#include "bogo/bogoliubov.hpp"
#include "bogo/error.hpp"
#include "bogo/lattice.hpp"
#include "bogo/potential.hpp"
#include "bogo/quadrature.hpp"
#include "bogo/radial_ode.hpp"

namespace bogo {

// Zero-energy scattering solution u(r) = r f(r) of u'' = (V/2) u, scaled so
// that u(r) = r - a outside the support of V.
struct ScatteringSolution {
    double a = 0.0;
    double r_max = 0.0;
    RadialPotential potential = RadialPotential::zero();
    RadialTrajectory trajectory;

    const std::vector<double>& grid() const { return trajectory.r; }
    const std::vector<double>& u() const { return trajectory.u; }

    double f(double r) const {
        if (r <= 0.0) return trajectory.du.front();
        if (r >= r_max) return 1.0 - a / r;
        return trajectory.eval(r)[0] / r;
    }
};

inline ScatteringSolution solve_scattering(const RadialPotential& V, double r_max, double tol = 1e-12) {
    if (!(tol > 0.0)) throw InvalidArgument("solve_scattering: tol must be > 0");
    if (!(r_max > V.support_radius()))
        throw InvalidArgument("solve_scattering: r_max must exceed the support radius (affine regime not reached)");

    ScatteringSolution sol;
    sol.r_max = r_max;
    sol.potential = V;
    OdeOptions opt;
    opt.tol = tol;
    opt.max_step = V.support_radius() > 0 ? V.support_radius() / 16 : 0.0;
    auto q = [&V](double r) { return 0.5 * V(r); };
    // Beyond the support u is affine and the integrator is exact there.
    std::vector<double> bps = V.breakpoints();
    const double rs = V.support_radius();
    sol.trajectory = integrate_radial(q, rs > 0 ? rs : r_max, bps, opt);
    if (rs > 0) {
        RadialTrajectory& t = sol.trajectory;
        const double u_s = t.u.back(), d_s = t.du.back();
        // Affine continuation sampled geometrically up to r_max.
        double r = rs;
        while (r < r_max) {
            const double next = std::min(r_max, std::max(r * 1.25, r + 1e-3));
            t.q_left.push_back(0.0);
            t.q_right.push_back(0.0);
            t.r.push_back(next);
            t.u.push_back(u_s + d_s * (next - rs));
            t.du.push_back(d_s);
            r = next;
        }
        // The last interval inside the support keeps its one-sided values.
    }
    RadialTrajectory& t = sol.trajectory;
    const double c = t.du.back();
    if (!(c > 0.0)) throw SolverError("solve_scattering: non-positive slope outside the support");
    const double r_end = t.r.back();
    sol.a = r_end - t.u.back() / c;
    if (rs > 0) {
        // Read a off at the support radius where the affine regime starts.
        for (std::size_t i = 0; i < t.r.size(); ++i)
            if (t.r[i] == rs) {
                sol.a = rs - t.u[i] / t.du[i];
                break;
            }
    }
    if (V.is_zero()) sol.a = 0.0;
    t.scale(1.0 / c);
    return sol;
}

/// (1/8pi) * [int 2|grad f|^2 + V f^2 over the ball of radius r_max]
/// + a^2 / r_max (analytic exterior tail of f = 1 - a/r).
inline double energy_functional(const ScatteringSolution& sol) {
    const RadialTrajectory& t = sol.trajectory;
    const RadialPotential& V = sol.potential;
    CompensatedSum acc;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        const double lo = t.r[i], hi = t.r[i + 1];
        const double scale = std::max(lo, 1e-3);
        const int n = std::max(1, static_cast<int>(std::ceil((hi - lo) / (0.25 * scale))));
        acc += quad::panels(
            [&](double r) {
                const auto [u, du] = t.eval(r);
                const double g = du - u / r;
                return 2.0 * g * g + V(r) * u * u;
            },
            lo, hi, n);
    }
    return 0.5 * acc.value() + sol.a * sol.a / sol.r_max;
}

/// Ground state of -Delta f + V f / 2 = lambda f on the ball of radius R with
/// Neumann data, normalized by f(R) = 1.
struct NeumannSolution {
    double R = 0.0;
    double lambda = 0.0;
    double boundary_residual = 0.0; // u'(R) - u(R)/R after normalization
    RadialPotential potential = RadialPotential::zero();
    RadialTrajectory trajectory;

    const std::vector<double>& grid() const { return trajectory.r; }
    const std::vector<double>& u() const { return trajectory.u; }

    double f(double r) const {
        if (r <= 0.0) return trajectory.du.front();
        if (r >= R) return 1.0;
        return trajectory.eval(r)[0] / r;
    }
    double w(double r) const { return 1.0 - f(r); }
};

inline NeumannSolution solve_neumann(const RadialPotential& V, double R, double tol = 1e-12) {
    if (!(R > V.support_radius())) throw InvalidArgument("solve_neumann: R must exceed the support radius");
    if (!(tol > 0.0)) throw InvalidArgument("solve_neumann: tol must be > 0");

    OdeOptions opt;
    opt.tol = tol;
    opt.max_step = R / 64;
    if (V.support_radius() > 0) {
        opt.inner_max_step = V.support_radius() / 16;
        opt.inner_radius = V.support_radius();
    }
    const std::vector<double> bps = V.breakpoints();
    auto shoot = [&](double lambda) {
        return integrate_radial([&](double r) { return 0.5 * V(r) - lambda; }, R, bps, opt);
    };
    auto mismatch = [&](const RadialTrajectory& t) { return t.du.back() - t.u.back() / R; };

    NeumannSolution sol;
    sol.R = R;
    sol.potential = V;

    if (V.is_zero()) {
        sol.trajectory = shoot(0.0);
        sol.lambda = 0.0;
    } else {
        double lo = 0.0;
        const double g_lo = mismatch(shoot(lo));
        if (!(g_lo > 0.0)) throw SolverError("solve_neumann: mismatch at lambda = 0 is not positive");
        const double base = std::numbers::pi * std::numbers::pi / (R * R);
        double hi = base;
        double g_hi = mismatch(shoot(hi));
        if (g_hi > 0.0) {
            // Scan toward the extended bracket for the first sign change.
            const double top = base + 0.5 * V.max_value();
            constexpr int n_scan = 256;
            bool found = false;
            double prev = base;
            for (int k = 1; k <= n_scan; ++k) {
                const double x = base + (top - base) * k / n_scan;
                if (mismatch(shoot(x)) <= 0.0) {
                    lo = prev;
                    hi = x;
                    found = true;
                    break;
                }
                prev = x;
            }
            if (!found) throw SolverError("solve_neumann: lambda bracket exhausted without a sign change");
        }
        for (int it = 0; it < 400 && (hi - lo) > tol * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mismatch(shoot(mid)) > 0.0)
                lo = mid;
            else
                hi = mid;
        }
        sol.lambda = 0.5 * (lo + hi);
        sol.trajectory = shoot(sol.lambda);
    }

    RadialTrajectory& t = sol.trajectory;
    for (std::size_t i = 1; i < t.size(); ++i)
        if (!(t.u[i] > 0.0)) throw SolverError("solve_neumann: solution has an interior zero (not the ground state)");
    t.scale(R / t.u.back());
    sol.boundary_residual = mismatch(t);
    return sol;
}

// --- correlation kernels ---------------------------------------------------

namespace detail {

inline void check_resolution(double k, double R) {
    // Beyond ~10^6 panels the transform is no longer resolved reliably.
    if (!std::isfinite(k) || std::abs(k) * R / 2.0 > 1e6)
        throw InvalidArgument("kernel: mode beyond quadrature resolution");
}

} // namespace detail

/// Radial transform of w = 1 - f_l on the ball of radius R.
inline double w_hat(const NeumannSolution& ns, double k) {
    detail::check_resolution(k, ns.R);
    if (ns.potential.is_zero()) return 0.0;
    return quad::radial_fourier([&](double r) { return ns.w(r); }, k, ns.R, ns.trajectory.r);
}

/// Radial transform of V f_l.
inline double vf_hat(const NeumannSolution& ns, double k) {
    const RadialPotential& V = ns.potential;
    if (V.is_zero()) return 0.0;
    return quad::radial_fourier([&](double r) { return V(r) * ns.f(r); }, k, V.support_radius(), ns.trajectory.r);
}

/// Radial transform of chi_R f_l (f_l restricted to its ball).
inline double chi_f_hat(const NeumannSolution& ns, double k) {
    detail::check_resolution(k, ns.R);
    return quad::radial_fourier([&](double r) { return ns.f(r); }, k, ns.R, ns.trajectory.r);
}

inline std::vector<double> eta_coefficients(const NeumannSolution& ns, int N, std::span<const Mode> modes) {
    if (N < 1) throw InvalidArgument("eta_coefficients: N must be >= 1");
    std::vector<double> out;
    out.reserve(modes.size());
    const double inv_n2 = 1.0 / (static_cast<double>(N) * N);
    std::map<int, double> by_shell;
    for (const Mode& m : modes) {
        auto [it, fresh] = by_shell.try_emplace(m.norm_sq(), 0.0);
        if (fresh) it->second = -inv_n2 * w_hat(ns, m.p_abs() / N);
        out.push_back(it->second);
    }
    return out;
}

inline std::vector<double> tau_coefficients(std::span<const double> eta, const NeumannSolution& ns, int N,
                                            std::span<const Mode> modes) {
    if (eta.size() != modes.size()) throw InvalidArgument("tau_coefficients: eta/modes size mismatch");
    std::vector<double> out;
    out.reserve(modes.size());
    std::map<int, double> log_term;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const Mode& m = modes[i];
        auto [it, fresh] = log_term.try_emplace(m.norm_sq(), 0.0);
        if (fresh) {
            const double x = 2.0 * vf_hat(ns, m.p_abs() / N) / m.p_sq();
            if (!(1.0 + x > 0.0)) throw SolverError("tau_coefficients: log argument <= 0 (quadrature failure)");
            it->second = -0.25 * std::log1p(x);
        }
        out.push_back(it->second - eta[i]);
    }
    return out;
}

inline std::vector<double> nu_coefficients(double a, std::span<const Mode> modes) {
    if (!(a >= 0.0)) throw InvalidArgument("nu_coefficients: a must be >= 0");
    std::vector<double> out;
    out.reserve(modes.size());
    for (const Mode& m : modes) out.push_back(nu_coefficient(m.p_sq(), a));
    return out;
}

/// Both sides of |p|^2 eta_p + (V f_l)^(p/N)/2 = N^3 lambda (chi_l f_l(N.))^_p,
/// each side from its own quadrature.
struct KernelIdentity {
    double lhs = 0.0;
    double rhs = 0.0;
    double scale = 0.0; // |(V f)^/2| + |rhs|, for relative comparisons
    double residual() const { return std::abs(lhs - rhs); }
};

inline KernelIdentity kernel_identity(const NeumannSolution& ns, int N, const Mode& m, double eta_p) {
    const double k = m.p_abs() / N;
    KernelIdentity id;
    const double half_vf = 0.5 * vf_hat(ns, k);
    id.lhs = m.p_sq() * eta_p + half_vf;
    id.rhs = ns.lambda * chi_f_hat(ns, k);
    id.scale = std::abs(half_vf) + std::abs(id.rhs);
    return id;
}

struct KernelTable {
    int N = 0;
    double ell = 0.0;
    double a = 0.0;
    std::vector<Mode> modes;
    std::vector<double> eta, tau, nu;
    std::shared_ptr<const NeumannSolution> neumann;
    std::function<double(double)> w_check_hat;

    struct Row {
        int norm_sq;
        double p_abs, eta, tau, nu;
    };
    /// One row per shell (values are shell-constant).
    std::vector<Row> shell_rows() const {
        std::vector<Row> rows;
        for (std::size_t i = 0; i < modes.size(); ++i)
            if (rows.empty() || rows.back().norm_sq != modes[i].norm_sq())
                rows.push_back({modes[i].norm_sq(), modes[i].p_abs(), eta[i], tau[i], nu[i]});
        return rows;
    }
};

/// Neumann problem on the ball of radius N*ell, kernels on shells up to cutoff.
inline KernelTable build_kernel_table(const RadialPotential& V, double a, int N, double ell, int cutoff_norm_sq,
                                      double tol = 1e-12) {
    if (N < 1) throw InvalidArgument("build_kernel_table: N must be >= 1");
    if (!(ell > 0.0 && ell < 0.5)) throw InvalidArgument("build_kernel_table: ell must lie in (0, 1/2)");
    KernelTable kt;
    kt.N = N;
    kt.ell = ell;
    kt.a = a;
    kt.modes = enumerate_modes(cutoff_norm_sq);
    auto ns = std::make_shared<const NeumannSolution>(solve_neumann(V, N * ell, tol));
    kt.neumann = ns;
    kt.eta = eta_coefficients(*ns, N, kt.modes);
    kt.tau = tau_coefficients(kt.eta, *ns, N, kt.modes);
    kt.nu = nu_coefficients(a, kt.modes);
    kt.w_check_hat = [ns](double k) { return w_hat(*ns, k); };
    return kt;
}

} // namespace bogo
