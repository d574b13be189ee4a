#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "bogo/error.hpp"

namespace bogo {

/// Samples of a solution of u'' = q(r) u on an increasing radial grid, with
/// quintic Hermite interpolation between nodes (u, u' stored; u'' = q u).
/// q_left[i] / q_right[i] are the one-sided values of q on interval
/// [r[i], r[i+1]], so breakpoints of q never fall inside an interval.
struct RadialTrajectory {
    std::vector<double> r, u, du;
    std::vector<double> q_left, q_right;

    std::size_t size() const { return r.size(); }

    void scale(double c) {
        for (double& x : u) x *= c;
        for (double& x : du) x *= c;
    }

    std::size_t interval(double x) const {
        if (x <= r.front()) return 0;
        if (x >= r.back()) return r.size() - 2;
        auto it = std::upper_bound(r.begin(), r.end(), x);
        return static_cast<std::size_t>(it - r.begin()) - 1;
    }

    /// Returns {u(x), u'(x)}.
    std::array<double, 2> eval(double x) const {
        const std::size_t i = interval(x);
        const double h = r[i + 1] - r[i];
        const double t = (x - r[i]) / h;
        const double y0 = u[i], d0 = h * du[i], s0 = h * h * q_left[i] * u[i];
        const double y1 = u[i + 1], d1 = h * du[i + 1], s1 = h * h * q_right[i] * u[i + 1];
        const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
        const double H0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
        const double H1 = t - 6 * t3 + 8 * t4 - 3 * t5;
        const double H2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
        const double H3 = 10 * t3 - 15 * t4 + 6 * t5;
        const double H4 = -4 * t3 + 7 * t4 - 3 * t5;
        const double H5 = 0.5 * t3 - t4 + 0.5 * t5;
        const double D0 = -30 * t2 + 60 * t3 - 30 * t4;
        const double D1 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
        const double D2 = t - 4.5 * t2 + 6 * t3 - 2.5 * t4;
        const double D3 = -D0;
        const double D4 = -12 * t2 + 28 * t3 - 15 * t4;
        const double D5 = 1.5 * t2 - 4 * t3 + 2.5 * t4;
        const double val = y0 * H0 + d0 * H1 + s0 * H2 + y1 * H3 + d1 * H4 + s1 * H5;
        const double der = (y0 * D0 + d0 * D1 + s0 * D2 + y1 * D3 + d1 * D4 + s1 * D5) / h;
        return {val, der};
    }
};

struct OdeOptions {
    double tol = 1e-12;
    double max_step = 0.0; // 0: unlimited
    // Tighter step limit for r < inner_radius (resolves the potential region).
    double inner_max_step = 0.0;
    double inner_radius = 0.0;
    long max_steps = 2'000'000;
};

/// Integrates u'' = q(r) u outward from r = 0 with u(0) = 0, u'(0) = 1 using
/// Dormand-Prince 5(4); every breakpoint is hit exactly by a step.
template <class Q>
RadialTrajectory integrate_radial(Q&& q, double r_end, std::vector<double> breakpoints, const OdeOptions& opt) {
    if (!(r_end > 0.0)) throw InvalidArgument("integrate_radial: r_end must be > 0");
    if (!(opt.tol > 0.0)) throw InvalidArgument("integrate_radial: tol must be > 0");

    std::vector<double> cuts{0.0};
    std::sort(breakpoints.begin(), breakpoints.end());
    for (double b : breakpoints)
        if (b > cuts.back() && b < r_end) cuts.push_back(b);
    cuts.push_back(r_end);

    // Dormand-Prince tableau.
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;

    RadialTrajectory tr;
    tr.r.push_back(0.0);
    tr.u.push_back(0.0);
    tr.du.push_back(1.0);

    double y0 = 0.0, y1 = 1.0;
    long steps = 0;
    for (std::size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
        const double lo = cuts[seg], hi = cuts[seg + 1];
        const double len = hi - lo;
        // One-sided evaluation of q inside this segment.
        auto qs = [&](double x) {
            const double eps = 1e-13 * len;
            return q(std::clamp(x, lo + eps, hi - eps));
        };
        const double seg_max = (hi <= opt.inner_radius && opt.inner_max_step > 0) ? opt.inner_max_step
                               : (opt.max_step > 0 ? opt.max_step : len);
        double x = lo;
        double h = std::min(len, seg_max);
        h = std::min(h, 1e-2 * std::max(len, 1e-3));
        while (x < hi) {
            if (++steps > opt.max_steps) throw SolverError("integrate_radial: step limit exceeded");
            bool last = false;
            if (x + h >= hi) {
                h = hi - x;
                last = true;
            }
            // Stages for y = (u, u'), f(x, y) = (u', q(x) u).
            const double k1u = y1, k1d = qs(x) * y0;
            double tu = y0 + h * a21 * k1u, td = y1 + h * a21 * k1d;
            const double k2u = td, k2d = qs(x + c2 * h) * tu;
            tu = y0 + h * (a31 * k1u + a32 * k2u);
            td = y1 + h * (a31 * k1d + a32 * k2d);
            const double k3u = td, k3d = qs(x + c3 * h) * tu;
            tu = y0 + h * (a41 * k1u + a42 * k2u + a43 * k3u);
            td = y1 + h * (a41 * k1d + a42 * k2d + a43 * k3d);
            const double k4u = td, k4d = qs(x + c4 * h) * tu;
            tu = y0 + h * (a51 * k1u + a52 * k2u + a53 * k3u + a54 * k4u);
            td = y1 + h * (a51 * k1d + a52 * k2d + a53 * k3d + a54 * k4d);
            const double k5u = td, k5d = qs(x + c5 * h) * tu;
            tu = y0 + h * (a61 * k1u + a62 * k2u + a63 * k3u + a64 * k4u + a65 * k5u);
            td = y1 + h * (a61 * k1d + a62 * k2d + a63 * k3d + a64 * k4d + a65 * k5d);
            const double k6u = td, k6d = qs(x + h) * tu;
            const double nu = y0 + h * (b1 * k1u + b3 * k3u + b4 * k4u + b5 * k5u + b6 * k6u);
            const double nd = y1 + h * (b1 * k1d + b3 * k3d + b4 * k4d + b5 * k5d + b6 * k6d);
            const double k7u = nd, k7d = qs(x + h) * nu;
            const double eu = h * (e1 * k1u + e3 * k3u + e4 * k4u + e5 * k5u + e6 * k6u + e7 * k7u);
            const double ed = h * (e1 * k1d + e3 * k3d + e4 * k4d + e5 * k5d + e6 * k6d + e7 * k7d);
            const double su = opt.tol * (1.0 + std::max(std::abs(y0), std::abs(nu)));
            const double sd = opt.tol * (1.0 + std::max(std::abs(y1), std::abs(nd)));
            const double err = std::max(std::abs(eu) / su, std::abs(ed) / sd);

            if (err <= 1.0) {
                x = last ? hi : x + h;
                y0 = nu;
                y1 = nd;
                tr.q_left.push_back(qs(tr.r.back()));
                tr.q_right.push_back(qs(x));
                tr.r.push_back(x);
                tr.u.push_back(y0);
                tr.du.push_back(y1);
                if (last) break;
            }
            const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            h *= fac;
            h = std::min(h, seg_max);
            if (h < 1e-15 * std::max(1.0, hi)) throw SolverError("integrate_radial: step size underflow");
        }
    }
    return tr;
}

} // namespace bogo
