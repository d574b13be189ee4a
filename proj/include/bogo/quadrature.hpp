#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "bogo/lattice.hpp"

namespace bogo::quad {

/// Gauss-Legendre rule on [-1, 1], computed once by Newton iteration.
template <int Order>
struct GaussLegendre {
    std::array<double, Order> x{};
    std::array<double, Order> w{};

    GaussLegendre() {
        for (int i = 0; i < Order; ++i) {
            double z = std::cos(std::numbers::pi * (i + 0.75) / (Order + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = 0.0;
                for (int j = 1; j <= Order; ++j) {
                    const double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
                }
                dp = Order * (z * p0 - p1) / (z * z - 1.0);
                const double dz = p0 / dp;
                z -= dz;
                if (std::abs(dz) < 1e-16) break;
            }
            x[i] = z;
            w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
    }

    static const GaussLegendre& get() {
        static const GaussLegendre rule;
        return rule;
    }
};

/// Composite 10-point Gauss-Legendre over [a, b] split into equal panels.
template <class F>
double panels(F&& f, double a, double b, int n_panels) {
    const auto& gl = GaussLegendre<10>::get();
    CompensatedSum acc;
    const double h = (b - a) / n_panels;
    for (int k = 0; k < n_panels; ++k) {
        const double lo = a + k * h;
        const double mid = lo + 0.5 * h;
        double s = 0.0;
        for (int i = 0; i < 10; ++i) s += gl.w[i] * f(mid + 0.5 * h * gl.x[i]);
        acc += 0.5 * h * s;
    }
    return acc.value();
}

/// Number of panels needed on an interval of length len for an integrand
/// oscillating with wavenumber k (at least `base`).
inline int panel_count(double len, double k, int base = 2) {
    const double by_oscillation = std::ceil(len * k / 2.0);
    return std::max(base, static_cast<int>(by_oscillation));
}

/// Radial Fourier transform of a radial function g supported in [0, r_max]:
///   ghat(k) = (4 pi / k) int_0^{r_max} r sin(k r) g(r) dr,
/// with the k -> 0 limit 4 pi int r^2 g(r) dr when k r_max < 1e-3.
/// `nodes` are the breakpoints of g (ascending, inside (0, r_max)).
template <class G>
double radial_fourier(G&& g, double k, double r_max, std::span<const double> nodes, int base_panels = 2) {
    std::vector<double> cuts;
    cuts.reserve(nodes.size() + 2);
    cuts.push_back(0.0);
    for (double r : nodes)
        if (r > cuts.back() && r < r_max) cuts.push_back(r);
    cuts.push_back(r_max);

    const bool small = std::abs(k) * r_max < 1e-3;
    CompensatedSum acc;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        const int n = panel_count(b - a, std::abs(k), base_panels);
        if (small)
            acc += panels([&](double r) { return r * r * g(r); }, a, b, n);
        else
            acc += panels([&](double r) { return r * std::sin(k * r) * g(r); }, a, b, n);
    }
    const double four_pi = 4.0 * std::numbers::pi;
    return small ? four_pi * acc.value() : four_pi * acc.value() / k;
}

} // namespace bogo::quad
