#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"

#include "bogo/bogoliubov.hpp"
#include "bogo/error.hpp"
#include "bogo/lattice.hpp"

namespace bogo {

// Second-order models of N rho^(1) and N rho^(2), stored by sector. Both are
// diagonal in plane waves except for the pairing spokes of rho^(2) between
// phi_0 x phi_0 and phi_p x phi_{-p}.

struct SecondOrderDM1 {
    int N = 0;
    int cutoff = 0;
    Variant variant = Variant::B_derived;
    double condensate_weight = 0.0;
    std::vector<Mode> modes;
    std::vector<double> excited_weights;

    double trace() const {
        CompensatedSum s;
        for (double w : excited_weights) s += w;
        return condensate_weight + s.value();
    }
};

struct SecondOrderDM2 {
    int N = 0;
    int cutoff = 0;
    Variant variant = Variant::B_derived;
    double w00 = 0.0;
    std::vector<Mode> modes;
    std::vector<double> w0p;
    std::vector<double> pairing; // <phi_0 phi_0| . |phi_p phi_-p> and its adjoint

    double trace() const {
        CompensatedSum s;
        for (double w : w0p) s += w;
        return w00 + s.value();
    }
};

namespace detail {

// Head weight N - excited, adjusted by ulps so that head + excited == N
// holds in floating point.
inline double complement_weight(double N, double excited) {
    double head = N - excited;
    for (int i = 0; i < 8 && head + excited != N; ++i)
        head = std::nextafter(head, head + excited < N ? std::numeric_limits<double>::infinity()
                                                       : -std::numeric_limits<double>::infinity());
    return head;
}

inline double excited_sum(const std::vector<double>& w) {
    CompensatedSum s;
    for (double x : w) s += x;
    return s.value();
}

} // namespace detail

inline SecondOrderDM1 build_rho1(const ThermalConfig& cfg, int N, int cutoff) {
    cfg.validate();
    if (N < 1) throw InvalidArgument("build_rho1: N must be >= 1");
    SecondOrderDM1 dm;
    dm.N = N;
    dm.cutoff = cutoff;
    dm.variant = cfg.variant;
    dm.modes = enumerate_modes(cutoff);
    dm.excited_weights.reserve(dm.modes.size());
    for (const Mode& m : dm.modes)
        dm.excited_weights.push_back(mu_sq(m.p_sq(), cfg.a) + theta_sq(m.p_sq(), cfg.a, cfg.beta, cfg.variant));
    const double dep = detail::excited_sum(dm.excited_weights);
    if (!(dep < N)) throw GuardError("second-order model invalid at this N: depletion " + std::to_string(dep) + " >= N");
    dm.condensate_weight = detail::complement_weight(N, dep);
    return dm;
}

inline SecondOrderDM2 build_rho2(const ThermalConfig& cfg, int N, int cutoff) {
    cfg.validate();
    if (N < 1) throw InvalidArgument("build_rho2: N must be >= 1");
    SecondOrderDM2 dm;
    dm.N = N;
    dm.cutoff = cutoff;
    dm.variant = cfg.variant;
    dm.modes = enumerate_modes(cutoff);
    for (const Mode& m : dm.modes) {
        const double ps = m.p_sq();
        dm.w0p.push_back(4.0 * (mu_sq(ps, cfg.a) + theta_sq(ps, cfg.a, cfg.beta, cfg.variant)));
        dm.pairing.push_back(pairing_coeff(ps, cfg.a, cfg.beta, cfg.variant));
    }
    const double dep = detail::excited_sum(dm.w0p);
    if (!(dep < N))
        throw GuardError("second-order model invalid at this N: 4 * depletion " + std::to_string(dep) + " >= N");
    dm.w00 = detail::complement_weight(N, dep);
    return dm;
}

namespace detail {

template <class DM>
void check_same_shape(const DM& x, const DM& y) {
    if (x.cutoff != y.cutoff || x.modes != y.modes) throw InvalidArgument("dm_trace_norm_diff: shape mismatch");
}

} // namespace detail

inline double dm_trace_norm_diff(const SecondOrderDM1& x, const SecondOrderDM1& y) {
    detail::check_same_shape(x, y);
    CompensatedSum s;
    s += std::abs(x.condensate_weight - y.condensate_weight);
    for (std::size_t i = 0; i < x.modes.size(); ++i) s += std::abs(x.excited_weights[i] - y.excited_weights[i]);
    return s.value();
}

/// The difference is an arrow matrix (head dw00, spokes dpairing) plus a
/// diagonal; the arrow's nonzero eigenvalues are (d +- sqrt(d^2+4|c|^2))/2.
inline double dm_trace_norm_diff(const SecondOrderDM2& x, const SecondOrderDM2& y) {
    detail::check_same_shape(x, y);
    const double d = x.w00 - y.w00;
    CompensatedSum spokes, diag;
    for (std::size_t i = 0; i < x.modes.size(); ++i) {
        const double c = x.pairing[i] - y.pairing[i];
        spokes += c * c;
        diag += std::abs(x.w0p[i] - y.w0p[i]);
    }
    return std::sqrt(d * d + 4.0 * spokes.value()) + diag.value();
}

inline double dm2_min_eigenvalue(const SecondOrderDM2& dm) {
    CompensatedSum c2;
    int spokes = 0;
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < dm.modes.size(); ++i) {
        lo = std::min(lo, dm.w0p[i]);
        if (dm.pairing[i] != 0.0) {
            c2 += dm.pairing[i] * dm.pairing[i];
            ++spokes;
        }
    }
    if (spokes == 0) return std::min(lo, dm.w00);
    const double disc = std::sqrt(dm.w00 * dm.w00 + 4.0 * c2.value());
    lo = std::min(lo, 0.5 * (dm.w00 - disc));
    if (spokes > 1) lo = std::min(lo, 0.0);
    return lo;
}

namespace detail {

// Consecutive modes of one shell share their values; emit one entry per shell.
template <class Weight, class Pair>
nlohmann::ordered_json collapse_shells(const std::vector<Mode>& modes, Weight weight, Pair pair) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    std::size_t i = 0;
    while (i < modes.size()) {
        std::size_t j = i;
        while (j < modes.size() && modes[j].norm_sq() == modes[i].norm_sq()) ++j;
        nlohmann::ordered_json e;
        e["norm_sq"] = modes[i].norm_sq();
        e["multiplicity"] = j - i;
        e["weight"] = weight(i);
        e["pairing"] = pair(i);
        out.push_back(e);
        i = j;
    }
    return out;
}

} // namespace detail

inline nlohmann::ordered_json to_json(const SecondOrderDM1& dm) {
    nlohmann::ordered_json j;
    j["N"] = dm.N;
    j["cutoff"] = dm.cutoff;
    j["variant"] = variant_name(dm.variant);
    j["condensate"] = dm.condensate_weight;
    j["modes"] = detail::collapse_shells(
        dm.modes, [&](std::size_t i) { return dm.excited_weights[i]; }, [](std::size_t) { return 0.0; });
    return j;
}

inline nlohmann::ordered_json to_json(const SecondOrderDM2& dm) {
    nlohmann::ordered_json j;
    j["N"] = dm.N;
    j["cutoff"] = dm.cutoff;
    j["variant"] = variant_name(dm.variant);
    j["condensate"] = dm.w00;
    j["modes"] = detail::collapse_shells(
        dm.modes, [&](std::size_t i) { return dm.w0p[i]; }, [&](std::size_t i) { return dm.pairing[i]; });
    return j;
}

} // namespace bogo
