#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>

#include "bogo/error.hpp"

namespace bogo {

constexpr double two_pi = 2.0 * std::numbers::pi;

/// Plane-wave mode on the unit torus: integer triple n, momentum p = 2*pi*n.
struct Mode {
    std::array<int, 3> n{};

    constexpr int norm_sq() const { return n[0] * n[0] + n[1] * n[1] + n[2] * n[2]; }
    std::array<double, 3> p() const { return {two_pi * n[0], two_pi * n[1], two_pi * n[2]}; }
    double p_sq() const { return two_pi * two_pi * norm_sq(); }
    double p_abs() const { return two_pi * std::sqrt(static_cast<double>(norm_sq())); }
    constexpr Mode operator-() const { return Mode{{-n[0], -n[1], -n[2]}}; }

    friend constexpr bool operator==(const Mode&, const Mode&) = default;
    friend constexpr auto operator<=>(const Mode&, const Mode&) = default;
};

inline Mode operator+(const Mode& a, const Mode& b) {
    return Mode{{a.n[0] + b.n[0], a.n[1] + b.n[1], a.n[2] + b.n[2]}};
}

/// All modes with the same |n|^2, members in lexicographic order.
struct Shell {
    int norm_sq = 0;
    std::vector<Mode> members;

    std::size_t multiplicity() const { return members.size(); }
    double p_sq() const { return two_pi * two_pi * norm_sq; }
    double p_abs() const { return two_pi * std::sqrt(static_cast<double>(norm_sq)); }
};

struct SumResult {
    double value = 0.0;
    double tail_bound = 0.0;
    int cutoff_norm_sq = 0;
};

/// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    CompensatedSum& operator+=(double x) {
        add(x);
        return *this;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

namespace detail {

inline std::vector<Shell> build_shells(int max_norm_sq) {
    const int r = static_cast<int>(std::floor(std::sqrt(static_cast<double>(max_norm_sq)))) + 1;
    std::map<int, std::vector<Mode>> by_norm;
    // Loops run in lexicographic order, so members come out sorted.
    for (int a = -r; a <= r; ++a)
        for (int b = -r; b <= r; ++b)
            for (int c = -r; c <= r; ++c) {
                const int s = a * a + b * b + c * c;
                if (s >= 1 && s <= max_norm_sq) by_norm[s].push_back(Mode{{a, b, c}});
            }
    std::vector<Shell> shells;
    shells.reserve(by_norm.size());
    for (auto& [s, members] : by_norm) shells.push_back(Shell{s, std::move(members)});
    return shells;
}

} // namespace detail

/// Shells of the excitation lattice with 1 <= |n|^2 <= max_norm_sq, ascending.
/// Results are cached per cutoff; the returned list is immutable.
inline std::shared_ptr<const std::vector<Shell>> enumerate_shells(int max_norm_sq) {
    if (max_norm_sq < 1) throw InvalidArgument("enumerate_shells: max_norm_sq must be >= 1");
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const std::vector<Shell>>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[max_norm_sq];
    if (!slot) slot = std::make_shared<const std::vector<Shell>>(detail::build_shells(max_norm_sq));
    return slot;
}

/// Flattened mode list in shell order.
inline std::vector<Mode> enumerate_modes(int max_norm_sq) {
    std::vector<Mode> out;
    for (const auto& sh : *enumerate_shells(max_norm_sq))
        out.insert(out.end(), sh.members.begin(), sh.members.end());
    return out;
}

/// Upper bound on sum_{|n|^2 > K} |n|^{-2s} over nonzero integer triples,
/// by comparing each lattice point with the integral over its unit cube.
inline double lattice_tail_integral(int K, double s) {
    if (s <= 1.5) throw InvalidArgument("lattice tail: exponent must exceed 3/2");
    const double half_diag = std::sqrt(3.0) / 2.0;
    const double R = std::sqrt(static_cast<double>(K) + 1.0);
    const double inflate = std::pow(1.0 + half_diag / R, 2.0 * s);
    const double r0 = R - half_diag;
    return inflate * 4.0 * std::numbers::pi * std::pow(r0, 3.0 - 2.0 * s) / (2.0 * s - 3.0);
}

/// Shell-ordered compensated sum of f over 1 <= |n|^2 <= max_norm_sq.
///
/// The tail estimate assumes |f(n)| <= C |n|^{-2s} beyond the cutoff, with C
/// taken as the maximum of |f(n)| |n|^{2s} over the outermost shell.
template <class F>
SumResult lattice_sum(F&& f, int max_norm_sq, double tail_exponent) {
    if (tail_exponent <= 1.5) throw InvalidArgument("lattice_sum: tail_exponent must exceed 3/2");
    const auto shells = enumerate_shells(max_norm_sq);
    CompensatedSum acc;
    double c_tail = 0.0;
    for (std::size_t i = 0; i < shells->size(); ++i) {
        const Shell& sh = (*shells)[i];
        const bool outer = (i + 1 == shells->size());
        for (const Mode& m : sh.members) {
            const double v = f(m);
            acc += v;
            if (outer)
                c_tail = std::max(c_tail, std::abs(v) * std::pow(static_cast<double>(sh.norm_sq), tail_exponent));
        }
    }
    SumResult r;
    r.value = acc.value();
    r.tail_bound = c_tail == 0.0 ? 0.0 : c_tail * lattice_tail_integral(max_norm_sq, tail_exponent);
    r.cutoff_norm_sq = max_norm_sq;
    return r;
}

} // namespace bogo
