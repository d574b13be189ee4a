#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "bogo/error.hpp"
#include "bogo/lattice.hpp"

namespace bogo::fock {

struct OccupationState {
    std::vector<int> occ;
    int total = 0;
    std::array<int, 3> momentum{};
};

struct BasisOptions {
    std::size_t size_limit = 200'000;
    bool zero_momentum_only = false;
};

/// C(n, k) as a double (exact below 2^53, used only for size guards).
inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return std::round(r);
}

/// Occupation-number basis of all states with sum_p n_p <= cap on a finite
/// mode set, ordered by (total, lexicographic occupation vector).
class FockBasis {
public:
    FockBasis(std::vector<Mode> modes, int cap, BasisOptions opt = {})
        : modes_(std::move(modes)), cap_(cap), zero_momentum_(opt.zero_momentum_only) {
        if (cap < 0) throw InvalidArgument("FockBasis: cap must be >= 0");
        if (modes_.empty()) throw InvalidArgument("FockBasis: mode set is empty");
        std::set<Mode> seen;
        for (const Mode& m : modes_) {
            if (m.norm_sq() == 0) throw InvalidArgument("FockBasis: the zero mode is not an excitation mode");
            if (!seen.insert(m).second) throw InvalidArgument("FockBasis: duplicate mode");
        }
        if (cap > 65535) throw InvalidArgument("FockBasis: cap too large");
        const double count = binomial(cap + num_modes(), num_modes());
        if (!opt.zero_momentum_only && count > static_cast<double>(opt.size_limit))
            throw GuardError("FockBasis: " + std::to_string(static_cast<long long>(count)) +
                             " states exceed the size limit " + std::to_string(opt.size_limit));
        enumerate(opt.size_limit);
    }

    const std::vector<Mode>& modes() const { return modes_; }
    int num_modes() const { return static_cast<int>(modes_.size()); }
    int cap() const { return cap_; }
    bool zero_momentum_only() const { return zero_momentum_; }
    std::size_t size() const { return totals_.size(); }

    std::span<const std::uint16_t> occ(std::size_t i) const {
        return {occ_.data() + i * modes_.size(), modes_.size()};
    }
    int total(std::size_t i) const { return totals_[i]; }

    std::array<int, 3> momentum(std::size_t i) const {
        std::array<int, 3> k{};
        auto o = occ(i);
        for (std::size_t m = 0; m < modes_.size(); ++m)
            for (int d = 0; d < 3; ++d) k[d] += o[m] * modes_[m].n[d];
        return k;
    }

    OccupationState state(std::size_t i) const {
        OccupationState s;
        auto o = occ(i);
        s.occ.assign(o.begin(), o.end());
        s.total = total(i);
        s.momentum = momentum(i);
        return s;
    }

    /// Position of the mode in P, or -1.
    int mode_index(const Mode& m) const {
        auto it = std::find(modes_.begin(), modes_.end(), m);
        return it == modes_.end() ? -1 : static_cast<int>(it - modes_.begin());
    }

    int require_mode(const Mode& m) const {
        const int k = mode_index(m);
        if (k < 0) throw InvalidArgument("FockBasis: mode outside the basis mode set");
        return k;
    }

    bool negation_closed() const {
        return std::all_of(modes_.begin(), modes_.end(), [&](const Mode& m) { return mode_index(-m) >= 0; });
    }

    /// Index of the state with occupations `o` (total t), or -1.
    template <class Occ>
    long find(const Occ& o, int t) const {
        if (t < 0 || t > cap_) return -1;
        std::size_t lo = 0, hi = size();
        const std::size_t M = modes_.size();
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo) / 2;
            if (less(mid, o, t))
                lo = mid + 1;
            else
                hi = mid;
        }
        if (lo == size() || totals_[lo] != t) return -1;
        for (std::size_t m = 0; m < M; ++m)
            if (occ_[lo * M + m] != o[m]) return -1;
        return static_cast<long>(lo);
    }

private:
    template <class Occ>
    bool less(std::size_t i, const Occ& o, int t) const {
        if (totals_[i] != t) return totals_[i] < t;
        const std::size_t M = modes_.size();
        for (std::size_t m = 0; m < M; ++m) {
            const int a = occ_[i * M + m], b = o[m];
            if (a != b) return a < b;
        }
        return false;
    }

    void enumerate(std::size_t limit) {
        std::vector<std::uint16_t> cur(modes_.size(), 0);
        for (int t = 0; t <= cap_; ++t) fill(cur, 0, t, t, limit);
    }

    void fill(std::vector<std::uint16_t>& cur, std::size_t pos, int rem, int t, std::size_t limit) {
        const std::size_t M = modes_.size();
        if (pos + 1 == M) {
            cur[pos] = static_cast<std::uint16_t>(rem);
            if (zero_momentum_) {
                std::array<int, 3> k{};
                for (std::size_t m = 0; m < M; ++m)
                    for (int d = 0; d < 3; ++d) k[d] += cur[m] * modes_[m].n[d];
                if (k != std::array<int, 3>{}) return;
            }
            if (totals_.size() >= limit)
                throw GuardError("FockBasis: state count exceeds the size limit " + std::to_string(limit));
            occ_.insert(occ_.end(), cur.begin(), cur.end());
            totals_.push_back(t);
            return;
        }
        for (int v = 0; v <= rem; ++v) {
            cur[pos] = static_cast<std::uint16_t>(v);
            fill(cur, pos + 1, rem - v, t, limit);
        }
        cur[pos] = 0;
    }

    std::vector<Mode> modes_;
    int cap_ = 0;
    bool zero_momentum_ = false;
    std::vector<std::uint16_t> occ_;
    std::vector<int> totals_;
};

/// Modes of the listed shells (by |n|^2), in shell order.
inline std::vector<Mode> shell_modes(std::span<const int> norm_sqs) {
    int top = 1;
    for (int s : norm_sqs) {
        if (s < 1) throw InvalidArgument("shell_modes: |n|^2 must be >= 1");
        top = std::max(top, s);
    }
    std::vector<int> sorted(norm_sqs.begin(), norm_sqs.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<Mode> out;
    for (const Shell& sh : *enumerate_shells(top))
        if (std::binary_search(sorted.begin(), sorted.end(), sh.norm_sq))
            out.insert(out.end(), sh.members.begin(), sh.members.end());
    for (int s : sorted)
        if (std::none_of(out.begin(), out.end(), [s](const Mode& m) { return m.norm_sq() == s; }))
            throw InvalidArgument("shell_modes: no lattice points with |n|^2 = " + std::to_string(s));
    return out;
}

} // namespace bogo::fock
