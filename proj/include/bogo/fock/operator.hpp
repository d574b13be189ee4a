#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Sparse>

#include "bogo/error.hpp"
#include "bogo/fock/basis.hpp"
#include "bogo/potential.hpp"

namespace bogo::fock {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Real sparse matrix on a Fock basis. All operators built here have real
/// matrix elements in the occupation basis.
struct Operator {
    std::shared_ptr<const FockBasis> basis;
    SparseMatrix matrix;

    std::size_t dim() const { return basis->size(); }
};

inline void check_same_basis(const Operator& x, const Operator& y) {
    if (x.basis != y.basis) throw InvalidArgument("operator basis mismatch");
}

inline Operator operator+(const Operator& x, const Operator& y) {
    check_same_basis(x, y);
    return {x.basis, x.matrix + y.matrix};
}

inline Operator operator*(double s, const Operator& x) { return {x.basis, s * x.matrix}; }

inline Operator adjoint(const Operator& x) { return {x.basis, SparseMatrix(x.matrix.transpose())}; }

inline Operator commutator(const Operator& x, const Operator& y) {
    check_same_basis(x, y);
    return {x.basis, SparseMatrix(x.matrix * y.matrix - y.matrix * x.matrix)};
}

inline double max_abs(const SparseMatrix& m) {
    double r = 0.0;
    for (int j = 0; j < m.outerSize(); ++j)
        for (SparseMatrix::InnerIterator it(m, j); it; ++it) r = std::max(r, std::abs(it.value()));
    return r;
}

/// max |A - A^T| relative to max |A| (0 for the zero matrix).
inline double symmetry_defect(const SparseMatrix& m) {
    const double s = max_abs(m);
    if (s == 0.0) return 0.0;
    return max_abs(SparseMatrix(m - SparseMatrix(m.transpose()))) / s;
}

enum class Ladder { create, annihilate, b_create, b_annihilate };

struct LadderFactor {
    int mode;
    Ladder kind;
};

namespace detail {

// Applies one ladder to (occ, total) in place and returns its amplitude;
// 0 means the state was annihilated (including creation beyond the cap).
inline double apply_ladder(std::vector<int>& occ, int& total, const LadderFactor& f, int cap, double N) {
    switch (f.kind) {
    case Ladder::create:
    case Ladder::b_create: {
        if (total >= cap) return 0.0;
        double amp = f.kind == Ladder::b_create ? std::sqrt(1.0 - total / N) : 1.0;
        amp *= std::sqrt(occ[f.mode] + 1.0);
        ++occ[f.mode];
        ++total;
        return amp;
    }
    case Ladder::annihilate:
    case Ladder::b_annihilate: {
        if (occ[f.mode] == 0) return 0.0;
        const double amp = std::sqrt(static_cast<double>(occ[f.mode]));
        --occ[f.mode];
        --total;
        return f.kind == Ladder::b_annihilate ? amp * std::sqrt(1.0 - total / N) : amp;
    }
    }
    return 0.0;
}

} // namespace detail

/// Accumulates coefficient * (product of ladders) terms, applied right to left.
class OperatorBuilder {
public:
    OperatorBuilder(std::shared_ptr<const FockBasis> basis, double N = 0.0) : basis_(std::move(basis)), N_(N) {}

    void add_term(double coef, std::vector<LadderFactor> word) {
        if (coef == 0.0) return;
        for (const auto& f : word) {
            if (f.mode < 0 || f.mode >= basis_->num_modes()) throw InvalidArgument("ladder: mode outside P");
            if ((f.kind == Ladder::b_create || f.kind == Ladder::b_annihilate) && !(N_ >= basis_->cap()))
                throw InvalidArgument("ladder: b-operators need N >= cap");
        }
        terms_.push_back({coef, std::move(word)});
    }

    /// Diagonal contribution f(state index).
    template <class F>
    void add_diagonal(F&& f) {
        diag_.resize(basis_->size(), 0.0);
        for (std::size_t i = 0; i < basis_->size(); ++i) diag_[i] += f(i);
    }

    Operator build() const {
        const FockBasis& B = *basis_;
        std::vector<Eigen::Triplet<double>> trip;
        std::vector<int> occ(B.num_modes());
        for (std::size_t j = 0; j < B.size(); ++j) {
            for (const auto& [coef, word] : terms_) {
                auto src = B.occ(j);
                std::copy(src.begin(), src.end(), occ.begin());
                int total = B.total(j);
                double amp = coef;
                for (auto it = word.rbegin(); it != word.rend() && amp != 0.0; ++it)
                    amp *= detail::apply_ladder(occ, total, *it, B.cap(), N_);
                if (amp == 0.0) continue;
                const long i = B.find(occ, total);
                if (i >= 0) trip.emplace_back(static_cast<int>(i), static_cast<int>(j), amp);
            }
            if (!diag_.empty() && diag_[j] != 0.0)
                trip.emplace_back(static_cast<int>(j), static_cast<int>(j), diag_[j]);
        }
        const int n = static_cast<int>(B.size());
        SparseMatrix m(n, n);
        m.setFromTriplets(trip.begin(), trip.end());
        m.prune(0.0);
        m.makeCompressed();
        return {basis_, std::move(m)};
    }

private:
    struct Term {
        double coef;
        std::vector<LadderFactor> word;
    };
    std::shared_ptr<const FockBasis> basis_;
    double N_;
    std::vector<Term> terms_;
    std::vector<double> diag_;
};

inline Operator ladder(std::shared_ptr<const FockBasis> basis, const Mode& m, Ladder kind, int N = 0) {
    const int k = basis->require_mode(m);
    OperatorBuilder b(basis, N);
    b.add_term(1.0, {{k, kind}});
    return b.build();
}

/// Product of ladders (written left to right), e.g. a*_p a*_{-p}.
inline Operator ladder_product(std::shared_ptr<const FockBasis> basis, std::vector<std::pair<Mode, Ladder>> factors,
                               int N = 0) {
    std::vector<LadderFactor> word;
    for (const auto& [m, kind] : factors) word.push_back({basis->require_mode(m), kind});
    OperatorBuilder b(basis, N);
    b.add_term(1.0, std::move(word));
    return b.build();
}

inline Operator diagonal_operator(std::shared_ptr<const FockBasis> basis, std::span<const double> per_mode) {
    if (per_mode.size() != static_cast<std::size_t>(basis->num_modes()))
        throw InvalidArgument("diagonal_operator: one value per mode required");
    OperatorBuilder b(basis);
    const FockBasis& B = *basis;
    b.add_diagonal([&](std::size_t i) {
        auto o = B.occ(i);
        double e = 0.0;
        for (std::size_t m = 0; m < o.size(); ++m) e += o[m] * per_mode[m];
        return e;
    });
    return b.build();
}

/// D = sum_p eps_p a*_p a_p.
inline Operator build_D(std::shared_ptr<const FockBasis> basis, std::span<const double> eps) {
    return diagonal_operator(std::move(basis), eps);
}

/// K = sum_p |p|^2 a*_p a_p.
inline Operator build_K(std::shared_ptr<const FockBasis> basis) {
    std::vector<double> p2;
    for (const Mode& m : basis->modes()) p2.push_back(m.p_sq());
    return diagonal_operator(std::move(basis), p2);
}

inline Operator number_operator(std::shared_ptr<const FockBasis> basis) {
    std::vector<double> one(basis->num_modes(), 1.0);
    return diagonal_operator(std::move(basis), one);
}

inline Operator mode_number(std::shared_ptr<const FockBasis> basis, const Mode& m) {
    std::vector<double> e(basis->num_modes(), 0.0);
    e[basis->require_mode(m)] = 1.0;
    return diagonal_operator(std::move(basis), e);
}

/// Component d of the total momentum (integer units).
inline Operator momentum_operator(std::shared_ptr<const FockBasis> basis, int d) {
    std::vector<double> k;
    for (const Mode& m : basis->modes()) k.push_back(m.n[d]);
    return diagonal_operator(std::move(basis), k);
}

enum class GeneratorKind { b_type, a_type };

/// (1/2) sum_p c_p (X*_p X*_{-p} - X_p X_{-p}) with X = b (needs N) or a.
inline Operator build_quadratic_generator(std::shared_ptr<const FockBasis> basis, std::span<const double> c,
                                          GeneratorKind kind, int N = 0) {
    if (!basis->negation_closed()) throw InvalidArgument("quadratic generator: mode set not closed under negation");
    if (c.size() != static_cast<std::size_t>(basis->num_modes()))
        throw InvalidArgument("quadratic generator: one coefficient per mode required");
    const Ladder cr = kind == GeneratorKind::b_type ? Ladder::b_create : Ladder::create;
    const Ladder an = kind == GeneratorKind::b_type ? Ladder::b_annihilate : Ladder::annihilate;
    OperatorBuilder b(basis, N);
    for (int k = 0; k < basis->num_modes(); ++k) {
        const int mk = basis->mode_index(-basis->modes()[k]);
        b.add_term(0.5 * c[k], {{k, cr}, {mk, cr}});
        b.add_term(-0.5 * c[k], {{k, an}, {mk, an}});
    }
    return b.build();
}

/// Vhat(r/N) for lattice vectors r, cached by |r|^2.
class ScaledFourier {
public:
    ScaledFourier(const RadialPotential& V, int N) : V_(V), N_(N) {}
    double operator()(int norm_sq) {
        auto [it, fresh] = cache_.try_emplace(norm_sq, 0.0);
        if (fresh) it->second = V_.fourier(two_pi * std::sqrt(static_cast<double>(norm_sq)) / N_);
        return it->second;
    }

private:
    RadialPotential V_;
    int N_;
    std::map<int, double> cache_;
};

/// L_N = K + L0 + L2 + L3 + L4 with every momentum leg restricted to P.
inline Operator build_LN(std::shared_ptr<const FockBasis> basis, int N, const RadialPotential& V) {
    const FockBasis& B = *basis;
    if (!B.negation_closed()) throw InvalidArgument("build_LN: mode set not closed under negation");
    if (N < B.cap()) throw InvalidArgument("build_LN: N must be >= cap");
    const double Nd = N;
    ScaledFourier vh(V, N);
    const double v0 = vh(0);
    const auto& P = B.modes();
    const int nm = B.num_modes();
    auto idx = [&](const Mode& m) { return B.mode_index(m); };
    using L = Ladder;

    OperatorBuilder b(basis, Nd);
    std::vector<double> vp(nm);
    for (int k = 0; k < nm; ++k) vp[k] = vh(P[k].norm_sq());

    // K, L0 and the number part of L2 are diagonal.
    b.add_diagonal([&](std::size_t i) {
        auto o = B.occ(i);
        const double t = B.total(i);
        double kin = 0.0, l2 = 0.0;
        for (int k = 0; k < nm; ++k) {
            kin += o[k] * P[k].p_sq();
            l2 += vp[k] * o[k];
        }
        const double l0 = 0.5 * Nd * v0 - 0.5 * v0 * (1.0 - t / Nd) - 0.5 * v0 * t * t / Nd;
        return kin + l0 + l2 * (Nd - t) / Nd;
    });

    // L2 pairing part.
    for (int k = 0; k < nm; ++k) {
        const int mk = idx(-P[k]);
        b.add_term(0.5 * vp[k], {{k, L::b_create}, {mk, L::b_create}});
        b.add_term(0.5 * vp[k], {{k, L::b_annihilate}, {mk, L::b_annihilate}});
    }

    // L3: p, q, p+q in P, p+q != 0.
    const double s3 = 1.0 / std::sqrt(Nd);
    for (int ip = 0; ip < nm; ++ip)
        for (int iq = 0; iq < nm; ++iq) {
            const Mode pq = P[ip] + P[iq];
            if (pq.norm_sq() == 0) continue;
            const int ipq = idx(pq);
            if (ipq < 0) continue;
            const int imp = idx(-P[ip]);
            b.add_term(s3 * vp[ip], {{ipq, L::b_create}, {imp, L::create}, {iq, L::annihilate}});
            b.add_term(s3 * vp[ip], {{iq, L::create}, {imp, L::annihilate}, {ipq, L::b_annihilate}});
        }

    // L4: a*_{p+r} a*_q a_p a_{q+r} with all four legs in P.
    for (int ip = 0; ip < nm; ++ip)
        for (int iq = 0; iq < nm; ++iq)
            for (int is = 0; is < nm; ++is) {
                const Mode r{{P[is].n[0] - P[ip].n[0], P[is].n[1] - P[ip].n[1], P[is].n[2] - P[ip].n[2]}};
                const int iqr = idx(P[iq] + r);
                if (iqr < 0) continue;
                b.add_term(vh(r.norm_sq()) / (2.0 * Nd),
                           {{is, L::create}, {iq, L::create}, {ip, L::annihilate}, {iqr, L::annihilate}});
            }
    return b.build();
}

} // namespace bogo::fock
