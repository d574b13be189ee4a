#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "bogo/error.hpp"
#include "bogo/fock/operator.hpp"
#include "bogo/lattice.hpp"

namespace bogo::fock {

/// Connected components of the sparsity graph of one or more matrices.
/// Blocks are listed by smallest member; members ascend within a block.
struct BlockPartition {
    std::vector<std::vector<int>> blocks;
    std::vector<int> block_of;
    std::vector<int> pos_in_block;

    std::size_t max_block() const {
        std::size_t m = 0;
        for (const auto& b : blocks) m = std::max(m, b.size());
        return m;
    }
};

inline BlockPartition connected_blocks(std::size_t n, std::initializer_list<const SparseMatrix*> mats) {
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto root = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const SparseMatrix* m : mats)
        for (int j = 0; j < m->outerSize(); ++j)
            for (SparseMatrix::InnerIterator it(*m, j); it; ++it) {
                const int a = root(static_cast<int>(it.row())), b = root(j);
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }
    BlockPartition p;
    p.block_of.assign(n, -1);
    p.pos_in_block.assign(n, -1);
    std::vector<int> id_of_root(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        const int r = root(static_cast<int>(i));
        if (id_of_root[r] < 0) {
            id_of_root[r] = static_cast<int>(p.blocks.size());
            p.blocks.emplace_back();
        }
        const int b = id_of_root[r];
        p.block_of[i] = b;
        p.pos_in_block[i] = static_cast<int>(p.blocks[b].size());
        p.blocks[b].push_back(static_cast<int>(i));
    }
    return p;
}

inline Eigen::MatrixXd dense_block(const SparseMatrix& m, const BlockPartition& p, int b) {
    const auto& idx = p.blocks[b];
    const int n = static_cast<int>(idx.size());
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (int c = 0; c < n; ++c)
        for (SparseMatrix::InnerIterator it(m, idx[c]); it; ++it) {
            const int r = static_cast<int>(it.row());
            if (p.block_of[r] == b) d(p.pos_in_block[r], c) = it.value();
        }
    return d;
}

/// v^T O v for v supported on block b (v indexed by position in the block).
inline double block_quadratic_form(const SparseMatrix& O, const BlockPartition& p, int b, const Eigen::VectorXd& v) {
    const auto& idx = p.blocks[b];
    double s = 0.0;
    for (std::size_t c = 0; c < idx.size(); ++c) {
        if (v[c] == 0.0) continue;
        double col = 0.0;
        for (SparseMatrix::InnerIterator it(O, idx[c]); it; ++it) {
            const int r = static_cast<int>(it.row());
            if (p.block_of[r] == b) col += v[p.pos_in_block[r]] * it.value();
        }
        s += col * v[c];
    }
    return s;
}

/// Gibbs state exp(-beta H)/Z kept as per-block eigendecompositions.
struct GibbsState {
    std::shared_ptr<const FockBasis> basis;
    double beta = 0.0;
    double ground_energy = 0.0;
    double Z = 0.0; // sum of exp(-beta (E - E0))
    BlockPartition partition;
    std::vector<Eigen::VectorXd> energies;
    std::vector<Eigen::MatrixXd> vectors; // columns are eigenvectors
    std::vector<Eigen::VectorXd> weights; // normalized Boltzmann weights

    double trace() const {
        CompensatedSum s;
        for (const auto& w : weights)
            for (double x : w) s += x;
        return s.value();
    }

    double min_weight() const {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& w : weights)
            if (w.size() > 0) m = std::min(m, w.minCoeff());
        return m;
    }
};

inline GibbsState gibbs(const Operator& H, double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidArgument("gibbs: beta must be finite and > 0");
    if (symmetry_defect(H.matrix) > 1e-12) throw InvalidArgument("gibbs: operator is not Hermitian");
    GibbsState g;
    g.basis = H.basis;
    g.beta = beta;
    g.partition = connected_blocks(H.dim(), {&H.matrix});
    const auto& P = g.partition;
    const std::size_t nb = P.blocks.size();
    g.energies.resize(nb);
    g.vectors.resize(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        const int bi = static_cast<int>(b);
        Eigen::MatrixXd d = dense_block(H.matrix, P, bi);
        if (d.rows() == 1) {
            g.energies[b] = d.col(0);
            g.vectors[b] = Eigen::MatrixXd::Identity(1, 1);
            continue;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d);
        if (es.info() != Eigen::Success) throw SolverError("gibbs: eigensolver failed");
        g.energies[b] = es.eigenvalues();
        g.vectors[b] = es.eigenvectors();
    }
    double e0 = std::numeric_limits<double>::infinity();
    for (const auto& e : g.energies) e0 = std::min(e0, e.minCoeff());
    g.ground_energy = e0;
    CompensatedSum z;
    g.weights.resize(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        g.weights[b] = (-beta * (g.energies[b].array() - e0)).exp().matrix();
        for (double x : g.weights[b]) z += x;
    }
    g.Z = z.value();
    for (auto& w : g.weights) w /= g.Z;
    return g;
}

/// tr(rho O). Contributions of O between different blocks vanish.
inline double expect(const GibbsState& g, const Operator& O) {
    if (g.basis != O.basis) throw InvalidArgument("expect: basis mismatch");
    CompensatedSum s;
    for (std::size_t b = 0; b < g.partition.blocks.size(); ++b)
        for (int k = 0; k < g.weights[b].size(); ++k) {
            const double w = g.weights[b][k];
            if (w == 0.0) continue;
            s += w * block_quadratic_form(O.matrix, g.partition, static_cast<int>(b), g.vectors[b].col(k));
        }
    return s.value();
}

/// exp(G) for a real antisymmetric generator, per connected block.
struct BlockUnitary {
    std::shared_ptr<const FockBasis> basis;
    BlockPartition partition;
    std::vector<Eigen::MatrixXd> blocks;
    double unitarity_defect = 0.0; // max_b ||U^T U - I||_max

    /// U e_i, indexed by position in the block of i.
    Eigen::VectorXd column(int i) const {
        return blocks[partition.block_of[i]].col(partition.pos_in_block[i]);
    }
};

inline BlockUnitary exponentiate(const Operator& G) {
    const SparseMatrix sym = G.matrix + SparseMatrix(G.matrix.transpose());
    if (max_abs(sym) > 1e-12 * std::max(1.0, max_abs(G.matrix)))
        throw InvalidArgument("exponentiate: generator is not anti-Hermitian");
    BlockUnitary u;
    u.basis = G.basis;
    u.partition = connected_blocks(G.dim(), {&G.matrix});
    u.blocks.resize(u.partition.blocks.size());
    for (std::size_t b = 0; b < u.blocks.size(); ++b) {
        Eigen::MatrixXd d = dense_block(G.matrix, u.partition, static_cast<int>(b));
        Eigen::MatrixXd e = d.rows() == 1 ? Eigen::MatrixXd::Identity(1, 1) : Eigen::MatrixXd(d.exp());
        const double defect = (e.transpose() * e - Eigen::MatrixXd::Identity(d.rows(), d.cols())).cwiseAbs().maxCoeff();
        u.unitarity_defect = std::max(u.unitarity_defect, defect);
        u.blocks[b] = std::move(e);
    }
    if (u.unitarity_defect > 1e-10) throw SolverError("exponentiate: result is not unitary to 1e-10");
    return u;
}

/// <Omega-rotated state| O |...>: (U e_i)^T O (U e_i).
inline double rotated_diagonal(const BlockUnitary& U, const SparseMatrix& O, int i) {
    return block_quadratic_form(O, U.partition, U.partition.block_of[i], U.column(i));
}

} // namespace bogo::fock
