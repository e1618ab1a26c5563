#include "fockspec/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "fockspec/faddeev.hpp"
#include "fockspec/friedrichs.hpp"

namespace fockspec {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

DiscretizedOperator discretize_h(const ModelSpec& spec, std::span<const double> p,
                                 const TorusGrid& grid) {
    if (static_cast<int>(p.size()) != spec.nu || grid.nu() != spec.nu)
        throw std::invalid_argument("discretize_h: dimension mismatch");
    const Eigen::Index n = grid.size();
    const double w = grid.weight();
    const double sqw = std::sqrt(w);

    DiscretizedOperator op;
    op.nu = spec.nu;
    op.n = grid.n();
    op.dims = {1, n};
    op.full_dims = {1, n};
    op.matrix = Eigen::MatrixXd::Zero(1 + n, 1 + n);

    op.matrix(0, 0) = spec.w1.eval(p);
    Eigen::VectorXd v1s = spec.v1.eval_on_grid(grid);
    op.matrix.block(0, 1, 1, n) = (kInvSqrt2 * sqw * v1s).transpose();
    op.matrix.block(1, 0, n, 1) = kInvSqrt2 * sqw * v1s;

    Eigen::VectorXd w2row = spec.w2.fix_first(p).eval_on_grid(grid);
    op.matrix.block(1, 1, n, n) = -w * spec.v2.sample_matrix(grid);
    op.matrix.block(1, 1, n, n) += w2row.asDiagonal();
    return op;
}

DiscretizedOperator discretize_H(const ModelSpec& spec, const TorusGrid& grid,
                                 Eigen::Index dim_cap) {
    if (grid.nu() != spec.nu) throw std::invalid_argument("discretize_H: dimension mismatch");
    const Eigen::Index n = grid.size();
    const Eigen::Index full_dim = 1 + n + n * n;
    if (full_dim > dim_cap)
        throw std::length_error("discretize_H: dimension " + std::to_string(full_dim) +
                                " exceeds the cap " + std::to_string(dim_cap));
    const double w = grid.weight();
    const double sqw = std::sqrt(w);
    const Eigen::Index nsym = n * (n + 1) / 2;

    DiscretizedOperator op;
    op.nu = spec.nu;
    op.n = grid.n();
    op.dims = {1, n, nsym};
    op.full_dims = {1, n, n * n};
    op.matrix = Eigen::MatrixXd::Zero(1 + n + nsym, 1 + n + nsym);

    Eigen::VectorXd v0s = spec.v0.eval_on_grid(grid);
    Eigen::VectorXd v1s = spec.v1.eval_on_grid(grid);
    Eigen::VectorXd w1s = spec.w1.eval_on_grid(grid);
    Eigen::MatrixXd w2mat = spec.w2.sample_matrix(grid);
    Eigen::MatrixXd v2mat = spec.v2.sample_matrix(grid);

    op.matrix(0, 0) = spec.w0;
    op.matrix.block(0, 1, 1, n) = (sqw * v0s).transpose();
    op.matrix.block(1, 0, n, 1) = sqw * v0s;
    op.matrix.block(1, 1, n, n) = w1s.asDiagonal();

    // symmetric-pair basis: (i < j) carries (e_ij + e_ji)/sqrt(2), (i, i) e_ii
    std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
    pairs.reserve(static_cast<std::size_t>(nsym));
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j) pairs.emplace_back(i, j);

    // coupling block: (H21 f1)(p,q) = (v1(p) f1(q) + v1(q) f1(p)) / 2
    for (Eigen::Index a = 0; a < nsym; ++a) {
        auto [i, j] = pairs[static_cast<std::size_t>(a)];
        for (Eigen::Index s = 0; s < n; ++s) {
            double val;
            if (i == j)
                val = sqw * v1s(i) * (s == i ? 1.0 : 0.0);
            else
                val = sqw * kInvSqrt2 *
                      ((s == j ? v1s(i) : 0.0) + (s == i ? v1s(j) : 0.0));
            op.matrix(1 + n + a, 1 + s) = val;
            op.matrix(1 + s, 1 + n + a) = val;
        }
    }

    // two-particle block in the full node-pair basis, then restricted to the
    // symmetric subspace
    auto h22 = [&](Eigen::Index p, Eigen::Index q, Eigen::Index s, Eigen::Index t) {
        double val = 0.0;
        if (p == s && q == t) val += w2mat(p, q);
        if (q == t) val -= w * v2mat(p, s);  // V1: first slot
        if (p == s) val -= w * v2mat(q, t);  // V2: second slot
        return val;
    };
    for (Eigen::Index a = 0; a < nsym; ++a) {
        auto [i, j] = pairs[static_cast<std::size_t>(a)];
        const double ca = (i == j) ? 1.0 : kInvSqrt2;
        for (Eigen::Index b = a; b < nsym; ++b) {
            auto [k, l] = pairs[static_cast<std::size_t>(b)];
            const double cb = (k == l) ? 1.0 : kInvSqrt2;
            double val = h22(i, j, k, l);
            if (k != l) val += h22(i, j, l, k);
            if (i != j) {
                val += h22(j, i, k, l);
                if (k != l) val += h22(j, i, l, k);
            }
            val *= ca * cb;
            op.matrix(1 + n + a, 1 + n + b) = val;
            op.matrix(1 + n + b, 1 + n + a) = val;
        }
    }
    return op;
}

Eigen::VectorXd oracle_eigenvalues(const DiscretizedOperator& op) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.matrix, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

PairingReport pair_sorted_values(std::vector<double> left, std::vector<double> right) {
    std::sort(left.begin(), left.end());
    std::sort(right.begin(), right.end());
    PairingReport rep;
    const std::size_t common = std::min(left.size(), right.size());
    if (left.size() != right.size()) rep.count_mismatch = true;
    for (std::size_t i = 0; i < common; ++i) {
        rep.pairs.emplace_back(left[i], right[i]);
        rep.max_distance = std::max(rep.max_distance, std::abs(left[i] - right[i]));
    }
    for (std::size_t i = common; i < left.size(); ++i) rep.only_left.push_back(left[i]);
    for (std::size_t i = common; i < right.size(); ++i) rep.only_right.push_back(right[i]);
    return rep;
}

PairingReport compare_channel(const ModelSpec& spec, std::span<const double> p,
                              const TorusGrid& grid, Interval window, double band_margin) {
    BandEdges edges = band_edges(spec, p);

    std::vector<double> roots;
    SqrtKernel sq = kernel_sqrt(spec.v2);
    Fiber fiber(spec, sq, grid, p);
    double hi1 = std::min(window.hi, edges.m_p - band_margin);
    if (hi1 > window.lo)
        for (double z : fiber_eigenvalues(fiber, window.lo, hi1)) roots.push_back(z);
    double lo2 = std::max(window.lo, edges.M_p + band_margin);
    if (window.hi > lo2)
        for (double z : fiber_eigenvalues(fiber, lo2, window.hi)) roots.push_back(z);

    std::vector<double> oracle;
    Eigen::VectorXd eigs = oracle_eigenvalues(discretize_h(spec, p, grid));
    for (Eigen::Index i = 0; i < eigs.size(); ++i) {
        double z = eigs(i);
        if (z < window.lo || z > window.hi) continue;
        if (z >= edges.m_p - band_margin && z <= edges.M_p + band_margin) continue;
        oracle.push_back(z);
    }
    return pair_sorted_values(oracle, roots);
}

PairingReport compare_faddeev(const ModelSpec& spec, const TorusGrid& grid, Interval window,
                              double band_margin) {
    SpectrumBands bands = essential_spectrum(spec, grid, window, grid);
    std::vector<double> roots = find_H_eigenvalues(spec, grid, window);

    std::vector<double> oracle;
    Eigen::VectorXd eigs = oracle_eigenvalues(discretize_H(spec, grid));
    for (Eigen::Index i = 0; i < eigs.size(); ++i) {
        double z = eigs(i);
        if (z < window.lo || z > window.hi) continue;
        bool inside = false;
        for (const Interval& band : bands.merged)
            if (band.contains(z, band_margin)) inside = true;
        if (!inside) oracle.push_back(z);
    }
    return pair_sorted_values(oracle, roots);
}

}  // namespace fockspec
