#ifndef FOCKSPEC_FADDEEV_HPP
#define FOCKSPEC_FADDEEV_HPP

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Core>

#include "fockspec/model.hpp"
#include "fockspec/spectrum.hpp"

namespace fockspec {

/// Dense operator matrix on the discretized C + L2(T^nu) + L2((T^nu)^2)
/// with block sizes (1, N, N^2); entries live in weighted (orthonormal)
/// coordinates. Pair nodes are flattened column-major: (first, second) ->
/// second*N + first.
template <typename Scalar>
struct BlockOperator {
    Eigen::MatrixX<Scalar> full;
    std::array<Eigen::Index, 3> dims{};
    char kind = ' ';  // 'A' or 'K'

    Eigen::Index offset(int i) const {
        Eigen::Index off = 0;
        for (int k = 0; k < i; ++k) off += dims[static_cast<std::size_t>(k)];
        return off;
    }
    auto block(int i, int j) {
        return full.block(offset(i), offset(j), dims[static_cast<std::size_t>(i)],
                          dims[static_cast<std::size_t>(j)]);
    }
    auto block(int i, int j) const {
        return full.block(offset(i), offset(j), dims[static_cast<std::size_t>(i)],
                          dims[static_cast<std::size_t>(j)]);
    }
};

using BlockMatrix = BlockOperator<double>;
using BlockMatrixC = BlockOperator<std::complex<double>>;

struct FaddeevOptions {
    Eigen::Index dim_cap = 5000;  // refuse assemblies with 1 + N + N^2 above this
    bool allow_large = false;
};

/// A(z): diagonal-plus-kernel part of the Faddeev system. Zero blocks at
/// (0,1), (0,2), (1,0), (2,0).
BlockMatrix assemble_A(const ModelSpec& spec, const TorusGrid& grid, double z,
                       const FaddeevOptions& opts = {});
BlockMatrixC assemble_A(const ModelSpec& spec, const TorusGrid& grid, std::complex<double> z,
                        const FaddeevOptions& opts = {});

/// K(z): the compact part. Zero blocks at (0,2) and (2,0).
BlockMatrix assemble_K(const ModelSpec& spec, const TorusGrid& grid, double z,
                       const FaddeevOptions& opts = {});
BlockMatrixC assemble_K(const ModelSpec& spec, const TorusGrid& grid, std::complex<double> z,
                        const FaddeevOptions& opts = {});

/// Eigenvalues of T(z) = A(z)^{-1} K(z) nearest to 1, by columnwise solve
/// rather than explicit inversion. Throws when A(z) is numerically singular
/// (invertibility margin below 1e-8 at the grid-node sweep).
std::vector<std::complex<double>> t_eigenvalues(const ModelSpec& spec, const TorusGrid& grid,
                                                double z, int count,
                                                const FaddeevOptions& opts = {});

struct HRootScanOptions {
    int scan_points = 400;
    double mu_tol = 1e-8;        // |lambda_nearest(T(z)) - 1| acceptance
    double band_margin = 1e-6;   // clip margin around computed sigma(H-hat) bands
    double imag_tol = 1e-6;      // treat the nearest eigenvalue as real below this
    FaddeevOptions faddeev{};
};

/// Roots of "1 is an eigenvalue of T(z)" in the window, away from the
/// computed channel-operator spectrum: scans mu(z) = Re(nearest eigenvalue
/// of T(z)) - 1, brackets sign changes, refines by secant.
std::vector<double> find_H_eigenvalues(const ModelSpec& spec, const TorusGrid& grid,
                                       Interval window, const HRootScanOptions& opts = {});

struct HEigenvector {
    double f0 = 0.0;
    Eigen::VectorXd f1;   // node values
    Eigen::MatrixXd f2;   // node values on grid^2, symmetrized
    double residual = 0.0;
    double lambda_distance = 0.0;  // |lambda - 1| of the eigenvalue used
};

/// Eigenvector of T(z) for the eigenvalue nearest 1, mapped back to
/// (f0, f1, f2); throws when the lambda = 1 eigenvalue is nearly degenerate.
HEigenvector reconstruct_H_eigenvector(const ModelSpec& spec, const TorusGrid& grid, double z,
                                       const FaddeevOptions& opts = {});

}  // namespace fockspec

#endif
