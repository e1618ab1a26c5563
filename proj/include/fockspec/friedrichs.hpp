#ifndef FOCKSPEC_FRIEDRICHS_HPP
#define FOCKSPEC_FRIEDRICHS_HPP

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "fockspec/model.hpp"

namespace fockspec {

/// Essential-spectrum interval [m(p), M(p)] of the fiber at p: the range of
/// q -> w2(p, q).
struct BandEdges {
    std::vector<double> p;
    double m_p = 0.0;
    double M_p = 0.0;
};

struct BandEdgeOptions {
    int dense_n = 32;
};

BandEdges band_edges(const ModelSpec& spec, std::span<const double> p,
                     const BandEdgeOptions& opts = {});

/// Fredholm determinant of E + A0(p; z) for one fiber, with the closed-form
/// factorization [Delta_1 .. Delta_4] filled when the separable cosine path
/// applies.
struct FiberDeterminant {
    std::vector<double> p;
    double z = 0.0;
    double value = 0.0;
    std::optional<std::array<double, 4>> delta_values;
};

enum class DetMethod { Dense, Reduced };

struct RootScanOptions {
    int scan_points = 400;
    double bisect_tol = 1e-10;
    // refined |det| acceptance threshold (relative to the local det scale)
    // for sign-preserving (even multiplicity) roots
    double min_det_threshold = 1e-9;
};

/// Fiber assembler bound to (spec, sqrt kernel, grid, p). All per-z work
/// reuses the z-independent pieces; the reduced determinant exploits that
/// E + A0 acts as the identity off span{e_0, weighted sqrt-kernel factors},
/// so it equals the dense Nystrom determinant up to rounding.
class Fiber {
public:
    Fiber(const ModelSpec& spec, const SqrtKernel& sqrt, const TorusGrid& grid,
          std::span<const double> p, const BandEdgeOptions& edge_opts = {});

    const BandEdges& edges() const { return edges_; }
    const TorusGrid& grid() const { return grid_; }
    double w1_at_p() const { return w1p_; }

    double det(double z) const;  // reduced path
    std::complex<double> det(std::complex<double> z) const;
    double dense_det(double z) const;

    /// E + A0(p; z), weighted Nystrom matrix of size (1 + n^nu)
    Eigen::MatrixXd dense_E_plus_A0(double z) const;
    Eigen::MatrixXcd dense_E_plus_A0(std::complex<double> z) const;

    /// smallest singular value of E + A0(p; z)
    double smallest_singular_value(double z) const;

    void check_off_band(double z) const;  // throws if z in [m(p), M(p)]

private:
    template <typename Scalar>
    Eigen::MatrixX<Scalar> dense_impl(Scalar z) const;
    template <typename Scalar>
    Scalar reduced_impl(Scalar z) const;
    template <typename Scalar>
    Eigen::MatrixX<Scalar> reduced_matrix(Scalar z) const;

    const TorusGrid grid_;
    std::vector<double> p_;
    BandEdges edges_;
    double w1p_ = 0.0;
    double sqw_ = 0.0;

    Eigen::VectorXd w2row_;   // w2(p, x_s)
    Eigen::VectorXd v1s_;     // v1(x_s)
    Eigen::VectorXd v1sq_;    // v1^2(x_s)
    Eigen::MatrixXd psi_;     // unweighted sqrt-kernel factor samples, N x r
    Eigen::MatrixXd psiw_;    // sqrt(w) * psi_
    Eigen::MatrixXd thinq_;   // orthonormal basis of span(psiw_), N x r'
    Eigen::MatrixXd smat_;    // thinq_^T * psiw_, r' x r
};

/// A0(p; z) itself (E + A0 minus the identity).
Eigen::MatrixXd assemble_A0(const ModelSpec& spec, std::span<const double> p, double z,
                            const TorusGrid& grid);
Eigen::MatrixXcd assemble_A0(const ModelSpec& spec, std::span<const double> p,
                             std::complex<double> z, const TorusGrid& grid);

FiberDeterminant det_E_plus_A0(const ModelSpec& spec, std::span<const double> p, double z,
                               const TorusGrid& grid, DetMethod method = DetMethod::Dense);

/// Closed-form factors for the rank-6 cosine kernel family on T^3
/// (v2(p,q) = sum_i cos(p_i - q_i), v1 even, w2 even per coordinate):
/// Delta_i = 1 - int sin^2(s_i)/(w2(p,s)-z) ds for i = 1..3, and Delta_4 the
/// bordered 4x4 determinant built from the cosine moments. The cosine-block
/// diagonal carries 1 - int cos^2(s_i)/(w2(p,s)-z) ds, the sign the moment
/// system actually produces.
std::array<double, 4> separable_delta_factors(const ModelSpec& spec, std::span<const double> p,
                                              double z, const TorusGrid& grid);

/// true iff separable_delta_factors applies to this spec
bool separable_delta_applicable(const ModelSpec& spec);

/// Roots of det[E + A0(p; .)] in a window disjoint from [m(p), M(p)]:
/// uniform scan, bisection on sign changes, golden-section refinement of
/// |det| minima for sign-preserving roots.
std::vector<double> fiber_eigenvalues(const ModelSpec& spec, std::span<const double> p,
                                      const TorusGrid& grid, double z_lo, double z_hi,
                                      const RootScanOptions& opts = {});
std::vector<double> fiber_eigenvalues(const Fiber& fiber, double z_lo, double z_hi,
                                      const RootScanOptions& opts = {});

struct FiberEigenvector {
    double f0 = 0.0;
    Eigen::VectorXd f1;  // node values
    double residual = 0.0;
    double sigma_min = 0.0;
};

/// Null vector of E + A0(p; z) mapped back through the second fiber
/// equation; unit weighted norm, residual checked against the discretized
/// fiber eigen-equation.
FiberEigenvector reconstruct_fiber_eigenvector(const ModelSpec& spec, std::span<const double> p,
                                               double z, const TorusGrid& grid);

/// Shared scan/bisect/minima root finder for a scalar function on a window.
std::vector<double> scan_real_roots(const std::function<double(double)>& f, double z_lo,
                                    double z_hi, const RootScanOptions& opts);

}  // namespace fockspec

#endif
