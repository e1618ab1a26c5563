#include "fockspec/friedrichs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

namespace fockspec {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

double golden_min_abs(const std::function<double(double)>& f, double a, double b, double xtol) {
    static const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = std::abs(f(c)), fd = std::abs(f(d));
    while (b - a > xtol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = std::abs(f(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = std::abs(f(d));
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

BandEdges band_edges(const ModelSpec& spec, std::span<const double> p,
                     const BandEdgeOptions& opts) {
    if (static_cast<int>(p.size()) != spec.nu)
        throw std::invalid_argument("band_edges: point dimension mismatch");
    TrigPoly slice = spec.w2.fix_first(p);
    BandEdges e;
    e.p.assign(p.begin(), p.end());
    e.m_p = minimize_trigpoly(slice, opts.dense_n).value;
    e.M_p = maximize_trigpoly(slice, opts.dense_n).value;
    return e;
}

Fiber::Fiber(const ModelSpec& spec, const SqrtKernel& sqrt_kernel, const TorusGrid& grid,
             std::span<const double> p, const BandEdgeOptions& edge_opts)
    : grid_(grid), p_(p.begin(), p.end()) {
    if (static_cast<int>(p.size()) != spec.nu || grid.nu() != spec.nu)
        throw std::invalid_argument("Fiber: dimension mismatch");
    edges_ = band_edges(spec, p, edge_opts);
    w1p_ = spec.w1.eval(p);
    sqw_ = std::sqrt(grid.weight());

    w2row_ = spec.w2.fix_first(p).eval_on_grid(grid);
    v1s_ = spec.v1.eval_on_grid(grid);
    v1sq_ = v1s_.cwiseProduct(v1s_);

    const auto r = static_cast<Eigen::Index>(sqrt_kernel.factors().size());
    psi_.resize(grid.size(), r);
    for (Eigen::Index k = 0; k < r; ++k)
        psi_.col(k) = sqrt_kernel.factors()[static_cast<std::size_t>(k)].eval_on_grid(grid);
    psiw_ = sqw_ * psi_;

    if (r > 0) {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(psiw_);
        qr.setThreshold(1e-13);
        const Eigen::Index rank = qr.rank();
        thinq_ = qr.householderQ() * Eigen::MatrixXd::Identity(grid.size(), rank);
        smat_ = thinq_.transpose() * psiw_;
    } else {
        thinq_.resize(grid.size(), 0);
        smat_.resize(0, 0);
    }
}

void Fiber::check_off_band(double z) const {
    if (z >= edges_.m_p && z <= edges_.M_p)
        throw std::domain_error("fiber: z lies inside the essential band [m(p), M(p)]");
}

template <typename Scalar>
Eigen::MatrixX<Scalar> Fiber::reduced_matrix(Scalar z) const {
    using Vec = Eigen::VectorX<Scalar>;
    const double w = grid_.weight();
    Vec invden = (w2row_.template cast<Scalar>().array() - z).inverse().matrix();
    const Scalar d0 = Scalar(w1p_) - z -
                      Scalar(0.5 * w) * v1sq_.template cast<Scalar>().cwiseProduct(invden).sum();

    const Eigen::Index r = psi_.cols(), rp = thinq_.cols();
    Eigen::MatrixX<Scalar> out(rp + 1, rp + 1);
    out(0, 0) = d0;
    if (rp == 0) return out;

    Vec m(r);
    for (Eigen::Index k = 0; k < r; ++k)
        m(k) = Scalar(w) *
               psi_.col(k).template cast<Scalar>().cwiseProduct(invden).dot(
                   v1s_.template cast<Scalar>());
    Eigen::MatrixX<Scalar> c(r, r);
    for (Eigen::Index k = 0; k < r; ++k)
        for (Eigen::Index l = k; l < r; ++l) {
            c(k, l) = Scalar(w) * (psi_.col(k).cwiseProduct(psi_.col(l)))
                                      .template cast<Scalar>()
                                      .cwiseProduct(invden)
                                      .sum();
            c(l, k) = c(k, l);
        }

    // symmetric 1/sqrt(2) border as in the eigenvector reduction; the
    // determinant matches the 1 and 1/2 split but the null vector maps back
    // to a genuine eigenvector only in this form
    Vec mm = Scalar(kInvSqrt2) * (smat_.template cast<Scalar>() * m);
    out.row(0).tail(rp) = mm.transpose();
    out.col(0).tail(rp) = mm;
    out.bottomRightCorner(rp, rp) =
        Eigen::MatrixX<Scalar>::Identity(rp, rp) -
        smat_.template cast<Scalar>() * c * smat_.transpose().template cast<Scalar>();
    return out;
}

template <typename Scalar>
Scalar Fiber::reduced_impl(Scalar z) const {
    Eigen::MatrixX<Scalar> m = reduced_matrix(z);
    if (m.rows() == 1) return m(0, 0);
    return Eigen::PartialPivLU<Eigen::MatrixX<Scalar>>(m).determinant();
}

template <typename Scalar>
Eigen::MatrixX<Scalar> Fiber::dense_impl(Scalar z) const {
    using Vec = Eigen::VectorX<Scalar>;
    const double w = grid_.weight();
    const Eigen::Index n = grid_.size(), r = psi_.cols();
    Vec invden = (w2row_.template cast<Scalar>().array() - z).inverse().matrix();
    const Scalar d0 = Scalar(w1p_) - z -
                      Scalar(0.5 * w) * v1sq_.template cast<Scalar>().cwiseProduct(invden).sum();

    Eigen::MatrixX<Scalar> out = Eigen::MatrixX<Scalar>::Identity(n + 1, n + 1);
    out(0, 0) = d0;
    if (r == 0) return out;

    Vec m(r);
    for (Eigen::Index k = 0; k < r; ++k)
        m(k) = Scalar(w) *
               psi_.col(k).template cast<Scalar>().cwiseProduct(invden).dot(
                   v1s_.template cast<Scalar>());
    Eigen::MatrixX<Scalar> c(r, r);
    for (Eigen::Index k = 0; k < r; ++k)
        for (Eigen::Index l = k; l < r; ++l) {
            c(k, l) = Scalar(w) * (psi_.col(k).cwiseProduct(psi_.col(l)))
                                      .template cast<Scalar>()
                                      .cwiseProduct(invden)
                                      .sum();
            c(l, k) = c(k, l);
        }

    Eigen::MatrixX<Scalar> psiw = psiw_.template cast<Scalar>();
    Vec row = Scalar(kInvSqrt2) * (psiw * m);
    out.row(0).tail(n) = row.transpose();
    out.col(0).tail(n) = row;
    out.bottomRightCorner(n, n).noalias() -= psiw * c * psiw.transpose();
    return out;
}

double Fiber::det(double z) const {
    check_off_band(z);
    return reduced_impl<double>(z);
}

std::complex<double> Fiber::det(std::complex<double> z) const {
    if (z.imag() == 0.0) check_off_band(z.real());
    return reduced_impl<std::complex<double>>(z);
}

double Fiber::dense_det(double z) const {
    check_off_band(z);
    Eigen::MatrixXd m = dense_impl<double>(z);
    return Eigen::PartialPivLU<Eigen::MatrixXd>(m).determinant();
}

Eigen::MatrixXd Fiber::dense_E_plus_A0(double z) const {
    check_off_band(z);
    return dense_impl<double>(z);
}

Eigen::MatrixXcd Fiber::dense_E_plus_A0(std::complex<double> z) const {
    if (z.imag() == 0.0) check_off_band(z.real());
    return dense_impl<std::complex<double>>(z);
}

double Fiber::smallest_singular_value(double z) const {
    check_off_band(z);
    Eigen::MatrixXd m = reduced_matrix<double>(z);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    double sigma = svd.singularValues().minCoeff();
    // E + A0 acts as the identity on the complement of the reduced subspace
    if (thinq_.cols() < grid_.size()) sigma = std::min(sigma, 1.0);
    return sigma;
}

Eigen::MatrixXd assemble_A0(const ModelSpec& spec, std::span<const double> p, double z,
                            const TorusGrid& grid) {
    SqrtKernel sq = kernel_sqrt(spec.v2);
    Fiber fiber(spec, sq, grid, p);
    const Eigen::Index n = grid.size();
    return fiber.dense_E_plus_A0(z) - Eigen::MatrixXd::Identity(n + 1, n + 1);
}

Eigen::MatrixXcd assemble_A0(const ModelSpec& spec, std::span<const double> p,
                             std::complex<double> z, const TorusGrid& grid) {
    SqrtKernel sq = kernel_sqrt(spec.v2);
    Fiber fiber(spec, sq, grid, p);
    const Eigen::Index n = grid.size();
    return fiber.dense_E_plus_A0(z) - Eigen::MatrixXcd::Identity(n + 1, n + 1);
}

FiberDeterminant det_E_plus_A0(const ModelSpec& spec, std::span<const double> p, double z,
                               const TorusGrid& grid, DetMethod method) {
    SqrtKernel sq = kernel_sqrt(spec.v2);
    Fiber fiber(spec, sq, grid, p);
    FiberDeterminant out;
    out.p.assign(p.begin(), p.end());
    out.z = z;
    out.value = method == DetMethod::Dense ? fiber.dense_det(z) : fiber.det(z);
    if (separable_delta_applicable(spec)) {
        out.delta_values = separable_delta_factors(spec, p, z, grid);
    }
    return out;
}

bool separable_delta_applicable(const ModelSpec& spec) {
    if (spec.nu != 3) return false;
    if (!spec.v1.is_even(1e-14 * std::max(1.0, spec.v1.max_abs_coeff()))) return false;

    // v2 must be the rank-6 cosine-difference kernel sum_i cos(p_i - q_i)
    const double scale = std::max(1.0, spec.v2.sup_bound());
    for (int trial = 0; trial < 16; ++trial) {
        std::vector<double> p(3), q(3);
        for (int d = 0; d < 3; ++d) {
            p[d] = std::sin(0.7 * (trial + 1) + 1.3 * d) * std::numbers::pi;
            q[d] = std::sin(1.9 * (trial + 1) + 0.4 * d) * std::numbers::pi;
        }
        double ref = 0.0;
        for (int d = 0; d < 3; ++d) ref += std::cos(p[d] - q[d]);
        if (std::abs(spec.v2.eval(p, q) - ref) > 1e-10 * scale) return false;
    }

    // w2(p, .) even in every coordinate, for a sample of p
    for (int trial = 0; trial < 6; ++trial) {
        std::vector<double> p(3);
        for (int d = 0; d < 3; ++d) p[d] = std::cos(0.9 * (trial + 1) + 2.1 * d) * std::numbers::pi;
        TrigPoly slice = spec.w2.fix_first(p);
        double sc = std::max(1.0, slice.max_abs_coeff());
        for (int axis = 0; axis < 3; ++axis) {
            TrigPoly diff = slice + (-1.0) * slice.reflected(axis);
            if (diff.max_abs_coeff() > 1e-12 * sc) return false;
        }
    }
    return true;
}

std::array<double, 4> separable_delta_factors(const ModelSpec& spec, std::span<const double> p,
                                              double z, const TorusGrid& grid) {
    if (!separable_delta_applicable(spec))
        throw std::invalid_argument(
            "separable_delta_factors: spec is outside the rank-6 cosine kernel family");
    BandEdges e = band_edges(spec, p);
    if (z >= e.m_p && z <= e.M_p)
        throw std::domain_error("separable_delta_factors: z lies inside [m(p), M(p)]");

    const double w = grid.weight();
    Eigen::VectorXd invden =
        (spec.w2.fix_first(p).eval_on_grid(grid).array() - z).inverse().matrix();
    Eigen::VectorXd v1s = spec.v1.eval_on_grid(grid);

    Eigen::MatrixXd cosv(grid.size(), 3), sinv(grid.size(), 3);
    for (int d = 0; d < 3; ++d) {
        TrigPoly::Freq k(3, 0);
        k[d] = 1;
        cosv.col(d) = TrigPoly::harmonic(3, k, 1.0, 0.0).eval_on_grid(grid);
        sinv.col(d) = TrigPoly::harmonic(3, k, 0.0, 1.0).eval_on_grid(grid);
    }

    // cosine and sine moments of the resolvent weight
    Eigen::Matrix3d cm;
    Eigen::Vector3d b, c;
    for (int i = 0; i < 3; ++i) {
        for (int j = i; j < 3; ++j) {
            cm(i, j) = w * cosv.col(i).cwiseProduct(cosv.col(j)).cwiseProduct(invden).sum();
            cm(j, i) = cm(i, j);
        }
        b(i) = w * sinv.col(i).cwiseProduct(sinv.col(i)).cwiseProduct(invden).sum();
        c(i) = kInvSqrt2 * w * cosv.col(i).cwiseProduct(v1s).cwiseProduct(invden).sum();
    }
    const double d0 = spec.w1.eval(p) - z - 0.5 * w * v1s.cwiseProduct(v1s).cwiseProduct(invden).sum();

    Eigen::Matrix4d m4;
    m4(0, 0) = d0;
    for (int i = 0; i < 3; ++i) {
        m4(0, i + 1) = c(i);
        m4(i + 1, 0) = c(i);
        for (int j = 0; j < 3; ++j) m4(i + 1, j + 1) = (i == j ? 1.0 : 0.0) - cm(i, j);
    }
    return {1.0 - b(0), 1.0 - b(1), 1.0 - b(2), m4.determinant()};
}

std::vector<double> scan_real_roots(const std::function<double(double)>& f, double z_lo,
                                    double z_hi, const RootScanOptions& opts) {
    if (!(z_hi > z_lo)) throw std::invalid_argument("scan_real_roots: empty window");
    const int s = std::max(2, opts.scan_points);
    std::vector<double> zs(s + 1), fs(s + 1);
    for (int j = 0; j <= s; ++j) {
        zs[j] = z_lo + (z_hi - z_lo) * j / s;
        fs[j] = f(zs[j]);
    }

    std::vector<double> roots;
    auto bisect = [&](double a, double b, double fa, double fb) {
        while (b - a > opts.bisect_tol) {
            double mid = 0.5 * (a + b);
            double fm = f(mid);
            if (fm == 0.0) return mid;
            if ((fa < 0.0) != (fm < 0.0)) {
                b = mid;
                fb = fm;
            } else {
                a = mid;
                fa = fm;
            }
        }
        return 0.5 * (a + b);
    };

    for (int j = 0; j < s; ++j) {
        if (fs[j] == 0.0) {
            roots.push_back(zs[j]);
            continue;
        }
        if ((fs[j] < 0.0) != (fs[j + 1] < 0.0)) roots.push_back(bisect(zs[j], zs[j + 1], fs[j], fs[j + 1]));
    }
    if (fs[s] == 0.0) roots.push_back(zs[s]);

    // sign-preserving roots: refine strict local minima of |f| and accept
    // when the refined value collapses relative to the local det scale
    for (int j = 1; j < s; ++j) {
        if ((fs[j] < 0.0) != (fs[j + 1] < 0.0)) continue;
        if ((fs[j - 1] < 0.0) != (fs[j] < 0.0)) continue;
        if (!(std::abs(fs[j]) < std::abs(fs[j - 1]) && std::abs(fs[j]) < std::abs(fs[j + 1])))
            continue;
        double zstar = golden_min_abs(f, zs[j - 1], zs[j + 1], opts.bisect_tol);
        double local = std::max({std::abs(fs[j - 1]), std::abs(fs[j + 1]), 1e-300});
        if (std::abs(f(zstar)) <= opts.min_det_threshold * local) roots.push_back(zstar);
    }

    std::sort(roots.begin(), roots.end());
    std::vector<double> unique;
    for (double r : roots)
        if (unique.empty() || r - unique.back() > 100.0 * opts.bisect_tol) unique.push_back(r);
    return unique;
}

std::vector<double> fiber_eigenvalues(const Fiber& fiber, double z_lo, double z_hi,
                                      const RootScanOptions& opts) {
    if (!(z_hi > z_lo)) throw std::invalid_argument("fiber_eigenvalues: empty window");
    if (z_hi >= fiber.edges().m_p && z_lo <= fiber.edges().M_p)
        throw std::domain_error("fiber_eigenvalues: window intersects [m(p), M(p)]");
    return scan_real_roots([&](double z) { return fiber.det(z); }, z_lo, z_hi, opts);
}

std::vector<double> fiber_eigenvalues(const ModelSpec& spec, std::span<const double> p,
                                      const TorusGrid& grid, double z_lo, double z_hi,
                                      const RootScanOptions& opts) {
    SqrtKernel sq = kernel_sqrt(spec.v2);
    Fiber fiber(spec, sq, grid, p);
    return fiber_eigenvalues(fiber, z_lo, z_hi, opts);
}

FiberEigenvector reconstruct_fiber_eigenvector(const ModelSpec& spec, std::span<const double> p,
                                               double z, const TorusGrid& grid) {
    SqrtKernel sq = kernel_sqrt(spec.v2);
    Fiber fiber(spec, sq, grid, p);
    Eigen::MatrixXd m = fiber.dense_E_plus_A0(z);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinV);
    const Eigen::Index last = svd.singularValues().size() - 1;
    const double sigma_min = svd.singularValues()(last);
    if (sigma_min > 1e-6)
        throw std::runtime_error(
            "reconstruct_fiber_eigenvector: null space numerically trivial, root looks spurious");

    const double w = grid.weight();
    const double sqw = std::sqrt(w);
    const Eigen::Index n = grid.size();
    Eigen::VectorXd phi = svd.matrixV().col(last);
    const double f0_raw = phi(0);
    Eigen::VectorXd tilde_f1 = phi.tail(n) / sqw;

    Eigen::VectorXd invden =
        (spec.w2.fix_first(p).eval_on_grid(grid).array() - z).inverse().matrix();
    Eigen::VectorXd v1s = spec.v1.eval_on_grid(grid);

    // f1 = [ (sqrt(v) tilde_f1) - v1 f0 / sqrt(2) ] / (w2(p,.) - z)
    Eigen::VectorXd vroot_f1 = Eigen::VectorXd::Zero(n);
    for (const auto& psi : sq.factors()) {
        Eigen::VectorXd vals = psi.eval_on_grid(grid);
        vroot_f1 += vals * (w * vals.dot(tilde_f1));
    }
    Eigen::VectorXd f1 = (vroot_f1 - kInvSqrt2 * f0_raw * v1s).cwiseProduct(invden);
    double f0 = f0_raw;

    // normalize in the weighted norm, deterministic sign
    double norm = std::sqrt(f0 * f0 + w * f1.squaredNorm());
    if (norm == 0.0)
        throw std::runtime_error("reconstruct_fiber_eigenvector: reconstructed vector vanished");
    double sign = 1.0;
    if (std::abs(f0) > 1e-12 * norm)
        sign = f0 > 0 ? 1.0 : -1.0;
    else {
        Eigen::Index imax;
        f1.cwiseAbs().maxCoeff(&imax);
        sign = f1(imax) > 0 ? 1.0 : -1.0;
    }
    f0 *= sign / norm;
    f1 *= sign / norm;

    // residual of the discretized fiber eigen-equation
    Eigen::VectorXd w2row = spec.w2.fix_first(p).eval_on_grid(grid);
    double r0 = (spec.w1.eval(p) - z) * f0 + kInvSqrt2 * w * v1s.dot(f1);
    Eigen::VectorXd vf1 = Eigen::VectorXd::Zero(n);
    if (spec.v2.rank() > 0)
        for (const auto& [g, h] : spec.v2.terms())
            vf1 += g.eval_on_grid(grid) * (w * h.eval_on_grid(grid).dot(f1));
    Eigen::VectorXd r1 =
        kInvSqrt2 * f0 * v1s + (w2row.array() - z).matrix().cwiseProduct(f1) - vf1;

    FiberEigenvector out;
    out.f0 = f0;
    out.f1 = std::move(f1);
    out.sigma_min = sigma_min;
    out.residual = std::sqrt(r0 * r0 + w * r1.squaredNorm());
    return out;
}

}  // namespace fockspec
