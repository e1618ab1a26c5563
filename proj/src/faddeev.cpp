#include "fockspec/faddeev.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace fockspec {

namespace {

struct Workspace {
    double w = 0.0, sqw = 0.0;
    double w0 = 0.0;
    Eigen::VectorXd w1s, v0s, v1s;
    Eigen::MatrixXd w2mat;  // w2(x_i, x_j)
    Eigen::MatrixXd ktil;   // sqrt-kernel samples tilde v2(x_i, x_j)

    Workspace(const ModelSpec& spec, const TorusGrid& grid) {
        w = grid.weight();
        sqw = std::sqrt(w);
        w0 = spec.w0;
        w1s = spec.w1.eval_on_grid(grid);
        v0s = spec.v0.eval_on_grid(grid);
        v1s = spec.v1.eval_on_grid(grid);
        w2mat = spec.w2.sample_matrix(grid);
        ktil = kernel_sqrt(spec.v2, grid).node_matrix();
        if (ktil.rows() == 0) ktil = Eigen::MatrixXd::Zero(grid.size(), grid.size());
    }
};

void check_cap(const TorusGrid& grid, const FaddeevOptions& opts) {
    const Eigen::Index n = grid.size();
    const Eigen::Index dim = 1 + n + n * n;
    if (!opts.allow_large && dim > opts.dim_cap)
        throw std::length_error("faddeev: total dimension " + std::to_string(dim) +
                                " exceeds the cap " + std::to_string(opts.dim_cap));
}

void check_off_three_particle_band(const ModelSpec& spec, double z) {
    Interval band = three_particle_branch(spec);
    if (z >= band.lo && z <= band.hi)
        throw std::domain_error("faddeev: z lies inside the three-particle band [m, M]");
}

template <typename Scalar>
BlockOperator<Scalar> assemble_A_impl(const Workspace& ws, const TorusGrid& grid, Scalar z) {
    using Mat = Eigen::MatrixX<Scalar>;
    const Eigen::Index n = grid.size();
    const double w = ws.w, sqw = ws.sqw;

    BlockOperator<Scalar> A;
    A.kind = 'A';
    A.dims = {1, n, n * n};
    A.full = Mat::Zero(1 + n + n * n, 1 + n + n * n);
    A.full(0, 0) = Scalar(1);
    A.block(2, 2).setIdentity();

    Mat invden = (ws.w2mat.template cast<Scalar>().array() - z).inverse().matrix();

    // A11: w1(p) - z - (1/2) int v1^2/(w2(p,s)-z)
    for (Eigen::Index p = 0; p < n; ++p) {
        Scalar corr =
            Scalar(0.5 * w) *
            (ws.v1s.array().square().template cast<Scalar>() * invden.row(p).transpose().array())
                .sum();
        A.full(1 + p, 1 + p) = Scalar(ws.w1s(p)) - z - corr;
    }

    for (Eigen::Index p = 0; p < n; ++p) {
        // kappa_p(t) = w sum_s ktil(t,s) v1(s)/(w2(p,s)-z)
        Eigen::VectorX<Scalar> kappa =
            Scalar(w) * (ws.ktil.template cast<Scalar>() *
                         (ws.v1s.template cast<Scalar>().array() * invden.row(p).transpose().array())
                             .matrix());
        for (Eigen::Index t = 0; t < n; ++t) {
            A.block(1, 2)(p, t * n + p) = Scalar(sqw) * kappa(t);        // pair (p, t)
            A.block(2, 1)(t * n + p, p) = Scalar(0.5 * sqw) * kappa(t);  // pair (p, t), q = t
        }
        // (V2-root resolvent V2-root) block, diagonal in the first slot; one
        // weight per nested integral:
        // G_p(q,t) = w^2 sum_s ktil(q,s) ktil(s,t)/(w2(p,s)-z)
        Mat g = Scalar(w * w) * (ws.ktil.template cast<Scalar>() *
                                 invden.row(p).asDiagonal() * ws.ktil.template cast<Scalar>());
        for (Eigen::Index q = 0; q < n; ++q)
            for (Eigen::Index t = 0; t < n; ++t) A.block(2, 2)(q * n + p, t * n + p) -= g(q, t);
    }
    return A;
}

template <typename Scalar>
BlockOperator<Scalar> assemble_K_impl(const Workspace& ws, const TorusGrid& grid, Scalar z) {
    using Mat = Eigen::MatrixX<Scalar>;
    const Eigen::Index n = grid.size();
    const double w = ws.w, sqw = ws.sqw;
    const double w32 = w * sqw;

    BlockOperator<Scalar> K;
    K.kind = 'K';
    K.dims = {1, n, n * n};
    K.full = Mat::Zero(1 + n + n * n, 1 + n + n * n);
    K.full(0, 0) = Scalar(ws.w0) - z + Scalar(1);

    Mat invden = (ws.w2mat.template cast<Scalar>().array() - z).inverse().matrix();

    for (Eigen::Index s = 0; s < n; ++s) K.block(0, 1)(0, s) = Scalar(sqw * ws.v0s(s));
    for (Eigen::Index p = 0; p < n; ++p) K.block(1, 0)(p, 0) = Scalar(-sqw * ws.v0s(p));

    // K11(p,s) = (w/2) v1(p) v1(s) / (w2(p,s) - z)
    for (Eigen::Index p = 0; p < n; ++p)
        for (Eigen::Index s = 0; s < n; ++s)
            K.block(1, 1)(p, s) = Scalar(0.5 * w * ws.v1s(p) * ws.v1s(s)) * invden(p, s);

    // K12(p; (s,t)) = -w^{3/2} v1(s) ktil(p,t)/(w2(p,s)-z)
    for (Eigen::Index p = 0; p < n; ++p)
        for (Eigen::Index s = 0; s < n; ++s) {
            Scalar f = Scalar(-w32 * ws.v1s(s)) * invden(p, s);
            for (Eigen::Index t = 0; t < n; ++t)
                K.block(1, 2)(p, t * n + s) = f * Scalar(ws.ktil(p, t));
        }

    // K21((p,q); s) = -(w^{3/2}/2) v1(p) ktil(s,q)/(w2(p,s)-z)
    for (Eigen::Index p = 0; p < n; ++p)
        for (Eigen::Index s = 0; s < n; ++s) {
            Scalar f = Scalar(-0.5 * w32 * ws.v1s(p)) * invden(p, s);
            for (Eigen::Index q = 0; q < n; ++q)
                K.block(2, 1)(q * n + p, s) = f * Scalar(ws.ktil(s, q));
        }

    // K22((p,q);(s,t)) = w^2 ktil(q,s) ktil(p,t)/(w2(p,s)-z)
    for (Eigen::Index p = 0; p < n; ++p)
        for (Eigen::Index s = 0; s < n; ++s) {
            Scalar f = Scalar(w * w) * invden(p, s);
            for (Eigen::Index q = 0; q < n; ++q) {
                Scalar fq = f * Scalar(ws.ktil(q, s));
                for (Eigen::Index t = 0; t < n; ++t)
                    K.block(2, 2)(q * n + p, t * n + s) = fq * Scalar(ws.ktil(p, t));
            }
        }
    return K;
}

std::vector<std::complex<double>> eigenvalues_near_one(const Eigen::MatrixXd& x, int count) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(x, /*computeEigenvectors=*/false);
    std::vector<std::complex<double>> eigs(es.eigenvalues().data(),
                                           es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(eigs.begin(), eigs.end(), [](auto a, auto b) {
        return std::abs(a - 1.0) < std::abs(b - 1.0);
    });
    if (count > 0 && static_cast<std::size_t>(count) < eigs.size()) eigs.resize(count);
    return eigs;
}

}  // namespace

BlockMatrix assemble_A(const ModelSpec& spec, const TorusGrid& grid, double z,
                       const FaddeevOptions& opts) {
    check_cap(grid, opts);
    check_off_three_particle_band(spec, z);
    return assemble_A_impl<double>(Workspace(spec, grid), grid, z);
}

BlockMatrixC assemble_A(const ModelSpec& spec, const TorusGrid& grid, std::complex<double> z,
                        const FaddeevOptions& opts) {
    check_cap(grid, opts);
    if (z.imag() == 0.0) check_off_three_particle_band(spec, z.real());
    return assemble_A_impl<std::complex<double>>(Workspace(spec, grid), grid, z);
}

BlockMatrix assemble_K(const ModelSpec& spec, const TorusGrid& grid, double z,
                       const FaddeevOptions& opts) {
    check_cap(grid, opts);
    check_off_three_particle_band(spec, z);
    return assemble_K_impl<double>(Workspace(spec, grid), grid, z);
}

BlockMatrixC assemble_K(const ModelSpec& spec, const TorusGrid& grid, std::complex<double> z,
                        const FaddeevOptions& opts) {
    check_cap(grid, opts);
    if (z.imag() == 0.0) check_off_three_particle_band(spec, z.real());
    return assemble_K_impl<std::complex<double>>(Workspace(spec, grid), grid, z);
}

std::vector<std::complex<double>> t_eigenvalues(const ModelSpec& spec, const TorusGrid& grid,
                                                double z, int count, const FaddeevOptions& opts) {
    check_cap(grid, opts);
    MarginReport margin = a_invertibility_margin(spec, z, grid, grid);
    if (margin.margin <= 1e-8)
        throw std::runtime_error("t_eigenvalues: A(z) is numerically singular, z too close to "
                                 "the channel-operator spectrum");
    Workspace ws(spec, grid);
    BlockMatrix a = assemble_A_impl<double>(ws, grid, z);
    BlockMatrix k = assemble_K_impl<double>(ws, grid, z);
    Eigen::MatrixXd x = Eigen::PartialPivLU<Eigen::MatrixXd>(a.full).solve(k.full);
    return eigenvalues_near_one(x, count);
}

std::vector<double> find_H_eigenvalues(const ModelSpec& spec, const TorusGrid& grid,
                                       Interval window, const HRootScanOptions& opts) {
    check_cap(grid, opts.faddeev);
    Workspace ws(spec, grid);

    // channel-operator bands at matching resolution, then clip the window
    SweepOptions sweep_opts;
    sweep_opts.scan.scan_points = opts.scan_points;
    SpectrumBands bands = essential_spectrum(spec, grid, window, grid, sweep_opts);
    std::vector<std::pair<double, double>> parts;
    double cursor = window.lo;
    for (const Interval& band : bands.merged) {
        double lo = band.lo - opts.band_margin, hi = band.hi + opts.band_margin;
        if (hi < window.lo || lo > window.hi) continue;
        if (lo > cursor) parts.emplace_back(cursor, std::min(lo, window.hi));
        cursor = std::max(cursor, hi);
    }
    if (cursor < window.hi) parts.emplace_back(cursor, window.hi);

    MarginEvaluator margin(spec, grid, grid);
    auto mu = [&](double z) -> std::complex<double> {
        BlockMatrix a = assemble_A_impl<double>(ws, grid, z);
        BlockMatrix k = assemble_K_impl<double>(ws, grid, z);
        Eigen::MatrixXd x = Eigen::PartialPivLU<Eigen::MatrixXd>(a.full).solve(k.full);
        return eigenvalues_near_one(x, 1).front() - 1.0;
    };

    const double step = window.length() / std::max(2, opts.scan_points);
    std::vector<double> roots;
    for (auto [lo, hi] : parts) {
        const int points =
            std::clamp(static_cast<int>(std::ceil((hi - lo) / step)), 16, opts.scan_points);
        std::vector<double> zs(points + 1);
        std::vector<std::complex<double>> mus(points + 1);
        std::vector<bool> usable(points + 1, false);
        for (int j = 0; j <= points; ++j) {
            zs[j] = lo + (hi - lo) * j / points;
            if (margin(zs[j]).margin <= 1e-8) continue;
            mus[j] = mu(zs[j]);
            usable[j] = true;
            if (std::abs(mus[j]) <= opts.mu_tol) roots.push_back(zs[j]);
        }

        for (int j = 0; j < points; ++j) {
            if (!usable[j] || !usable[j + 1]) continue;
            // bracket on the real part; the |mu| acceptance below enforces
            // that the refined point is a genuine (real) crossing even when
            // two branches collide into a complex pair inside the cell
            if ((mus[j].real() < 0.0) == (mus[j + 1].real() < 0.0)) continue;

            // safeguarded secant on Re(mu) inside the bracket
            double a = zs[j], b = zs[j + 1];
            double fa = mus[j].real(), fb = mus[j + 1].real();
            double zc = 0.5 * (a + b);
            std::complex<double> last = mus[j + 1];
            for (int it = 0; it < 80 && std::abs(last) > opts.mu_tol; ++it) {
                zc = (fb != fa) ? b - fb * (b - a) / (fb - fa) : 0.5 * (a + b);
                if (!(zc > a && zc < b)) zc = 0.5 * (a + b);
                last = mu(zc);
                double fc = last.real();
                if ((fa < 0.0) != (fc < 0.0)) {
                    b = zc;
                    fb = fc;
                } else {
                    a = zc;
                    fa = fc;
                }
                if (b - a < 1e-13 * std::max(1.0, std::abs(a))) break;
            }
            if (std::abs(last) <= opts.mu_tol) roots.push_back(zc);
        }
    }

    std::sort(roots.begin(), roots.end());
    std::vector<double> unique;
    for (double r : roots)
        if (unique.empty() || r - unique.back() > 1e-9) unique.push_back(r);
    return unique;
}

HEigenvector reconstruct_H_eigenvector(const ModelSpec& spec, const TorusGrid& grid, double z,
                                       const FaddeevOptions& opts) {
    check_cap(grid, opts);
    Workspace ws(spec, grid);
    const Eigen::Index n = grid.size();
    const double w = ws.w, sqw = ws.sqw;

    BlockMatrix a = assemble_A_impl<double>(ws, grid, z);
    BlockMatrix k = assemble_K_impl<double>(ws, grid, z);
    Eigen::MatrixXd x = Eigen::PartialPivLU<Eigen::MatrixXd>(a.full).solve(k.full);
    Eigen::EigenSolver<Eigen::MatrixXd> es(x);

    Eigen::Index best = 0, second = -1;
    for (Eigen::Index i = 1; i < es.eigenvalues().size(); ++i) {
        if (std::abs(es.eigenvalues()(i) - 1.0) < std::abs(es.eigenvalues()(best) - 1.0)) {
            second = best;
            best = i;
        } else if (second < 0 ||
                   std::abs(es.eigenvalues()(i) - 1.0) < std::abs(es.eigenvalues()(second) - 1.0)) {
            second = i;
        }
    }
    const double dist = std::abs(es.eigenvalues()(best) - 1.0);
    if (dist > 1e-6)
        throw std::runtime_error("reconstruct_H_eigenvector: no eigenvalue of T(z) near 1; "
                                 "z does not look like an eigenvalue of H");
    if (second >= 0 && std::abs(es.eigenvalues()(second) - 1.0) < 1e-8)
        throw std::runtime_error("reconstruct_H_eigenvector: lambda = 1 is nearly degenerate; "
                                 "eigenvector extraction is ill-conditioned");

    // the eigenvector of a simple real eigenvalue can be phase-aligned to real
    Eigen::VectorXcd vec = es.eigenvectors().col(best);
    Eigen::Index imax;
    vec.cwiseAbs().maxCoeff(&imax);
    vec *= std::abs(vec(imax)) / vec(imax);
    Eigen::VectorXd phi = vec.real();

    HEigenvector out;
    out.lambda_distance = dist;
    out.f0 = phi(0);
    out.f1 = phi.segment(1, n) / sqw;
    Eigen::MatrixXd tilde_f2 =
        Eigen::Map<const Eigen::MatrixXd>(phi.data() + 1 + n, n, n) / w;

    // f2 = R0 [ V2root (S tilde_f2) acting slot-1 + V2root tilde_f2 slot-2 - H21 f1 ]
    Eigen::ArrayXXd invden2 = (ws.w2mat.array() - z).inverse();
    Eigen::MatrixXd h21 = 0.5 * (ws.v1s * out.f1.transpose() + out.f1 * ws.v1s.transpose());
    Eigen::MatrixXd f2 =
        ((w * ws.ktil * tilde_f2.transpose() + w * tilde_f2 * ws.ktil - h21).array() * invden2)
            .matrix();
    out.f2 = symmetrize(f2);

    // normalize in the weighted norm, deterministic sign
    double norm = std::sqrt(out.f0 * out.f0 + w * out.f1.squaredNorm() +
                            w * w * out.f2.squaredNorm());
    if (norm == 0.0) throw std::runtime_error("reconstruct_H_eigenvector: vector vanished");
    double sign = 1.0;
    if (std::abs(out.f0) > 1e-12 * norm) {
        sign = out.f0 > 0 ? 1.0 : -1.0;
    } else {
        Eigen::Index junk;
        Eigen::VectorXd flat = Eigen::Map<Eigen::VectorXd>(out.f2.data(), n * n);
        double m1 = out.f1.cwiseAbs().maxCoeff(&junk);
        double m2 = flat.cwiseAbs().maxCoeff();
        if (m1 >= m2) {
            Eigen::Index i1;
            out.f1.cwiseAbs().maxCoeff(&i1);
            sign = out.f1(i1) > 0 ? 1.0 : -1.0;
        } else {
            Eigen::Index i2;
            flat.cwiseAbs().maxCoeff(&i2);
            sign = flat(i2) > 0 ? 1.0 : -1.0;
        }
    }
    out.f0 *= sign / norm;
    out.f1 *= sign / norm;
    out.f2 *= sign / norm;

    // residual of the discretized eigenvalue system
    Eigen::MatrixXd v2mat = spec.v2.sample_matrix(grid);
    double r0 = (ws.w0 - z) * out.f0 + w * ws.v0s.dot(out.f1);
    Eigen::VectorXd r1 = ws.v0s * out.f0 +
                         (ws.w1s.array() - z).matrix().cwiseProduct(out.f1) +
                         w * out.f2 * ws.v1s;
    Eigen::MatrixXd r2 =
        0.5 * (ws.v1s * out.f1.transpose() + out.f1 * ws.v1s.transpose()) +
        ((ws.w2mat.array() - z) * out.f2.array()).matrix() - w * v2mat * out.f2 -
        w * out.f2 * v2mat;
    out.residual = std::sqrt(r0 * r0 + w * r1.squaredNorm() + w * w * r2.squaredNorm());
    return out;
}

}  // namespace fockspec
