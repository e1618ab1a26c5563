#include "fockspec/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

namespace fockspec {

namespace {

// Deterministic low-discrepancy points on T^nu (Weyl / Kronecker sequence).
std::vector<std::vector<double>> sample_points(int nu, int count) {
    static const double alphas[] = {0.6180339887498949, 0.7548776662466927, 0.8191725133961645,
                                    0.8566748838545029, 0.8812714616335696, 0.8986537126286993};
    std::vector<std::vector<double>> pts(count, std::vector<double>(nu));
    for (int i = 0; i < count; ++i)
        for (int d = 0; d < nu; ++d) {
            double t = std::fmod((i + 1) * alphas[d % 6] + 0.37 * d, 1.0);
            pts[i][d] = -std::numbers::pi + 2.0 * std::numbers::pi * t;
        }
    return pts;
}

}  // namespace

SeparableKernel SeparableKernel::from_factors(std::vector<TrigPoly> factors) {
    if (factors.empty()) throw std::invalid_argument("SeparableKernel: empty factor list");
    SeparableKernel k(factors.front().nu());
    k.factor_form_ = true;
    for (auto& phi : factors) {
        if (phi.nu() != k.nu_)
            throw std::invalid_argument("SeparableKernel: factor dimension mismatch");
        TrigPoly copy = phi;
        k.terms_.emplace_back(std::move(copy), std::move(phi));
    }
    return k;
}

SeparableKernel SeparableKernel::from_pairs(std::vector<std::pair<TrigPoly, TrigPoly>> terms) {
    if (terms.empty()) throw std::invalid_argument("SeparableKernel: empty term list");
    SeparableKernel k(terms.front().first.nu());
    for (auto& t : terms) {
        if (t.first.nu() != k.nu_ || t.second.nu() != k.nu_)
            throw std::invalid_argument("SeparableKernel: term dimension mismatch");
    }
    k.terms_ = std::move(terms);
    return k;
}

SeparableKernel SeparableKernel::zero(int nu) {
    SeparableKernel k(nu);
    k.factor_form_ = true;  // empty factor list: identically zero, trivially positive
    return k;
}

std::vector<TrigPoly> SeparableKernel::factors() const {
    if (!factor_form_)
        throw std::logic_error("SeparableKernel: kernel was not built from a factor list");
    std::vector<TrigPoly> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) out.push_back(t.first);
    return out;
}

double SeparableKernel::eval(std::span<const double> p, std::span<const double> q) const {
    double sum = 0.0;
    for (const auto& [g, h] : terms_) sum += g.eval(p) * h.eval(q);
    return sum;
}

TrigPoly SeparableKernel::fix_first(std::span<const double> p) const {
    TrigPoly out(nu_);
    for (const auto& [g, h] : terms_) out += g.eval(p) * h;
    return out;
}

TrigPoly SeparableKernel::fix_second(std::span<const double> q) const {
    TrigPoly out(nu_);
    for (const auto& [g, h] : terms_) out += h.eval(q) * g;
    return out;
}

Eigen::MatrixXd SeparableKernel::sample_matrix(const TorusGrid& grid) const {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(grid.size(), grid.size());
    for (const auto& [g, h] : terms_)
        out.noalias() += g.eval_on_grid(grid) * h.eval_on_grid(grid).transpose();
    return out;
}

Eigen::MatrixXd SeparableKernel::gram() const {
    auto phi = factors();
    const auto r = static_cast<Eigen::Index>(phi.size());
    Eigen::MatrixXd g(r, r);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = i; j < r; ++j) g(i, j) = g(j, i) = phi[i].inner(phi[j]);
    return g;
}

double SeparableKernel::symmetry_defect() const {
    auto pts = sample_points(nu_, 24);
    double worst = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            worst = std::max(worst, std::abs(eval(pts[i], pts[j]) - eval(pts[j], pts[i])));
    return worst;
}

double SeparableKernel::sup_bound() const {
    double s = 0.0;
    for (const auto& [g, h] : terms_) s += g.sup_bound() * h.sup_bound();
    return s;
}

ValidationReport validate(const ModelSpec& spec) {
    ValidationReport report;
    auto add = [&](const std::string& name, bool passed, const std::string& detail) {
        report.items.push_back({name, passed, detail});
    };

    {
        double defect = spec.w2.symmetry_defect();
        std::ostringstream os;
        os << "max sampled |w2(p,q)-w2(q,p)| = " << defect;
        add("w2 symmetry", defect <= 1e-12 * std::max(1.0, spec.w2.sup_bound()), os.str());
    }
    {
        double defect = spec.v2.symmetry_defect();
        std::ostringstream os;
        os << "max sampled |v2(p,q)-v2(q,p)| = " << defect;
        add("v2 symmetry", defect <= 1e-12 * std::max(1.0, spec.v2.sup_bound()), os.str());
    }
    {
        bool psd = false;
        std::ostringstream os;
        if (spec.v2.has_factor_form() && spec.v2.rank() == 0) {
            psd = true;
            os << "zero kernel";
        } else if (spec.v2.has_factor_form()) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(spec.v2.gram());
            double lo = es.eigenvalues().minCoeff();
            psd = lo >= -1e-12;
            os << "min Gram eigenvalue = " << lo;
        } else {
            // no factor list; fall back to a sampled operator matrix
            TorusGrid g(spec.nu, 8);
            Eigen::MatrixXd m = g.weight() * spec.v2.sample_matrix(g);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
            double lo = es.eigenvalues().minCoeff();
            psd = lo >= -1e-12 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
            os << "min sampled operator eigenvalue = " << lo;
        }
        add("v positivity", psd, os.str());
    }
    return report;
}

SqrtKernel kernel_sqrt(const SeparableKernel& v2) {
    if (!v2.has_factor_form())
        throw std::invalid_argument("kernel_sqrt: v2 must be given as a symmetric factor list");

    SqrtKernel out;
    out.nu_ = v2.nu();
    if (v2.rank() == 0) {
        out.eigenvalues_.resize(0);
        return out;
    }

    auto phi = v2.factors();
    Eigen::MatrixXd gram = v2.gram();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    const Eigen::VectorXd& lam = es.eigenvalues();
    if (lam.minCoeff() < -1e-12)
        throw std::runtime_error("kernel_sqrt: operator is not positive (Gram eigenvalue " +
                                 std::to_string(lam.minCoeff()) + ")");

    const double lam_max = std::max(lam.maxCoeff(), 0.0);
    const double cut = 1e-12 * std::max(1.0, lam_max);
    std::vector<double> kept;
    for (Eigen::Index j = 0; j < lam.size(); ++j) {
        if (lam(j) <= cut) continue;  // null directions do not contribute to the root
        kept.push_back(lam(j));
        TrigPoly psi(v2.nu());
        const double scale = std::pow(lam(j), -0.25);
        for (Eigen::Index k = 0; k < lam.size(); ++k)
            psi += (scale * es.eigenvectors()(k, j)) * phi[k];
        out.factors_.push_back(std::move(psi));
    }
    out.eigenvalues_ =
        Eigen::Map<Eigen::VectorXd>(kept.data(), static_cast<Eigen::Index>(kept.size()));
    return out;
}

SqrtKernel kernel_sqrt(const SeparableKernel& v2, const TorusGrid& grid) {
    if (grid.nu() != v2.nu()) throw std::invalid_argument("kernel_sqrt: grid dimension mismatch");
    SqrtKernel out = kernel_sqrt(v2);
    out.node_matrix_ = out.sample_matrix(grid);
    return out;
}

double SqrtKernel::eval(std::span<const double> p, std::span<const double> q) const {
    double sum = 0.0;
    for (const auto& psi : factors_) sum += psi.eval(p) * psi.eval(q);
    return sum;
}

TrigPoly SqrtKernel::fix_first(std::span<const double> p) const {
    TrigPoly out(nu_ > 0 ? nu_ : 1);
    for (const auto& psi : factors_) out += psi.eval(p) * psi;
    return out;
}

Eigen::MatrixXd SqrtKernel::sample_matrix(const TorusGrid& grid) const {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(grid.size(), grid.size());
    for (const auto& psi : factors_) {
        Eigen::VectorXd vals = psi.eval_on_grid(grid);
        out.noalias() += vals * vals.transpose();
    }
    return out;
}

Eigen::MatrixXd apply_V(int which, bool use_sqrt, const Eigen::MatrixXd& f2,
                        const TorusGrid& grid, const ModelSpec& spec, const SqrtKernel& sqrt) {
    if (which != 1 && which != 2) throw std::invalid_argument("apply_V: which must be 1 or 2");
    if (f2.rows() != grid.size() || f2.cols() != grid.size())
        throw std::invalid_argument("apply_V: f2 must be sampled on the full grid^2 node set");
    const Eigen::MatrixXd kernel =
        use_sqrt ? sqrt.node_matrix() : spec.v2.sample_matrix(grid);
    if (kernel.rows() != grid.size())
        throw std::invalid_argument("apply_V: kernel was sampled on a different grid");
    if (which == 1) return grid.weight() * (kernel * f2);
    return grid.weight() * (f2 * kernel);
}

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& f2) {
    if (f2.rows() != f2.cols()) throw std::invalid_argument("symmetrize: matrix must be square");
    return 0.5 * (f2 + f2.transpose());
}

}  // namespace fockspec
