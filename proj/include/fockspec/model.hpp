#ifndef FOCKSPEC_MODEL_HPP
#define FOCKSPEC_MODEL_HPP

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "fockspec/torus.hpp"
#include "fockspec/trigpoly.hpp"

namespace fockspec {

/// Finite-rank kernel K(p,q) = sum_m g_m(p) h_m(q) on (T^nu)^2.
/// The symmetric factor form sum_k phi_k(p) phi_k(q) is tracked separately
/// because the Gram-based square root needs it.
class SeparableKernel {
public:
    explicit SeparableKernel(int nu) : nu_(nu) {}

    static SeparableKernel from_factors(std::vector<TrigPoly> factors);
    static SeparableKernel from_pairs(std::vector<std::pair<TrigPoly, TrigPoly>> terms);
    static SeparableKernel zero(int nu);

    int nu() const { return nu_; }
    bool has_factor_form() const { return factor_form_; }
    std::size_t rank() const { return terms_.size(); }
    const std::vector<std::pair<TrigPoly, TrigPoly>>& terms() const { return terms_; }
    /// factor list phi_k; only valid when has_factor_form()
    std::vector<TrigPoly> factors() const;

    double eval(std::span<const double> p, std::span<const double> q) const;
    /// q -> K(p, q) as an exact TrigPoly
    TrigPoly fix_first(std::span<const double> p) const;
    /// p -> K(p, q)
    TrigPoly fix_second(std::span<const double> q) const;

    /// K(x_i, x_j) over all grid node pairs
    Eigen::MatrixXd sample_matrix(const TorusGrid& grid) const;

    /// Gram matrix G_kl = integral of phi_k phi_l, exact; factor form only.
    Eigen::MatrixXd gram() const;

    /// max |K(p,q) - K(q,p)| over a deterministic sample point set
    double symmetry_defect() const;

    double sup_bound() const;

private:
    int nu_;
    bool factor_form_ = false;
    std::vector<std::pair<TrigPoly, TrigPoly>> terms_;
};

/// Full parameter set of the model operator.
struct ModelSpec {
    int nu = 1;
    double w0 = 0.0;
    TrigPoly w1{1};
    TrigPoly v0{1};
    TrigPoly v1{1};
    SeparableKernel w2{1};
    SeparableKernel v2{1};
};

struct ValidationReport {
    struct Item {
        std::string name;
        bool passed;
        std::string detail;
    };
    std::vector<Item> items;
    bool ok() const {
        for (const auto& it : items)
            if (!it.passed) return false;
        return true;
    }
};

/// Standing-hypothesis checks: w2 symmetry, v2 symmetry, positivity of the
/// induced integral operator (Gram eigenvalues >= -1e-12).
ValidationReport validate(const ModelSpec& spec);

/// Positive square root of the rank-r integral operator with kernel v2.
/// Factors are lambda^{-1/4}-weighted eigencombinations of the Gram matrix;
/// the node-sampled matrix on `grid` is kept as a dense fallback.
class SqrtKernel {
public:
    SqrtKernel() = default;

    int nu() const { return nu_; }
    const std::vector<TrigPoly>& factors() const { return factors_; }
    /// nonzero eigenvalues of the original operator v (Gram eigenvalues)
    const Eigen::VectorXd& operator_eigenvalues() const { return eigenvalues_; }
    const Eigen::MatrixXd& node_matrix() const { return node_matrix_; }

    double eval(std::span<const double> p, std::span<const double> q) const;
    TrigPoly fix_first(std::span<const double> p) const;
    Eigen::MatrixXd sample_matrix(const TorusGrid& grid) const;

    friend SqrtKernel kernel_sqrt(const SeparableKernel& v2, const TorusGrid& grid);
    friend SqrtKernel kernel_sqrt(const SeparableKernel& v2);

private:
    int nu_ = 0;
    std::vector<TrigPoly> factors_;
    Eigen::VectorXd eigenvalues_;
    Eigen::MatrixXd node_matrix_;
};

SqrtKernel kernel_sqrt(const SeparableKernel& v2, const TorusGrid& grid);
/// factor form only, without the node-sampled fallback matrix
SqrtKernel kernel_sqrt(const SeparableKernel& v2);

/// Partial-integral application of V_1 / V_2 (or their square roots) to a
/// node-sampled f2; row index of f2 is the first argument.
///   V_1: integrate the kernel against the first slot of f2,
///   V_2: against the second slot.
Eigen::MatrixXd apply_V(int which, bool use_sqrt, const Eigen::MatrixXd& f2,
                        const TorusGrid& grid, const ModelSpec& spec, const SqrtKernel& sqrt);

/// (f2 + f2^T)/2
Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& f2);

}  // namespace fockspec

#endif
