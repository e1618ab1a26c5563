#ifndef FOCKSPEC_TRIGPOLY_HPP
#define FOCKSPEC_TRIGPOLY_HPP

#include <map>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace fockspec {

class TorusGrid;

/// Real trigonometric polynomial on the nu-dimensional torus,
///     f(x) = sum_k [ a_k cos<k,x> + b_k sin<k,x> ],  k in Z^nu.
/// Frequencies are kept in a canonical form (first nonzero component
/// positive), so sums, products and integrals are exact up to rounding.
class TrigPoly {
public:
    using Freq = std::vector<int>;

    explicit TrigPoly(int nu);

    static TrigPoly constant(int nu, double value);
    /// a*cos<k,x> + b*sin<k,x>
    static TrigPoly harmonic(int nu, const Freq& k, double cos_coeff, double sin_coeff);

    int nu() const { return nu_; }
    int degree() const;
    std::size_t term_count() const { return terms_.size(); }
    bool is_zero(double tol = 0.0) const;

    void add_term(const Freq& k, double cos_coeff, double sin_coeff);

    double eval(std::span<const double> x) const;
    double operator()(std::span<const double> x) const { return eval(x); }

    /// Values at every node of a grid, in flat node order.
    Eigen::VectorXd eval_on_grid(const TorusGrid& grid) const;

    TrigPoly& operator+=(const TrigPoly& g);
    TrigPoly& operator*=(double c);
    friend TrigPoly operator+(TrigPoly f, const TrigPoly& g) { f += g; return f; }
    friend TrigPoly operator*(TrigPoly f, double c) { f *= c; return f; }
    friend TrigPoly operator*(double c, TrigPoly f) { f *= c; return f; }

    /// Exact product via the angle-addition formulas.
    TrigPoly product(const TrigPoly& g) const;
    friend TrigPoly operator*(const TrigPoly& f, const TrigPoly& g) { return f.product(g); }

    /// x -> f(x + a)
    TrigPoly shifted(std::span<const double> a) const;
    /// x_axis -> -x_axis
    TrigPoly reflected(int axis) const;

    /// integral over T^nu, exactly (2pi)^nu times the constant coefficient
    double integral() const;
    /// integral of f*g over T^nu, exact
    double inner(const TrigPoly& g) const;

    /// true iff every sine coefficient vanishes (f(-x) = f(x) identically)
    bool is_even(double tol = 0.0) const;

    double max_abs_coeff() const;
    /// crude sup-norm bound: sum of |a_k| + |b_k|
    double sup_bound() const;

    const std::map<Freq, std::pair<double, double>>& terms() const { return terms_; }

    /// Embed into T^{nu + pad} acting on coordinates [offset, offset + nu).
    TrigPoly lifted(int pad, int offset) const;

private:
    int nu_;
    std::map<Freq, std::pair<double, double>> terms_;
};

struct TrigExtremum {
    std::vector<double> point;
    double value;
};

/// Global extremum by dense grid sampling followed by cyclic per-coordinate
/// golden-section refinement from the best `starts` grid candidates.
TrigExtremum minimize_trigpoly(const TrigPoly& f, int dense_n, int starts = 8);
TrigExtremum maximize_trigpoly(const TrigPoly& f, int dense_n, int starts = 8);

}  // namespace fockspec

#endif
