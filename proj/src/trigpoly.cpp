#include "fockspec/trigpoly.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "fockspec/torus.hpp"

namespace fockspec {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Canonical frequency: first nonzero component positive. Returns the sign
// applied (+1 unchanged, -1 negated); sine coefficients flip with it.
int canonicalize(std::vector<int>& k) {
    for (int c : k) {
        if (c > 0) return 1;
        if (c < 0) {
            for (int& d : k) d = -d;
            return -1;
        }
    }
    return 1;  // zero frequency
}

bool is_zero_freq(const std::vector<int>& k) {
    for (int c : k)
        if (c != 0) return false;
    return true;
}
}  // namespace

TrigPoly::TrigPoly(int nu) : nu_(nu) {
    if (nu < 1) throw std::invalid_argument("TrigPoly: dimension nu must be >= 1");
}

TrigPoly TrigPoly::constant(int nu, double value) {
    TrigPoly f(nu);
    f.add_term(Freq(nu, 0), value, 0.0);
    return f;
}

TrigPoly TrigPoly::harmonic(int nu, const Freq& k, double cos_coeff, double sin_coeff) {
    TrigPoly f(nu);
    f.add_term(k, cos_coeff, sin_coeff);
    return f;
}

void TrigPoly::add_term(const Freq& k, double cos_coeff, double sin_coeff) {
    if (static_cast<int>(k.size()) != nu_)
        throw std::invalid_argument("TrigPoly::add_term: frequency dimension mismatch");
    Freq kk = k;
    int sign = canonicalize(kk);
    auto& [a, b] = terms_[kk];
    a += cos_coeff;
    if (is_zero_freq(kk)) return;  // sin(0) contributes nothing
    b += sign * sin_coeff;
}

int TrigPoly::degree() const {
    int deg = 0;
    for (const auto& [k, ab] : terms_)
        for (int c : k) deg = std::max(deg, std::abs(c));
    return deg;
}

bool TrigPoly::is_zero(double tol) const {
    for (const auto& [k, ab] : terms_)
        if (std::abs(ab.first) > tol || std::abs(ab.second) > tol) return false;
    return true;
}

double TrigPoly::eval(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != nu_)
        throw std::invalid_argument("TrigPoly::eval: point dimension mismatch");
    double sum = 0.0;
    for (const auto& [k, ab] : terms_) {
        double phase = 0.0;
        for (int d = 0; d < nu_; ++d) phase += k[d] * x[d];
        sum += ab.first * std::cos(phase) + ab.second * std::sin(phase);
    }
    return sum;
}

Eigen::VectorXd TrigPoly::eval_on_grid(const TorusGrid& grid) const {
    if (grid.nu() != nu_)
        throw std::invalid_argument("TrigPoly::eval_on_grid: grid dimension mismatch");
    const int n = grid.n();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(grid.size());
    Eigen::VectorXcd acc;
    for (const auto& [k, ab] : terms_) {
        // exp(i<k,x>) factors over the axes; build it as a progressive
        // Kronecker product with axis 0 fastest, matching flat node order.
        acc.resize(1);
        acc(0) = std::complex<double>(1.0, 0.0);
        for (int d = 0; d < nu_; ++d) {
            Eigen::VectorXcd axis(n);
            for (int j = 0; j < n; ++j) {
                double ang = k[d] * grid.axis_point(j);
                axis(j) = std::complex<double>(std::cos(ang), std::sin(ang));
            }
            Eigen::VectorXcd next(acc.size() * n);
            for (int j = 0; j < n; ++j) next.segment(j * acc.size(), acc.size()) = acc * axis(j);
            acc.swap(next);
        }
        out += ab.first * acc.real() + ab.second * acc.imag();
    }
    return out;
}

TrigPoly& TrigPoly::operator+=(const TrigPoly& g) {
    if (g.nu_ != nu_) throw std::invalid_argument("TrigPoly: dimension mismatch in sum");
    for (const auto& [k, ab] : g.terms_) {
        auto& [a, b] = terms_[k];
        a += ab.first;
        b += ab.second;
    }
    return *this;
}

TrigPoly& TrigPoly::operator*=(double c) {
    for (auto& [k, ab] : terms_) {
        ab.first *= c;
        ab.second *= c;
    }
    return *this;
}

TrigPoly TrigPoly::product(const TrigPoly& g) const {
    if (g.nu_ != nu_) throw std::invalid_argument("TrigPoly: dimension mismatch in product");
    TrigPoly h(nu_);
    Freq sum(nu_), diff(nu_);
    for (const auto& [k, ab1] : terms_) {
        const auto [a1, b1] = ab1;
        for (const auto& [l, ab2] : g.terms_) {
            const auto [a2, b2] = ab2;
            for (int d = 0; d < nu_; ++d) {
                sum[d] = k[d] + l[d];
                diff[d] = k[d] - l[d];
            }
            // cosA cosB = (cos(A-B)+cos(A+B))/2, sinA sinB = (cos(A-B)-cos(A+B))/2
            // sinA cosB = (sin(A+B)+sin(A-B))/2, cosA sinB = (sin(A+B)-sin(A-B))/2
            h.add_term(sum, 0.5 * (a1 * a2 - b1 * b2), 0.5 * (a1 * b2 + b1 * a2));
            h.add_term(diff, 0.5 * (a1 * a2 + b1 * b2), 0.5 * (b1 * a2 - a1 * b2));
        }
    }
    return h;
}

TrigPoly TrigPoly::shifted(std::span<const double> a) const {
    if (static_cast<int>(a.size()) != nu_)
        throw std::invalid_argument("TrigPoly::shifted: shift dimension mismatch");
    TrigPoly h(nu_);
    for (const auto& [k, ab] : terms_) {
        double phase = 0.0;
        for (int d = 0; d < nu_; ++d) phase += k[d] * a[d];
        const double c = std::cos(phase), s = std::sin(phase);
        h.add_term(k, ab.first * c + ab.second * s, -ab.first * s + ab.second * c);
    }
    return h;
}

TrigPoly TrigPoly::reflected(int axis) const {
    if (axis < 0 || axis >= nu_) throw std::invalid_argument("TrigPoly::reflected: bad axis");
    TrigPoly h(nu_);
    for (const auto& [k, ab] : terms_) {
        Freq kk = k;
        kk[axis] = -kk[axis];
        h.add_term(kk, ab.first, ab.second);
    }
    return h;
}

double TrigPoly::integral() const {
    double vol = 1.0;
    for (int d = 0; d < nu_; ++d) vol *= kTwoPi;
    auto it = terms_.find(Freq(nu_, 0));
    return it == terms_.end() ? 0.0 : vol * it->second.first;
}

double TrigPoly::inner(const TrigPoly& g) const { return product(g).integral(); }

bool TrigPoly::is_even(double tol) const {
    for (const auto& [k, ab] : terms_)
        if (std::abs(ab.second) > tol) return false;
    return true;
}

double TrigPoly::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& [k, ab] : terms_)
        m = std::max({m, std::abs(ab.first), std::abs(ab.second)});
    return m;
}

double TrigPoly::sup_bound() const {
    double s = 0.0;
    for (const auto& [k, ab] : terms_) s += std::abs(ab.first) + std::abs(ab.second);
    return s;
}

TrigPoly TrigPoly::lifted(int pad, int offset) const {
    if (offset < 0 || offset + nu_ > nu_ + pad)
        throw std::invalid_argument("TrigPoly::lifted: offset out of range");
    TrigPoly h(nu_ + pad);
    for (const auto& [k, ab] : terms_) {
        Freq kk(nu_ + pad, 0);
        for (int d = 0; d < nu_; ++d) kk[offset + d] = k[d];
        h.add_term(kk, ab.first, ab.second);
    }
    return h;
}

namespace {

// Golden-section line search for the minimum of g over [lo, hi].
double golden_min(const std::function<double(double)>& g, double lo, double hi, double xtol) {
    static const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = g(c), fd = g(d);
    while (b - a > xtol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = g(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = g(d);
        }
    }
    return 0.5 * (a + b);
}

TrigExtremum refine_min(const TrigPoly& f, std::vector<double> x, double h) {
    const int nu = f.nu();
    double value = f.eval(x);
    for (int cycle = 0; cycle < 80; ++cycle) {
        double prev = value;
        for (int d = 0; d < nu; ++d) {
            auto line = [&](double t) {
                std::vector<double> y = x;
                y[d] = t;
                return f.eval(y);
            };
            x[d] = golden_min(line, x[d] - h, x[d] + h, 1e-11);
        }
        value = f.eval(x);
        if (prev - value < 1e-14 * (1.0 + std::abs(value))) break;
    }
    return {wrap_to_torus(x), f.eval(x)};
}

}  // namespace

TrigExtremum minimize_trigpoly(const TrigPoly& f, int dense_n, int starts) {
    TorusGrid grid(f.nu(), dense_n);
    Eigen::VectorXd vals = f.eval_on_grid(grid);

    // best `starts` distinct grid candidates
    std::vector<Eigen::Index> order(vals.size());
    for (Eigen::Index i = 0; i < vals.size(); ++i) order[i] = i;
    std::partial_sort(order.begin(), order.begin() + std::min<Eigen::Index>(starts, vals.size()),
                      order.end(), [&](auto a, auto b) { return vals(a) < vals(b); });

    const double h = std::numbers::pi / dense_n;
    TrigExtremum best{grid.node_vec(order[0]), vals(order[0])};
    for (int s = 0; s < starts && s < static_cast<int>(order.size()); ++s) {
        TrigExtremum cand = refine_min(f, grid.node_vec(order[s]), h);
        if (cand.value < best.value) best = cand;
    }
    return best;
}

TrigExtremum maximize_trigpoly(const TrigPoly& f, int dense_n, int starts) {
    TrigExtremum m = minimize_trigpoly(-1.0 * f, dense_n, starts);
    return {m.point, -m.value};
}

}  // namespace fockspec
