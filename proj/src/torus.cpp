#include "fockspec/torus.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fockspec {

namespace {
constexpr double kPi = std::numbers::pi;
}

TorusGrid::TorusGrid(int nu, int n) : nu_(nu), n_(n) {
    if (nu < 1) throw std::invalid_argument("TorusGrid: dimension nu must be >= 1");
    if (n < 2) throw std::invalid_argument("TorusGrid: need at least 2 points per axis");
    weight_ = 1.0;
    size_ = 1;
    for (int d = 0; d < nu_; ++d) {
        weight_ *= 2.0 * kPi / n_;
        size_ *= n_;
    }
    axis_.resize(n_);
    for (int j = 0; j < n_; ++j) axis_[j] = -kPi + 2.0 * kPi * (j + 1) / n_;
}

void TorusGrid::node(Eigen::Index i, std::span<double> out) const {
    for (int d = 0; d < nu_; ++d) {
        out[d] = axis_[i % n_];
        i /= n_;
    }
}

std::vector<double> TorusGrid::node_vec(Eigen::Index i) const {
    std::vector<double> x(nu_);
    node(i, x);
    return x;
}

TorusGrid make_grid(int nu, int n) { return TorusGrid(nu, n); }

double kahan_sum(std::span<const double> values) {
    double sum = 0.0, comp = 0.0;
    for (double v : values) {
        double y = v - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

double integrate(const TorusGrid& grid, std::span<const double> samples) {
    if (static_cast<Eigen::Index>(samples.size()) != grid.size())
        throw std::invalid_argument("integrate: sample count does not match grid node count");
    return grid.weight() * kahan_sum(samples);
}

double integrate(const TorusGrid& grid, const Eigen::VectorXd& samples) {
    return integrate(grid, std::span<const double>(samples.data(),
                                                   static_cast<std::size_t>(samples.size())));
}

std::vector<double> wrap_to_torus(std::span<const double> x) {
    std::vector<double> y(x.begin(), x.end());
    for (double& c : y) {
        c = std::remainder(c, 2.0 * kPi);
        if (c <= -kPi) c += 2.0 * kPi;  // remainder returns [-pi, pi]
    }
    return y;
}

}  // namespace fockspec
