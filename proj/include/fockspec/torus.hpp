#ifndef FOCKSPEC_TORUS_HPP
#define FOCKSPEC_TORUS_HPP

#include <span>
#include <vector>

#include <Eigen/Core>

namespace fockspec {

/// Uniform quadrature grid on T^nu = (-pi, pi]^nu with nodes
/// x_j = -pi + 2*pi*j/n per axis (j = 1..n) and constant weight (2pi/n)^nu.
/// The node set is closed under negation mod 2pi, so odd integrands sum
/// to zero exactly and the rule is exact for trig polynomials of
/// per-axis degree < n.
class TorusGrid {
public:
    TorusGrid(int nu, int n);

    int nu() const { return nu_; }
    int n() const { return n_; }
    double weight() const { return weight_; }
    Eigen::Index size() const { return size_; }

    double axis_point(int j) const { return axis_[j]; }
    const std::vector<double>& axis() const { return axis_; }

    /// Unpacks flat node index i (axis 0 fastest) into coordinates.
    void node(Eigen::Index i, std::span<double> out) const;
    std::vector<double> node_vec(Eigen::Index i) const;

private:
    int nu_;
    int n_;
    double weight_;
    Eigen::Index size_;
    std::vector<double> axis_;
};

TorusGrid make_grid(int nu, int n);

/// weight * sum(samples); throws on length mismatch with the node count.
double integrate(const TorusGrid& grid, std::span<const double> samples);
double integrate(const TorusGrid& grid, const Eigen::VectorXd& samples);

/// Compensated (Kahan) summation.
double kahan_sum(std::span<const double> values);

/// wraps each coordinate into (-pi, pi]
std::vector<double> wrap_to_torus(std::span<const double> x);

}  // namespace fockspec

#endif
