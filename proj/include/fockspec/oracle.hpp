#ifndef FOCKSPEC_ORACLE_HPP
#define FOCKSPEC_ORACLE_HPP

#include <vector>

#include <Eigen/Core>

#include "fockspec/model.hpp"
#include "fockspec/spectrum.hpp"

namespace fockspec {

/// Dense symmetric discretization in weighted (orthonormal) coordinates.
/// For the full operator the two-particle block is reduced to the symmetric
/// pair basis (i <= j, off-diagonal pairs carrying 1/sqrt(2)).
struct DiscretizedOperator {
    Eigen::MatrixXd matrix;
    std::vector<Eigen::Index> dims;       // block sizes in the reduced basis
    std::vector<Eigen::Index> full_dims;  // block sizes before symmetry reduction
    int nu = 0;
    int n = 0;
};

DiscretizedOperator discretize_h(const ModelSpec& spec, std::span<const double> p,
                                 const TorusGrid& grid);

/// Full operator; throws when 1 + N + N^2 exceeds the cap.
DiscretizedOperator discretize_H(const ModelSpec& spec, const TorusGrid& grid,
                                 Eigen::Index dim_cap = 5000);

/// Ascending eigenvalues via a dense symmetric eigensolver.
Eigen::VectorXd oracle_eigenvalues(const DiscretizedOperator& op);

struct PairingReport {
    std::vector<std::pair<double, double>> pairs;
    std::vector<double> only_left;
    std::vector<double> only_right;
    double max_distance = 0.0;
    bool count_mismatch = false;
};

/// Pairs two sorted value lists in order; extras on either side are
/// reported and flip the mismatch flag.
PairingReport pair_sorted_values(std::vector<double> left, std::vector<double> right);

/// Fiber eigenvalues vs oracle eigenvalues of the discretized fiber, both
/// restricted to the window and kept off [m(p), M(p)] by `band_margin`.
PairingReport compare_channel(const ModelSpec& spec, std::span<const double> p,
                              const TorusGrid& grid, Interval window, double band_margin = 1e-6);

/// Faddeev roots vs oracle eigenvalues of the discretized full operator,
/// both restricted to the window and kept off the computed channel bands.
PairingReport compare_faddeev(const ModelSpec& spec, const TorusGrid& grid, Interval window,
                              double band_margin = 1e-6);

}  // namespace fockspec

#endif
