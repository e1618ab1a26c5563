#ifndef FOCKSPEC_SPECTRUM_HPP
#define FOCKSPEC_SPECTRUM_HPP

#include <vector>

#include "fockspec/friedrichs.hpp"
#include "fockspec/model.hpp"

namespace fockspec {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double z, double margin = 0.0) const { return z >= lo - margin && z <= hi + margin; }
    double length() const { return hi - lo; }
};

/// [m, M]: the range of w2 over (T^nu)^2.
Interval three_particle_branch(const ModelSpec& spec);

/// Default search window [m - R, M + R] with the documented crude
/// operator-norm bound R = 2 (max|w1| + |v1|_inf (2pi)^{nu/2} + r max_k int phi_k^2).
Interval default_window(const ModelSpec& spec);

struct TwoParticleCurvePoint {
    Eigen::Index sweep_index = 0;
    std::vector<double> p;
    BandEdges edges;
    std::vector<double> eigenvalues;
    std::vector<bool> near_edge;
};

struct SweepOptions {
    RootScanOptions scan{};
    double clip_margin = 1e-6;        // keeps fiber windows off [m(p), M(p)]
    double edge_report_factor = 1e-4; // near-edge flag distance, relative to band width
};

/// Fiber eigenvalue curves over a p-sweep; per-fiber windows are clipped
/// around that fiber's band.
std::vector<TwoParticleCurvePoint> two_particle_branch(const ModelSpec& spec,
                                                       const TorusGrid& sweep, Interval window,
                                                       const TorusGrid& quad,
                                                       const SweepOptions& opts = {});

struct SpectrumBands {
    Interval three_particle;
    std::vector<TwoParticleCurvePoint> two_particle;
    std::vector<Interval> merged;
    double gap_threshold = 0.0;  // sample-merge threshold actually used
    int sweep_n = 0;
    int quad_n = 0;
};

/// Union of the three-particle interval with interval hulls of the sampled
/// two-particle curves; adjacent samples closer than twice the local curve
/// spacing merge into one interval.
SpectrumBands essential_spectrum(const ModelSpec& spec, const TorusGrid& sweep, Interval window,
                                 const TorusGrid& quad, const SweepOptions& opts = {});

struct MarginReport {
    double margin = 0.0;
    Eigen::Index evaluated = 0;
    Eigen::Index skipped = 0;  // fibers with z inside [m(p), M(p)]
};

/// Reusable sweep of fibers for invertibility margins of E + A0(.; z).
class MarginEvaluator {
public:
    MarginEvaluator(const ModelSpec& spec, const TorusGrid& quad, const TorusGrid& sweep);
    /// min over sweep fibers of the smallest singular value; fibers whose
    /// band contains z are skipped and force a zero margin (z is then
    /// already inside the three-particle branch).
    MarginReport operator()(double z) const;

private:
    std::vector<Fiber> fibers_;
};

MarginReport a_invertibility_margin(const ModelSpec& spec, double z, const TorusGrid& quad,
                                    const TorusGrid& sweep);

/// Disjoint sorted union of intervals.
std::vector<Interval> merge_intervals(std::vector<Interval> intervals, double touch_tol = 0.0);

}  // namespace fockspec

#endif
