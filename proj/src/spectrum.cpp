#include "fockspec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace fockspec {

namespace {

int joint_dense_n(int dims) {
    if (dims <= 2) return 48;
    if (dims <= 4) return 16;
    return 8;
}

TrigPoly joint_w2(const ModelSpec& spec) {
    TrigPoly joint(2 * spec.nu);
    for (const auto& [g, h] : spec.w2.terms())
        joint += g.lifted(spec.nu, 0).product(h.lifted(spec.nu, spec.nu));
    return joint;
}

}  // namespace

Interval three_particle_branch(const ModelSpec& spec) {
    TrigPoly joint = joint_w2(spec);
    const int n = joint_dense_n(2 * spec.nu);
    return {minimize_trigpoly(joint, n).value, maximize_trigpoly(joint, n).value};
}

Interval default_window(const ModelSpec& spec) {
    Interval band = three_particle_branch(spec);
    double gram_max = 0.0;
    if (spec.v2.has_factor_form() && spec.v2.rank() > 0)
        gram_max = spec.v2.gram().diagonal().maxCoeff();
    else
        for (const auto& [g, h] : spec.v2.terms()) gram_max = std::max(gram_max, g.inner(g));
    const double r = 2.0 * (spec.w1.sup_bound() +
                            spec.v1.sup_bound() * std::pow(2.0 * std::numbers::pi, spec.nu / 2.0) +
                            static_cast<double>(spec.v2.rank()) * gram_max);
    return {band.lo - r, band.hi + r};
}

std::vector<TwoParticleCurvePoint> two_particle_branch(const ModelSpec& spec,
                                                       const TorusGrid& sweep, Interval window,
                                                       const TorusGrid& quad,
                                                       const SweepOptions& opts) {
    SqrtKernel sq = kernel_sqrt(spec.v2);
    const double step = window.length() / std::max(2, opts.scan.scan_points);
    std::vector<TwoParticleCurvePoint> out;
    out.reserve(static_cast<std::size_t>(sweep.size()));
    for (Eigen::Index idx = 0; idx < sweep.size(); ++idx) {
        TwoParticleCurvePoint pt;
        pt.sweep_index = idx;
        pt.p = sweep.node_vec(idx);
        Fiber fiber(spec, sq, quad, pt.p);
        pt.edges = fiber.edges();

        const double band_scale = std::max(1.0, pt.edges.M_p - pt.edges.m_p);
        std::vector<std::pair<double, double>> parts;
        double lo1 = window.lo, hi1 = std::min(window.hi, pt.edges.m_p - opts.clip_margin);
        if (hi1 > lo1) parts.emplace_back(lo1, hi1);
        double lo2 = std::max(window.lo, pt.edges.M_p + opts.clip_margin), hi2 = window.hi;
        if (hi2 > lo2) parts.emplace_back(lo2, hi2);

        for (auto [lo, hi] : parts) {
            RootScanOptions local = opts.scan;
            local.scan_points = std::clamp(static_cast<int>(std::ceil((hi - lo) / step)), 32,
                                           std::max(32, opts.scan.scan_points));
            for (double z : fiber_eigenvalues(fiber, lo, hi, local)) {
                pt.eigenvalues.push_back(z);
                const double d = std::min(std::abs(z - pt.edges.m_p), std::abs(z - pt.edges.M_p));
                pt.near_edge.push_back(d < opts.edge_report_factor * band_scale);
            }
        }
        out.push_back(std::move(pt));
    }
    return out;
}

std::vector<Interval> merge_intervals(std::vector<Interval> intervals, double touch_tol) {
    if (intervals.empty()) return intervals;
    std::sort(intervals.begin(), intervals.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> out;
    out.push_back(intervals.front());
    for (std::size_t i = 1; i < intervals.size(); ++i) {
        if (intervals[i].lo <= out.back().hi + touch_tol)
            out.back().hi = std::max(out.back().hi, intervals[i].hi);
        else
            out.push_back(intervals[i]);
    }
    return out;
}

SpectrumBands essential_spectrum(const ModelSpec& spec, const TorusGrid& sweep, Interval window,
                                 const TorusGrid& quad, const SweepOptions& opts) {
    SpectrumBands bands;
    bands.three_particle = three_particle_branch(spec);
    bands.two_particle = two_particle_branch(spec, sweep, window, quad, opts);
    bands.sweep_n = sweep.n();
    bands.quad_n = quad.n();

    // local curve spacing: how far eigenvalues move between sweep-adjacent
    // fibers (axis-0 neighbors, wrapping around the torus)
    const int n = sweep.n();
    double spacing = 0.0;
    for (Eigen::Index i = 0; i < sweep.size(); ++i) {
        Eigen::Index j = (i % n == n - 1) ? i - (n - 1) : i + 1;
        const auto& a = bands.two_particle[static_cast<std::size_t>(i)].eigenvalues;
        const auto& b = bands.two_particle[static_cast<std::size_t>(j)].eigenvalues;
        if (a.empty() || b.empty()) continue;
        for (double za : a) {
            double nearest = std::abs(za - b.front());
            for (double zb : b) nearest = std::min(nearest, std::abs(za - zb));
            spacing = std::max(spacing, nearest);
        }
    }
    bands.gap_threshold = 2.0 * spacing;

    std::vector<double> samples;
    for (const auto& pt : bands.two_particle)
        samples.insert(samples.end(), pt.eigenvalues.begin(), pt.eigenvalues.end());
    std::sort(samples.begin(), samples.end());

    std::vector<Interval> raw;
    for (std::size_t i = 0; i < samples.size();) {
        std::size_t j = i;
        while (j + 1 < samples.size() && samples[j + 1] - samples[j] <= bands.gap_threshold) ++j;
        raw.push_back({samples[i], samples[j]});
        i = j + 1;
    }
    raw.push_back(bands.three_particle);
    bands.merged = merge_intervals(std::move(raw));
    return bands;
}

MarginEvaluator::MarginEvaluator(const ModelSpec& spec, const TorusGrid& quad,
                                 const TorusGrid& sweep) {
    SqrtKernel sq = kernel_sqrt(spec.v2);
    fibers_.reserve(static_cast<std::size_t>(sweep.size()));
    for (Eigen::Index idx = 0; idx < sweep.size(); ++idx)
        fibers_.emplace_back(spec, sq, quad, sweep.node_vec(idx));
}

MarginReport MarginEvaluator::operator()(double z) const {
    MarginReport rep;
    rep.margin = std::numeric_limits<double>::infinity();
    for (const auto& fiber : fibers_) {
        if (z >= fiber.edges().m_p && z <= fiber.edges().M_p) {
            ++rep.skipped;  // z certified inside the three-particle branch
            continue;
        }
        ++rep.evaluated;
        rep.margin = std::min(rep.margin, fiber.smallest_singular_value(z));
    }
    if (rep.skipped > 0) rep.margin = 0.0;
    if (rep.evaluated == 0 && rep.skipped == 0) rep.margin = 0.0;
    return rep;
}

MarginReport a_invertibility_margin(const ModelSpec& spec, double z, const TorusGrid& quad,
                                    const TorusGrid& sweep) {
    return MarginEvaluator(spec, quad, sweep)(z);
}

}  // namespace fockspec
