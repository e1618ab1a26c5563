#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fockspec/oracle.hpp"
#include "fockspec/presets.hpp"
#include "fockspec/spectrum.hpp"

using namespace fockspec;

TEST_CASE("three-particle branch") {
    CHECK(three_particle_branch(example_spec_3d()).lo == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(three_particle_branch(example_spec_3d()).hi == doctest::Approx(12.0).epsilon(1e-10));

    ModelSpec d1 = decoupled_spec(1);  // w2 = 2 - cos p - cos q
    Interval band = three_particle_branch(d1);
    CHECK(band.lo == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(band.hi == doctest::Approx(4.0).epsilon(1e-10));

    ModelSpec flat = decoupled_spec(1);
    flat.w2 = SeparableKernel::from_pairs(
        {{TrigPoly::constant(1, 1.75), TrigPoly::constant(1, 1.0)}});
    Interval point = three_particle_branch(flat);
    CHECK(point.lo == doctest::Approx(1.75).epsilon(1e-12));
    CHECK(point.hi == doctest::Approx(1.75).epsilon(1e-12));
}

TEST_CASE("two-particle branch: decoupled curve follows w1 where it clears the band") {
    ModelSpec spec = decoupled_spec(1);
    spec.w1 = TrigPoly::constant(1, 4.5);
    spec.w1.add_term({1}, 0.4, 0.0);  // range [4.1, 4.9], above every fiber band
    TorusGrid sweep(1, 8), quad(1, 32);
    auto curves = two_particle_branch(spec, sweep, {4.0, 5.0}, quad);
    REQUIRE(curves.size() == 8);
    for (const auto& pt : curves) {
        REQUIRE(pt.eigenvalues.size() == 1);
        CHECK(pt.eigenvalues[0] == doctest::Approx(spec.w1.eval(pt.p)).epsilon(1e-9));
    }
}

TEST_CASE("two-particle branch: curves inherit coordinate-permutation symmetry") {
    ModelSpec spec = example_spec_3d();
    TorusGrid quad(3, 8);
    SqrtKernel sq = kernel_sqrt(spec.v2);
    std::vector<double> pa{0.5, -1.7, 2.3}, pb{2.3, 0.5, -1.7};
    Fiber fa(spec, sq, quad, pa), fb(spec, sq, quad, pb);
    auto ra = fiber_eigenvalues(fa, -4.0, fa.edges().m_p - 1e-6);
    auto rb = fiber_eigenvalues(fb, -4.0, fb.edges().m_p - 1e-6);
    REQUIRE(!ra.empty());
    REQUIRE(ra.size() == rb.size());
    for (std::size_t i = 0; i < ra.size(); ++i)
        CHECK(ra[i] == doctest::Approx(rb[i]).epsilon(1e-10));
}

TEST_CASE("two-particle branch: single-point sweep equals a direct fiber call") {
    ModelSpec spec = toy_spec_1d(3);
    TorusGrid quad(1, 32);
    TorusGrid sweep(1, 2);
    Interval window{band_edges(spec, std::vector<double>{quad.axis_point(0)}).m_p - 20.0, 50.0};
    auto curves = two_particle_branch(spec, sweep, window, quad);
    for (const auto& pt : curves) {
        BandEdges e = band_edges(spec, pt.p);
        std::vector<double> direct;
        RootScanOptions scan;
        double hi = std::min(window.hi, e.m_p - 1e-6);
        if (hi > window.lo) {
            scan.scan_points = std::clamp(
                static_cast<int>(std::ceil((hi - window.lo) / (window.length() / 400))), 32, 400);
            for (double z : fiber_eigenvalues(spec, pt.p, quad, window.lo, hi, scan))
                direct.push_back(z);
        }
        double lo = std::max(window.lo, e.M_p + 1e-6);
        if (window.hi > lo) {
            scan.scan_points = std::clamp(
                static_cast<int>(std::ceil((window.hi - lo) / (window.length() / 400))), 32, 400);
            for (double z : fiber_eigenvalues(spec, pt.p, quad, lo, window.hi, scan))
                direct.push_back(z);
        }
        std::sort(direct.begin(), direct.end());
        std::vector<double> got = pt.eigenvalues;
        std::sort(got.begin(), got.end());
        REQUIRE(got.size() == direct.size());
        for (std::size_t i = 0; i < direct.size(); ++i)
            CHECK(got[i] == doctest::Approx(direct[i]).epsilon(1e-12));
    }
}

TEST_CASE("essential spectrum: decoupled spec with w1 inside the band") {
    ModelSpec spec = decoupled_spec(1);  // w1 range [1.5, 2.5] inside [0, 4]
    TorusGrid sweep(1, 8), quad(1, 32);
    SpectrumBands bands = essential_spectrum(spec, sweep, {-6.0, 10.0}, quad);
    REQUIRE(bands.merged.size() == 1);
    CHECK(bands.merged[0].lo == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(bands.merged[0].hi == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("essential spectrum: cosine model contains the three-particle interval") {
    ModelSpec spec = example_spec_3d();
    TorusGrid sweep(3, 4), quad(3, 6);
    SpectrumBands bands = essential_spectrum(spec, sweep, {-10.0, 14.0}, quad);
    bool covered = false;
    for (const Interval& band : bands.merged)
        if (band.lo <= 1e-9 && band.hi >= 12.0 - 1e-9) covered = true;
    CHECK(covered);
    // the shallow bound-state curve extends the band below zero
    CHECK(bands.merged.front().lo < -0.5);
}

TEST_CASE("essential spectrum: no sampled eigenvalue escapes under sweep refinement") {
    ModelSpec spec = toy_spec_1d(11);
    TorusGrid quad(1, 32);
    Interval window = {three_particle_branch(spec).lo - 15.0,
                       three_particle_branch(spec).hi + 5.0};
    SpectrumBands coarse = essential_spectrum(spec, TorusGrid(1, 8), window, quad);
    SpectrumBands fine = essential_spectrum(spec, TorusGrid(1, 16), window, quad);
    REQUIRE(!coarse.merged.empty());
    for (const auto& pt : coarse.two_particle)
        for (double z : pt.eigenvalues) {
            bool inside = false;
            for (const Interval& band : fine.merged)
                if (band.contains(z, fine.gap_threshold + 1e-3)) inside = true;
            CHECK(inside);
        }
}

TEST_CASE("band ordering invariant") {
    ModelSpec spec = example_spec_3d();
    Interval global = three_particle_branch(spec);
    TorusGrid sweep(3, 4);
    for (Eigen::Index i = 0; i < sweep.size(); ++i) {
        BandEdges e = band_edges(spec, sweep.node_vec(i));
        CHECK(e.m_p >= global.lo - 1e-10);
        CHECK(e.M_p <= global.hi + 1e-10);
        CHECK(e.m_p <= e.M_p);
    }
}

TEST_CASE("invertibility margin: diagonal case") {
    ModelSpec spec = decoupled_spec(1);
    spec.w1 = TrigPoly::constant(1, 6.0);
    spec.w1.add_term({1}, 0.5, 0.0);  // w1 in [5.5, 6.5], above [m, M] = [0, 4]
    TorusGrid quad(1, 16), sweep(1, 8);
    const double z = 5.2;  // below min w1 over the sweep, above the band
    MarginReport rep = a_invertibility_margin(spec, z, quad, sweep);
    CHECK(rep.skipped == 0);
    double expect = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < sweep.size(); ++i)
        expect = std::min(expect, std::abs(spec.w1.eval(sweep.node_vec(i)) - z));
    CHECK(rep.margin == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("invertibility margin: zero at computed eigenvalues, large in gaps") {
    ModelSpec spec = example_spec_3d();
    TorusGrid quad(3, 6), sweep(3, 4);
    MarginEvaluator margin(spec, quad, sweep);

    SqrtKernel sq = kernel_sqrt(spec.v2);
    Fiber fiber(spec, sq, quad, sweep.node_vec(0));
    auto roots = fiber_eigenvalues(fiber, fiber.edges().m_p - 4.0, fiber.edges().m_p - 1e-6);
    REQUIRE(!roots.empty());
    CHECK(margin(roots[0]).margin < 1e-6);

    // far below everything (including the deep bound-state band near -120)
    // the fibers are uniformly invertible
    Interval band = three_particle_branch(spec);
    MarginReport far = margin(band.lo - 40.0 * (band.hi - band.lo));
    CHECK(far.skipped == 0);
    CHECK(far.margin > 0.1);

    // in the spectral gap between the shallow curve and the deep band
    MarginReport gap = margin(band.lo - (band.hi - band.lo));
    CHECK(gap.margin > 1e-3);

    // inside the three-particle band some fiber certifies z in sigma_three
    MarginReport inside = margin(7.3);
    CHECK(inside.skipped > 0);
    CHECK(inside.margin == 0.0);
}

TEST_CASE("merge_intervals") {
    auto merged = merge_intervals({{0.0, 1.0}, {2.0, 3.0}, {0.5, 2.1}});
    REQUIRE(merged.size() == 1);
    CHECK(merged[0].lo == 0.0);
    CHECK(merged[0].hi == 3.0);

    auto split = merge_intervals({{0.0, 1.0}, {2.0, 3.0}});
    REQUIRE(split.size() == 2);
    CHECK(split[1].lo == 2.0);
}
