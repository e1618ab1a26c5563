#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

#include "fockspec/friedrichs.hpp"
#include "fockspec/oracle.hpp"
#include "fockspec/presets.hpp"

using namespace fockspec;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("band edges of the cosine example") {
    ModelSpec spec = example_spec_3d();
    std::vector<double> p0{0, 0, 0};
    BandEdges e0 = band_edges(spec, p0);
    CHECK(e0.m_p == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(e0.M_p == doctest::Approx(6.0).epsilon(1e-10));

    std::vector<double> ppi{kPi, kPi, kPi};
    BandEdges epi = band_edges(spec, ppi);
    CHECK(epi.m_p == doctest::Approx(6.0).epsilon(1e-10));
    CHECK(epi.M_p == doctest::Approx(12.0).epsilon(1e-10));
}

TEST_CASE("band edges in one dimension") {
    ModelSpec spec = decoupled_spec(1);  // w2 = 2 - cos p - cos q
    std::vector<double> p0{0.0};
    BandEdges e = band_edges(spec, p0);
    CHECK(e.m_p == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(e.M_p == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("interaction-free assembly and determinant") {
    ModelSpec spec = decoupled_spec(1);
    TorusGrid g(1, 16);
    std::vector<double> p{g.axis_point(3)};
    const double w1p = spec.w1.eval(p);
    BandEdges e = band_edges(spec, p);
    const double z = e.m_p - 1.0;

    Eigen::MatrixXd a0 = assemble_A0(spec, p, z, g);
    CHECK(a0(0, 0) == doctest::Approx(w1p - z - 1.0).epsilon(1e-13));
    a0(0, 0) = 0.0;
    CHECK(a0.cwiseAbs().maxCoeff() < 1e-14);

    FiberDeterminant det = det_E_plus_A0(spec, p, z, g);
    CHECK(det.value == doctest::Approx(w1p - z).epsilon(1e-13));
    CHECK_FALSE(det.delta_values.has_value());
}

TEST_CASE("complex assembly succeeds off the real axis") {
    ModelSpec spec = example_spec_3d();
    TorusGrid g(3, 4);
    std::vector<double> p{0.5, -0.5, 1.0};
    std::complex<double> z{1.0, 1.0};
    Eigen::MatrixXcd a0 = assemble_A0(spec, p, z, g);
    CHECK(a0.allFinite());
    CHECK(a0.imag().cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("determinant is real for real z off the band") {
    ModelSpec spec = example_spec_3d();
    TorusGrid g(3, 4);
    SqrtKernel sq = kernel_sqrt(spec.v2);
    std::vector<double> p{0.7, 0.1, -1.3};
    Fiber fiber(spec, sq, g, p);
    const double z = fiber.edges().m_p - 0.7;
    std::complex<double> dc = fiber.det(std::complex<double>(z, 0.0));
    CHECK(std::abs(dc.imag()) <= 1e-12 * std::abs(dc));
    CHECK(dc.real() == doctest::Approx(fiber.det(z)).epsilon(1e-12));
}

TEST_CASE("dense and reduced determinants agree to rounding") {
    ModelSpec spec3 = example_spec_3d();
    TorusGrid g3(3, 6);
    SqrtKernel sq3 = kernel_sqrt(spec3.v2);
    std::vector<double> p3{0.3, 1.9, -2.4};
    Fiber f3(spec3, sq3, g3, p3);
    for (double off : {0.4, 1.3, 3.7}) {
        double z = f3.edges().m_p - off;
        CHECK(f3.det(z) == doctest::Approx(f3.dense_det(z)).epsilon(1e-11));
    }

    ModelSpec spec1 = toy_spec_1d(4242);
    TorusGrid g1(1, 32);
    SqrtKernel sq1 = kernel_sqrt(spec1.v2);
    std::vector<double> p1{-0.9};
    Fiber f1(spec1, sq1, g1, p1);
    for (double off : {0.8, 2.5, 9.0}) {
        double z = f1.edges().m_p - off;
        CHECK(f1.det(z) == doctest::Approx(f1.dense_det(z)).epsilon(1e-11));
    }
}

TEST_CASE("determinant approaches w1(p) - z far below the band") {
    ModelSpec spec = example_spec_3d();
    TorusGrid g(3, 6);
    std::vector<double> p{0.2, -0.8, 1.4};
    const double z = -1e6;
    FiberDeterminant det = det_E_plus_A0(spec, p, z, g, DetMethod::Reduced);
    CHECK(det.value == doctest::Approx(spec.w1.eval(p) - z).epsilon(1e-3));
}

TEST_CASE("cosine family detection") {
    CHECK(separable_delta_applicable(example_spec_3d()));
    ModelSpec odd_v1 = example_spec_3d();
    odd_v1.v1.add_term({1, 0, 0}, 0.0, 0.3);  // odd part
    CHECK_FALSE(separable_delta_applicable(odd_v1));
    CHECK_FALSE(separable_delta_applicable(toy_spec_1d(1)));
    ModelSpec scaled = example_spec_3d();
    scaled.v2 = SeparableKernel::from_factors(
        {TrigPoly::harmonic(3, {1, 0, 0}, 1.3, 0.0), TrigPoly::harmonic(3, {1, 0, 0}, 0.0, 1.3),
         TrigPoly::harmonic(3, {0, 1, 0}, 1.3, 0.0), TrigPoly::harmonic(3, {0, 1, 0}, 0.0, 1.3),
         TrigPoly::harmonic(3, {0, 0, 1}, 1.3, 0.0), TrigPoly::harmonic(3, {0, 0, 1}, 0.0, 1.3)});
    CHECK_FALSE(separable_delta_applicable(scaled));
    CHECK_THROWS_AS(
        separable_delta_factors(scaled, std::vector<double>{0, 0, 0}, -1.0, TorusGrid(3, 4)),
        std::invalid_argument);
}

TEST_CASE("delta factors: permutation symmetry at the symmetric fiber") {
    ModelSpec spec = example_spec_3d();
    TorusGrid g(3, 8);
    std::vector<double> p{kPi, kPi, kPi};
    auto d = separable_delta_factors(spec, p, 5.0, g);  // z = m(p) - 1
    CHECK(d[0] == doctest::Approx(d[1]).epsilon(1e-13));
    CHECK(d[1] == doctest::Approx(d[2]).epsilon(1e-13));
}

TEST_CASE("delta factors: v1 = 0 reduces the bordered determinant") {
    ModelSpec spec = example_spec_3d();
    spec.v1 = TrigPoly(3);
    TorusGrid g(3, 8);
    std::vector<double> p{0.4, 0.4, -0.9};
    BandEdges e = band_edges(spec, p);
    const double z = e.m_p - 1.2;
    auto d = separable_delta_factors(spec, p, z, g);

    // Delta_4 = (w1(p) - z) * det(cosine block)
    const double w = g.weight();
    Eigen::VectorXd invden = (spec.w2.fix_first(p).eval_on_grid(g).array() - z).inverse().matrix();
    Eigen::Matrix3d block;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            TrigPoly::Freq ki(3, 0), kj(3, 0);
            ki[i] = 1;
            kj[j] = 1;
            double mom = w * (TrigPoly::harmonic(3, ki, 1.0, 0.0).eval_on_grid(g).array() *
                              TrigPoly::harmonic(3, kj, 1.0, 0.0).eval_on_grid(g).array() *
                              invden.array())
                                 .sum();
            block(i, j) = (i == j ? 1.0 : 0.0) - mom;
        }
    CHECK(d[3] == doctest::Approx((spec.w1.eval(p) - z) * block.determinant()).epsilon(1e-12));
}

TEST_CASE("delta factors approach their free limits far below the band") {
    ModelSpec spec = example_spec_3d();
    TorusGrid g(3, 8);
    std::vector<double> p{0.0, 0.0, 0.0};
    const double z = -1e9;  // the moments decay like 1/|z|
    auto d = separable_delta_factors(spec, p, z, g);
    CHECK(d[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(d[1] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(d[2] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(d[3] == doctest::Approx(spec.w1.eval(p) - z).epsilon(1e-6));
}

TEST_CASE("Nystrom determinant equals the delta product for the cosine family") {
    ModelSpec spec = example_spec_3d();
    TorusGrid g(3, 8);
    for (auto pv : {std::vector<double>{0, 0, 0}, std::vector<double>{1.2, -0.8, 2.9}}) {
        BandEdges e = band_edges(spec, pv);
        for (double off : {0.5, 1.0, 2.0}) {
            const double z = e.m_p - off;
            FiberDeterminant det = det_E_plus_A0(spec, pv, z, g, DetMethod::Dense);
            REQUIRE(det.delta_values.has_value());
            const auto& d = *det.delta_values;
            CHECK(det.value == doctest::Approx(d[0] * d[1] * d[2] * d[3]).epsilon(1e-10));
        }
    }
}

TEST_CASE("fiber eigenvalues: interaction-free case returns exactly w1(p)") {
    ModelSpec spec = decoupled_spec(1);
    spec.w1 = TrigPoly::constant(1, 5.5);  // above every fiber band of w2
    TorusGrid g(1, 16);
    std::vector<double> p{g.axis_point(0)};
    BandEdges e = band_edges(spec, p);
    const double w1p = spec.w1.eval(p);
    REQUIRE(w1p > e.M_p);
    auto roots = fiber_eigenvalues(spec, p, g, e.M_p + 1e-3, e.M_p + 3.0);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0] == doctest::Approx(w1p).epsilon(1e-10));
}

TEST_CASE("fiber eigenvalues match the discretized-operator oracle") {
    ModelSpec spec = example_spec_3d();
    TorusGrid g(3, 8);
    std::vector<double> p{0, 0, 0};
    auto roots = fiber_eigenvalues(spec, p, g, -10.0, -1e-6);

    Eigen::VectorXd eigs = oracle_eigenvalues(discretize_h(spec, p, g));
    std::vector<double> oracle;
    for (Eigen::Index i = 0; i < eigs.size(); ++i)
        if (eigs(i) > -10.0 && eigs(i) < -1e-6) oracle.push_back(eigs(i));

    REQUIRE(!roots.empty());
    REQUIRE(roots.size() == oracle.size());
    for (std::size_t i = 0; i < roots.size(); ++i)
        CHECK(roots[i] == doctest::Approx(oracle[i]).epsilon(1e-6));
}

TEST_CASE("empty window produces no spurious roots") {
    ModelSpec spec = example_spec_3d();
    TorusGrid g(3, 6);
    std::vector<double> p{0, 0, 0};
    // nothing lives between the shallow bound state and the band
    auto roots = fiber_eigenvalues(spec, p, g, -0.5, -1e-6);
    CHECK(roots.empty());
}

TEST_CASE("window intersecting the band is rejected") {
    ModelSpec spec = example_spec_3d();
    TorusGrid g(3, 4);
    std::vector<double> p{0, 0, 0};
    CHECK_THROWS_AS(fiber_eigenvalues(spec, p, g, -1.0, 1.0), std::domain_error);
}

TEST_CASE("grid convergence of sub-band roots") {
    // spectral quadrature accuracy: roots with a healthy distance from the
    // band edge stop moving once the rule resolves the resolvent kernel
    ModelSpec spec1 = toy_spec_1d(77);
    std::vector<double> p{0.6};
    BandEdges e = band_edges(spec1, p);
    TorusGrid a(1, 16), b(1, 32);
    auto ra = fiber_eigenvalues(spec1, p, a, e.m_p - 25.0, e.m_p - 2.0);
    auto rb = fiber_eigenvalues(spec1, p, b, e.m_p - 25.0, e.m_p - 2.0);
    REQUIRE(!ra.empty());
    REQUIRE(ra.size() == rb.size());
    for (std::size_t i = 0; i < ra.size(); ++i) CHECK(std::abs(ra[i] - rb[i]) < 1e-8);

    ModelSpec spec3 = example_spec_3d();
    std::vector<double> p3{0, 0, 0};
    TorusGrid a3(3, 8), b3(3, 16);
    auto ra3 = fiber_eigenvalues(spec3, p3, a3, -125.0, -115.0);
    auto rb3 = fiber_eigenvalues(spec3, p3, b3, -125.0, -115.0);
    REQUIRE(!ra3.empty());
    REQUIRE(ra3.size() == rb3.size());
    for (std::size_t i = 0; i < ra3.size(); ++i) CHECK(std::abs(ra3[i] - rb3[i]) < 1e-8);
}

TEST_CASE("reconstruct fiber eigenvector: interaction-free limit") {
    ModelSpec spec = decoupled_spec(1);
    spec.w1 = TrigPoly::constant(1, 5.5);
    TorusGrid g(1, 16);
    std::vector<double> p{g.axis_point(0)};
    const double z = spec.w1.eval(p);
    FiberEigenvector vec = reconstruct_fiber_eigenvector(spec, p, z, g);
    CHECK(vec.f0 == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(vec.f1.cwiseAbs().maxCoeff() < 1e-8);
    CHECK(vec.residual < 1e-10);
}

TEST_CASE("reconstruct fiber eigenvector: bound state of the cosine model") {
    ModelSpec spec = example_spec_3d();
    TorusGrid g(3, 8);
    std::vector<double> p{0, 0, 0};
    auto roots = fiber_eigenvalues(spec, p, g, -3.0, -0.2);
    REQUIRE(roots.size() == 1);
    FiberEigenvector vec = reconstruct_fiber_eigenvector(spec, p, roots[0], g);
    CHECK(vec.residual < 1e-6);
    // unit weighted norm
    const double norm = vec.f0 * vec.f0 + g.weight() * vec.f1.squaredNorm();
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("reconstruction rejects non-roots") {
    ModelSpec spec = example_spec_3d();
    TorusGrid g(3, 6);
    std::vector<double> p{0, 0, 0};
    CHECK_THROWS_AS(reconstruct_fiber_eigenvector(spec, p, -4.7, g), std::runtime_error);
}
