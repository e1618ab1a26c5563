#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fockspec/torus.hpp"
#include "fockspec/trigpoly.hpp"

using namespace fockspec;

namespace {
constexpr double kPi = std::numbers::pi;

TrigPoly random_poly(int nu, int max_deg, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::uniform_int_distribution<int> deg(-max_deg, max_deg);
    TrigPoly f(nu);
    f.add_term(TrigPoly::Freq(nu, 0), coeff(rng), 0.0);
    for (int t = 0; t < 4; ++t) {
        TrigPoly::Freq k(nu);
        for (int d = 0; d < nu; ++d) k[d] = deg(rng);
        f.add_term(k, coeff(rng), coeff(rng));
    }
    return f;
}
}  // namespace

TEST_CASE("grid construction matches the (-pi, pi] convention") {
    TorusGrid g = make_grid(1, 4);
    REQUIRE(g.size() == 4);
    CHECK(g.axis_point(0) == doctest::Approx(-kPi / 2).epsilon(1e-15));
    CHECK(g.axis_point(1) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(g.axis_point(2) == doctest::Approx(kPi / 2).epsilon(1e-15));
    CHECK(g.axis_point(3) == doctest::Approx(kPi).epsilon(1e-15));
    CHECK(g.weight() == doctest::Approx(kPi / 2).epsilon(1e-15));

    TorusGrid g2 = make_grid(2, 2);
    CHECK(g2.size() == 4);
    CHECK(g2.weight() == doctest::Approx(kPi * kPi));
    CHECK(4.0 * g2.weight() == doctest::Approx(std::pow(2 * kPi, 2)));

    TorusGrid g3 = make_grid(3, 8);
    CHECK(g3.size() == 512);
    CHECK(512.0 * g3.weight() == doctest::Approx(std::pow(2 * kPi, 3)).epsilon(1e-14));
}

TEST_CASE("degenerate grids are rejected") {
    CHECK_THROWS_AS(make_grid(0, 4), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(-2, 8), std::invalid_argument);
}

TEST_CASE("integrate: rectangle rule on node samples") {
    TorusGrid g = make_grid(1, 4);
    std::vector<double> ones(4, 1.0);
    CHECK(integrate(g, ones) == doctest::Approx(2 * kPi).epsilon(1e-15));

    std::vector<double> cosx(4);
    for (int j = 0; j < 4; ++j) cosx[j] = std::cos(g.axis_point(j));
    CHECK(integrate(g, cosx) == doctest::Approx(0.0).epsilon(1e-15));

    TorusGrid g8 = make_grid(1, 8);
    std::vector<double> cos2(8);
    for (int j = 0; j < 8; ++j) cos2[j] = std::pow(std::cos(g8.axis_point(j)), 2);
    CHECK(integrate(g8, cos2) == doctest::Approx(kPi).epsilon(1e-14));

    CHECK_THROWS_AS(integrate(g, cos2), std::invalid_argument);
}

TEST_CASE("trig polynomial evaluation") {
    TrigPoly f = TrigPoly::harmonic(1, {1}, 1.0, 0.0);
    std::vector<double> zero{0.0};
    CHECK(f.eval(zero) == doctest::Approx(1.0));

    TrigPoly g(3);
    for (int d = 0; d < 3; ++d) {
        TrigPoly::Freq k(3, 0);
        k[d] = 1;
        g.add_term(k, 1.0, 0.0);
    }
    std::vector<double> pi3{kPi, kPi, kPi};
    CHECK(g.eval(pi3) == doctest::Approx(-3.0).epsilon(1e-14));

    TrigPoly z(2);
    std::vector<double> x{0.3, -0.7};
    CHECK(z.eval(x) == 0.0);

    CHECK_THROWS_AS(f.eval(x), std::invalid_argument);
}

TEST_CASE("quadrature is exact for trig polynomials below the grid degree") {
    std::mt19937_64 rng(7);
    for (int nu : {1, 2, 3}) {
        int n = nu == 3 ? 8 : 16;
        TorusGrid g(nu, n);
        for (int rep = 0; rep < 5; ++rep) {
            TrigPoly f = random_poly(nu, 3, rng);
            double exact = f.integral();
            double quad = integrate(g, f.eval_on_grid(g));
            CHECK(quad == doctest::Approx(exact).epsilon(1e-12));
        }
    }
}

TEST_CASE("grid refinement does not change degree-bounded integrals") {
    std::mt19937_64 rng(13);
    TrigPoly f = random_poly(2, 4, rng);
    TorusGrid g1(2, 12), g2(2, 24);
    double a = integrate(g1, f.eval_on_grid(g1));
    double b = integrate(g2, f.eval_on_grid(g2));
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("translation invariance for grid-multiple shifts") {
    std::mt19937_64 rng(29);
    TrigPoly f = random_poly(1, 3, rng);
    TorusGrid g(1, 12);
    std::vector<double> shift{2 * kPi * 3 / 12};
    double direct = integrate(g, f.eval_on_grid(g));
    double shifted = integrate(g, f.shifted(shift).eval_on_grid(g));
    CHECK(direct == doctest::Approx(shifted).epsilon(1e-12));
}

TEST_CASE("eval_on_grid agrees with pointwise evaluation") {
    std::mt19937_64 rng(31);
    TrigPoly f = random_poly(3, 2, rng);
    TorusGrid g(3, 4);
    Eigen::VectorXd vals = f.eval_on_grid(g);
    for (Eigen::Index i = 0; i < g.size(); ++i) {
        auto x = g.node_vec(i);
        CHECK(vals(i) == doctest::Approx(f.eval(x)).epsilon(1e-13));
    }
}

TEST_CASE("exact product and inner products") {
    std::mt19937_64 rng(37);
    TrigPoly f = random_poly(2, 2, rng), g = random_poly(2, 2, rng);
    TorusGrid grid(2, 16);
    double via_product = f.inner(g);
    double via_quadrature =
        integrate(grid, (f.eval_on_grid(grid).array() * g.eval_on_grid(grid).array()).matrix());
    CHECK(via_product == doctest::Approx(via_quadrature).epsilon(1e-12));

    // cos^2 x integrates to pi on the circle
    TrigPoly c = TrigPoly::harmonic(1, {1}, 1.0, 0.0);
    CHECK(c.inner(c) == doctest::Approx(kPi).epsilon(1e-14));
}

TEST_CASE("parity and reflection") {
    TrigPoly f(1);
    f.add_term({1}, 0.5, 0.0);
    CHECK(f.is_even());
    f.add_term({2}, 0.0, 0.25);
    CHECK_FALSE(f.is_even());

    TrigPoly g = f.reflected(0);
    std::vector<double> x{0.4};
    std::vector<double> mx{-0.4};
    CHECK(g.eval(x) == doctest::Approx(f.eval(mx)).epsilon(1e-14));
}

TEST_CASE("extremum search on a known landscape") {
    // f(x, y) = 2 - cos x - cos y: min 0 at origin, max 4 at (pi, pi)
    TrigPoly f = TrigPoly::constant(2, 2.0);
    f.add_term({1, 0}, -1.0, 0.0);
    f.add_term({0, 1}, -1.0, 0.0);
    auto mn = minimize_trigpoly(f, 16);
    auto mx = maximize_trigpoly(f, 16);
    CHECK(mn.value == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(mx.value == doctest::Approx(4.0).epsilon(1e-12));

    // shifted anisotropic landscape, off-grid optimum
    TrigPoly h = TrigPoly::constant(2, 0.0);
    h.add_term({1, 0}, -0.8, 0.6);
    h.add_term({0, 1}, 0.3, -0.9);
    h.add_term({1, 1}, 0.2, 0.1);
    auto hm = minimize_trigpoly(h, 24);
    // compare against a brute-force fine grid
    TorusGrid fine(2, 400);
    double brute = h.eval_on_grid(fine).minCoeff();
    CHECK(hm.value <= brute + 1e-10);
}

TEST_CASE("wrap_to_torus maps into (-pi, pi]") {
    std::vector<double> x{3 * kPi, -kPi, 0.5};
    auto y = wrap_to_torus(x);
    CHECK(y[0] == doctest::Approx(kPi));
    CHECK(y[1] == doctest::Approx(kPi));
    CHECK(y[2] == doctest::Approx(0.5));
    for (double c : y) {
        CHECK(c <= kPi + 1e-15);
        CHECK(c > -kPi - 1e-15);
    }
}
