#include "fockspec/presets.hpp"

#include <random>

#include "fockspec/spectrum.hpp"

namespace fockspec {

namespace {

TrigPoly sum_of_axis_cos(int nu, double coeff) {
    TrigPoly f(nu);
    for (int d = 0; d < nu; ++d) {
        TrigPoly::Freq k(nu, 0);
        k[d] = 1;
        f.add_term(k, coeff, 0.0);
    }
    return f;
}

}  // namespace

ModelSpec decoupled_spec(int nu, double w0) {
    ModelSpec spec;
    spec.nu = nu;
    spec.w0 = w0;
    spec.w1 = TrigPoly::constant(nu, 2.0) + sum_of_axis_cos(nu, -0.5);
    spec.v0 = TrigPoly(nu);
    spec.v1 = TrigPoly(nu);
    // w2(p,q) = sum_i (2 - cos p_i - cos q_i)
    spec.w2 = SeparableKernel::from_pairs(
        {{TrigPoly::constant(nu, 2.0 * nu) + sum_of_axis_cos(nu, -1.0), TrigPoly::constant(nu, 1.0)},
         {TrigPoly::constant(nu, 1.0), sum_of_axis_cos(nu, -1.0)}});
    spec.v2 = SeparableKernel::zero(nu);
    return spec;
}

ModelSpec example_spec_3d() {
    const int nu = 3;
    ModelSpec spec;
    spec.nu = nu;
    spec.w0 = 0.4;

    spec.v0 = TrigPoly::constant(nu, 0.3);
    spec.v0.add_term({1, 0, 0}, 0.15, 0.0);

    spec.v1 = sum_of_axis_cos(nu, 0.25);
    // one-particle level tracking the fiber band floor m(p) = 3 - sum cos p_i,
    // offset to park a bound state about one unit below every fiber band;
    // the cos-product term keeps permutation symmetry but breaks exact
    // translation of the curves
    spec.w1 = TrigPoly::constant(nu, 3.0 - 1.1) + sum_of_axis_cos(nu, -1.0);
    spec.w1 += 0.1 * (TrigPoly::harmonic(nu, {1, 0, 0}, 1.0, 0.0) *
                      TrigPoly::harmonic(nu, {0, 1, 0}, 1.0, 0.0) *
                      TrigPoly::harmonic(nu, {0, 0, 1}, 1.0, 0.0));

    spec.w2 = SeparableKernel::from_pairs(
        {{TrigPoly::constant(nu, 6.0) + sum_of_axis_cos(nu, -1.0), TrigPoly::constant(nu, 1.0)},
         {TrigPoly::constant(nu, 1.0), sum_of_axis_cos(nu, -1.0)}});

    std::vector<TrigPoly> factors;
    for (int d = 0; d < nu; ++d) {
        TrigPoly::Freq k(nu, 0);
        k[d] = 1;
        factors.push_back(TrigPoly::harmonic(nu, k, 1.0, 0.0));
        factors.push_back(TrigPoly::harmonic(nu, k, 0.0, 1.0));
    }
    spec.v2 = SeparableKernel::from_factors(std::move(factors));
    return spec;
}

ModelSpec toy_spec_1d(unsigned seed) {
    std::mt19937_64 rng(seed);
    auto uni = [&](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    };

    ModelSpec spec;
    spec.nu = 1;

    TrigPoly a(1);
    a.add_term({1}, uni(-1.0, 1.0), uni(-1.0, 1.0));
    a.add_term({2}, uni(-0.4, 0.4), uni(-0.4, 0.4));
    const double c = uni(2.5, 4.0);
    TrigPoly b(1);
    b.add_term({1}, uni(-0.5, 0.5), uni(-0.5, 0.5));
    spec.w2 = SeparableKernel::from_pairs(
        {{TrigPoly::constant(1, c) + a, TrigPoly::constant(1, 1.0)},
         {TrigPoly::constant(1, 1.0), a},
         {b, b}});

    std::vector<TrigPoly> factors;
    TrigPoly phi1(1);
    phi1.add_term({0}, uni(-0.4, 0.4), 0.0);
    phi1.add_term({1}, uni(-1.0, 1.0), uni(-1.0, 1.0));
    factors.push_back(uni(0.6, 1.1) * phi1);
    TrigPoly phi2(1);
    phi2.add_term({1}, uni(-0.8, 0.8), uni(-0.8, 0.8));
    phi2.add_term({2}, uni(-0.8, 0.8), uni(-0.8, 0.8));
    factors.push_back(uni(0.4, 0.9) * phi2);
    spec.v2 = SeparableKernel::from_factors(std::move(factors));

    spec.v1 = TrigPoly::constant(1, uni(-0.3, 0.3));
    spec.v1.add_term({1}, uni(-0.6, 0.6), uni(-0.6, 0.6));

    spec.v0 = TrigPoly::constant(1, uni(-0.4, 0.4));
    spec.v0.add_term({1}, uni(-0.5, 0.5), 0.0);

    // place the one-particle level near the band floor and the vacuum level
    // well below everything, so both sectors produce discrete eigenvalues
    const double m = three_particle_branch(spec).lo;
    spec.w1 = TrigPoly::constant(1, m - uni(0.5, 1.5));
    spec.w1.add_term({1}, uni(-0.5, 0.5), uni(-0.5, 0.5));
    spec.w0 = m - uni(7.0, 10.0);
    return spec;
}

}  // namespace fockspec
