#ifndef FOCKSPEC_PRESETS_HPP
#define FOCKSPEC_PRESETS_HPP

#include "fockspec/model.hpp"

namespace fockspec {

/// All interactions zero: H is diagonal, sigma(H) = {w0} u range(w1) u range(w2).
ModelSpec decoupled_spec(int nu, double w0 = -2.0);

/// Rank-6 cosine model on T^3: v2(p,q) = sum_i cos(p_i - q_i),
/// w2(p,q) = sum_i (2 - cos p_i - cos q_i), even v1. Band [m, M] = [0, 12].
ModelSpec example_spec_3d();

/// Randomized 1-d spec with strong enough coupling to bind: separable v2,
/// even-free generic trig data. Deterministic in the seed.
ModelSpec toy_spec_1d(unsigned seed);

}  // namespace fockspec

#endif
