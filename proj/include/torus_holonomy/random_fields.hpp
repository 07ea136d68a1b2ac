#pragma once

#include <random>

#include "torus_holonomy/observables.hpp"

namespace torus {

/// Real Fourier field with coefficients uniform in [-1, 1] (each non-zero
/// shift present with probability 1/2) and bandwidth at most `bandwidth`.
TorusFourierField random_real_field(int dimension, int bandwidth, std::mt19937_64& rng);

/// a^k and b drawn by random_real_field.
AffineObservable random_affine(int dimension, int bandwidth, std::mt19937_64& rng);

}  // namespace torus
