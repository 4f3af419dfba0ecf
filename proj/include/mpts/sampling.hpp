#pragma once

#include "mpts/rng.hpp"

namespace mpts {

/// Gamma(shape, 1) variate. Marsaglia-Tsang squeeze for shape >= 1; smaller
/// shapes go through the Gamma(shape + 1) * U^(1/shape) boost.
double sample_gamma(double shape, Rng& rng);

/// Beta(a, b) variate for any real a, b > 0, as X / (X + Y) with independent
/// gamma draws X ~ Gamma(a), Y ~ Gamma(b).
double sample_beta(double a, double b, Rng& rng);

}  // namespace mpts
