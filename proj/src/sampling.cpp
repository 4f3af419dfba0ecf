#include "mpts/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace mpts {

double sample_gamma(double shape, Rng& rng) {
    if (!(shape > 0.0)) throw std::invalid_argument("sample_gamma: shape must be positive");
    if (shape < 1.0) {
        const double g = sample_gamma(shape + 1.0, rng);
        return g * std::pow(rng.uniform_open(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform_open();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double sample_beta(double a, double b, Rng& rng) {
    const double x = sample_gamma(a, rng);
    const double y = sample_gamma(b, rng);
    return x / (x + y);
}

}  // namespace mpts
