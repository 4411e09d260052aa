#include "klgof/rng.hpp"

#include <cmath>

#include "klgof/errors.hpp"

namespace klgof {

double SeededRng::gamma(double shape, double scale) {
    if (!(shape > 0.0) || !(scale > 0.0)) {
        throw DomainError("gamma: shape and scale must be positive");
    }
    if (shape < 1.0) {
        // Gamma(a) = Gamma(a+1) * U^(1/a)
        const double u = uniform01_open_below();
        return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform01_open_below();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return scale * d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return scale * d * v;
    }
}

}  // namespace klgof
