#pragma once

namespace klgof {

inline constexpr double kEulerGamma = 0.57721566490153286060651209;

// Digamma function psi(x) for x > 0.
// Absolute error below 1e-12 for x >= 1.
double digamma(double x);

// log Gamma(x) for x > 0.
double log_gamma(double x);

// log of the volume of the unit ball in R^dim,
// log V_m = (m/2) log pi - log Gamma(m/2 + 1), computed entirely in log
// space so it stays finite for dimensions where V_m itself underflows.
double log_unit_ball_volume(int dim);

// Standard normal CDF.
double normal_cdf(double z);

// Inverse standard normal CDF for p in (0, 1).
double normal_quantile(double p);

}  // namespace klgof
