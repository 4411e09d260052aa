#pragma once

#include <span>
#include <vector>

namespace klgof {

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;  // sample standard deviation (denominator n-1)
};

MeanStd mean_std(std::span<const double> xs);

// Empirical upper (1-alpha)-quantile as the order statistic at 1-based index
// ceil((1-alpha)(B+1)), clipped to [1, B].
double upper_order_quantile(std::vector<double> values, double alpha);

// Kolmogorov-Smirnov distance between a sample and the standard normal CDF.
double ks_distance_standard_normal(std::vector<double> values);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};

// Ordinary least squares fit y = intercept + slope * x.
LinearFit least_squares(std::span<const double> xs, std::span<const double> ys);

}  // namespace klgof
