#include "klgof/summaries.hpp"

#include <algorithm>
#include <cmath>

#include "klgof/errors.hpp"
#include "klgof/special_math.hpp"

namespace klgof {

MeanStd mean_std(std::span<const double> xs) {
    if (xs.empty()) throw DomainError("mean_std: empty input");
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    if (xs.size() == 1) return {mean, 0.0};
    double ss = 0.0;
    for (double x : xs) {
        const double c = x - mean;
        ss += c * c;
    }
    return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

double upper_order_quantile(std::vector<double> values, double alpha) {
    if (values.empty()) throw DomainError("upper_order_quantile: empty input");
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
        throw DomainError("upper_order_quantile: alpha must lie in (0, 1)");
    }
    const auto b = static_cast<double>(values.size());
    auto index = static_cast<std::int64_t>(std::ceil((1.0 - alpha) * (b + 1.0)));
    index = std::clamp<std::int64_t>(index, 1, values.size());
    std::sort(values.begin(), values.end());
    return values[static_cast<std::size_t>(index - 1)];
}

double ks_distance_standard_normal(std::vector<double> values) {
    if (values.empty()) throw DomainError("ks_distance: empty input");
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double d = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double cdf = normal_cdf(values[i]);
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d = std::max(d, std::max(cdf - lo, hi - cdf));
    }
    return d;
}

LinearFit least_squares(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw DomainError("least_squares: need two or more paired points");
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) throw DomainError("least_squares: degenerate abscissae");
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

}  // namespace klgof
