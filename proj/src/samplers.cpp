#include "klgof/samplers.hpp"

#include <cmath>
#include <vector>

#include "klgof/errors.hpp"
#include "klgof/special_math.hpp"

namespace klgof {

std::string family_name(Family family) {
    switch (family) {
        case Family::Gaussian: return "gaussian";
        case Family::GeneralizedGaussian: return "gg";
        case Family::StudentT: return "student_t";
    }
    return "unknown";
}

PointSet sample_gaussian(const GaussianModel& model, std::int64_t n,
                         SeededRng& rng) {
    if (n < 1) throw DomainError("sample_gaussian: need n >= 1");
    const int m = model.dim();
    const std::vector<double>& chol = model.chol_lower();
    const std::vector<double>& mean = model.mean();
    std::vector<double> data(static_cast<std::size_t>(n) * m);
    std::vector<double> z(static_cast<std::size_t>(m));
    for (std::int64_t i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) z[j] = rng.normal();
        for (int r = 0; r < m; ++r) {
            double v = mean[r];
            for (int c = 0; c <= r; ++c) v += chol[r * m + c] * z[c];
            data[i * m + r] = v;
        }
    }
    return {std::move(data), n, m};
}

PointSet sample_generalized_gaussian(int dim, double s, std::int64_t n,
                                     bool standardize, SeededRng& rng) {
    if (dim < 1) throw DomainError("sample_generalized_gaussian: dim must be >= 1");
    if (!(s > 0.0)) throw DomainError("sample_generalized_gaussian: s must be > 0");
    if (n < 1) throw DomainError("sample_generalized_gaussian: need n >= 1");
    const double m = static_cast<double>(dim);
    const double tau = s;  // scale of exp(-r^s / tau)

    // Per-coordinate variance E[R^2]/m with R^s ~ Gamma(m/s, tau):
    //   E[R^2] = tau^(2/s) Gamma((m+2)/s) / Gamma(m/s)
    double rescale = 1.0;
    if (standardize) {
        const double log_var =
            (2.0 / s) * std::log(tau) + log_gamma((m + 2.0) / s) -
            log_gamma(m / s) - std::log(m);
        rescale = std::exp(-0.5 * log_var);
    }

    std::vector<double> data(static_cast<std::size_t>(n) * dim);
    std::vector<double> z(static_cast<std::size_t>(dim));
    for (std::int64_t i = 0; i < n; ++i) {
        double norm_sq;
        do {
            norm_sq = 0.0;
            for (int j = 0; j < dim; ++j) {
                z[j] = rng.normal();
                norm_sq += z[j] * z[j];
            }
        } while (norm_sq == 0.0);
        const double radius = std::pow(rng.gamma(m / s, tau), 1.0 / s);
        const double factor = rescale * radius / std::sqrt(norm_sq);
        for (int j = 0; j < dim; ++j) {
            data[i * dim + j] = factor * z[j];
        }
    }
    return {std::move(data), n, dim};
}

PointSet sample_student_t(int dim, double nu, std::int64_t n, bool standardize,
                          SeededRng& rng) {
    if (dim < 1) throw DomainError("sample_student_t: dim must be >= 1");
    if (!(nu > 0.0)) throw DomainError("sample_student_t: nu must be > 0");
    if (standardize && !(nu > 2.0)) {
        throw DomainError("sample_student_t: standardization requires nu > 2");
    }
    if (n < 1) throw DomainError("sample_student_t: need n >= 1");
    const double rescale = standardize ? std::sqrt((nu - 2.0) / nu) : 1.0;
    std::vector<double> data(static_cast<std::size_t>(n) * dim);
    for (std::int64_t i = 0; i < n; ++i) {
        const double w = rng.chi_square(nu);
        const double factor = rescale * std::sqrt(nu / w);
        for (int j = 0; j < dim; ++j) {
            data[i * dim + j] = factor * rng.normal();
        }
    }
    return {std::move(data), n, dim};
}

PointSet sample_alternative(const AlternativeSpec& alt, std::int64_t n,
                            SeededRng& rng) {
    switch (alt.family) {
        case Family::Gaussian:
            return sample_gaussian(GaussianModel::standard(alt.dim), n, rng);
        case Family::GeneralizedGaussian:
            return sample_generalized_gaussian(alt.dim, alt.shape, n,
                                               alt.standardize, rng);
        case Family::StudentT:
            return sample_student_t(alt.dim, alt.shape, n, alt.standardize, rng);
    }
    throw DomainError("sample_alternative: unknown family");
}

}  // namespace klgof
