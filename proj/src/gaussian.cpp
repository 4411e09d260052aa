#include "klgof/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "klgof/errors.hpp"

namespace klgof {
namespace {

// Row-major lower-triangular inverse of L (forward substitution).
std::vector<double> invert_lower(const std::vector<double>& chol, int m) {
    std::vector<double> inv(static_cast<std::size_t>(m) * m, 0.0);
    for (int col = 0; col < m; ++col) {
        inv[col * m + col] = 1.0 / chol[col * m + col];
        for (int row = col + 1; row < m; ++row) {
            double s = 0.0;
            for (int t = col; t < row; ++t) {
                s += chol[row * m + t] * inv[t * m + col];
            }
            inv[row * m + col] = -s / chol[row * m + row];
        }
    }
    return inv;
}

}  // namespace

GaussianModel::GaussianModel(std::vector<double> mean, std::vector<double> cov)
    : mean_(std::move(mean)), cov_(std::move(cov)) {
    dim_ = static_cast<int>(mean_.size());
    if (dim_ < 1) throw DomainError("GaussianModel: dimension must be >= 1");
    if (cov_.size() != static_cast<std::size_t>(dim_) * dim_) {
        throw DomainError("GaussianModel: covariance size does not match dimension");
    }
    double trace = 0.0;
    for (int i = 0; i < dim_; ++i) {
        trace += cov_[i * dim_ + i];
        for (int j = 0; j < i; ++j) {
            const double a = cov_[i * dim_ + j];
            const double b = cov_[j * dim_ + i];
            if (std::abs(a - b) > 1e-10 * std::max(1.0, std::abs(a) + std::abs(b))) {
                throw DomainError("GaussianModel: covariance is not symmetric");
            }
        }
    }

    // Lower Cholesky with a relative pivot floor.
    const double pivot_floor = 1e-12 * trace / dim_;
    chol_.assign(static_cast<std::size_t>(dim_) * dim_, 0.0);
    log_det_ = 0.0;
    for (int row = 0; row < dim_; ++row) {
        for (int col = 0; col <= row; ++col) {
            double s = cov_[row * dim_ + col];
            for (int t = 0; t < col; ++t) {
                s -= chol_[row * dim_ + t] * chol_[col * dim_ + t];
            }
            if (row == col) {
                if (!(s > pivot_floor)) {
                    throw SingularCovarianceError(
                        "GaussianModel: covariance is not positive definite");
                }
                chol_[row * dim_ + col] = std::sqrt(s);
                log_det_ += 2.0 * std::log(chol_[row * dim_ + col]);
            } else {
                chol_[row * dim_ + col] = s / chol_[col * dim_ + col];
            }
        }
    }
}

GaussianModel GaussianModel::standard(int dim) {
    if (dim < 1) throw DomainError("GaussianModel: dimension must be >= 1");
    std::vector<double> mean(static_cast<std::size_t>(dim), 0.0);
    std::vector<double> cov(static_cast<std::size_t>(dim) * dim, 0.0);
    for (int i = 0; i < dim; ++i) cov[i * dim + i] = 1.0;
    return {std::move(mean), std::move(cov)};
}

GaussianModel fit_gaussian(const PointSet& sample) {
    const std::int64_t n = sample.size();
    const int m = sample.dim();
    if (n < m + 1) {
        throw SingularCovarianceError(
            "fit_gaussian: need at least dim+1 observations");
    }
    std::vector<double> mean(static_cast<std::size_t>(m), 0.0);
    for (std::int64_t i = 0; i < n; ++i) {
        const double* row = sample.row(i);
        for (int j = 0; j < m; ++j) mean[j] += row[j];
    }
    for (int j = 0; j < m; ++j) mean[j] /= static_cast<double>(n);

    std::vector<double> cov(static_cast<std::size_t>(m) * m, 0.0);
    std::vector<double> centered(static_cast<std::size_t>(m));
    for (std::int64_t i = 0; i < n; ++i) {
        const double* row = sample.row(i);
        for (int j = 0; j < m; ++j) centered[j] = row[j] - mean[j];
        for (int r = 0; r < m; ++r) {
            for (int c = 0; c <= r; ++c) {
                cov[r * m + c] += centered[r] * centered[c];
            }
        }
    }
    const double denom = static_cast<double>(n - 1);
    for (int r = 0; r < m; ++r) {
        for (int c = 0; c <= r; ++c) {
            cov[r * m + c] /= denom;
            cov[c * m + r] = cov[r * m + c];
        }
    }
    return {std::move(mean), std::move(cov)};
}

double gaussian_entropy(double cov_log_det, int dim) {
    if (dim < 1) throw DomainError("gaussian_entropy: dimension must be >= 1");
    const double log_two_pi_e = std::log(2.0 * std::numbers::pi) + 1.0;
    return 0.5 * (dim * log_two_pi_e + cov_log_det);
}

double gaussian_kl_closed_form(const GaussianModel& f, const GaussianModel& g) {
    if (f.dim() != g.dim()) {
        throw DimensionMismatchError("gaussian_kl_closed_form: dimension mismatch");
    }
    const int m = f.dim();
    const std::vector<double> linv = invert_lower(g.chol_lower(), m);

    // Sigma_g^{-1} = L^{-T} L^{-1}
    std::vector<double> ginv(static_cast<std::size_t>(m) * m, 0.0);
    for (int r = 0; r < m; ++r) {
        for (int c = 0; c < m; ++c) {
            double s = 0.0;
            for (int t = std::max(r, c); t < m; ++t) {
                s += linv[t * m + r] * linv[t * m + c];
            }
            ginv[r * m + c] = s;
        }
    }

    double trace_term = 0.0;
    for (int r = 0; r < m; ++r) {
        for (int c = 0; c < m; ++c) {
            trace_term += ginv[r * m + c] * f.cov()[c * m + r];
        }
    }
    double quad = 0.0;
    for (int r = 0; r < m; ++r) {
        for (int c = 0; c < m; ++c) {
            quad += (f.mean()[r] - g.mean()[r]) * ginv[r * m + c] *
                    (f.mean()[c] - g.mean()[c]);
        }
    }
    return 0.5 * (trace_term + quad - m + g.log_det() - f.log_det());
}

}  // namespace klgof
