#pragma once

#include <vector>

#include "klgof/point_set.hpp"

namespace klgof {

// Mean vector and positive-definite covariance with a cached lower
// Cholesky factor and log-determinant. Immutable after construction.
class GaussianModel {
public:
    // cov is row-major dim x dim and must be symmetric (to 1e-10) and
    // positive definite; throws SingularCovarianceError when the Cholesky
    // pivot falls below 1e-12 * trace/dim.
    GaussianModel(std::vector<double> mean, std::vector<double> cov);

    static GaussianModel standard(int dim);

    int dim() const { return dim_; }
    const std::vector<double>& mean() const { return mean_; }
    const std::vector<double>& cov() const { return cov_; }
    // Lower-triangular L with L L^T = cov, row-major.
    const std::vector<double>& chol_lower() const { return chol_; }
    double log_det() const { return log_det_; }

private:
    std::vector<double> mean_;
    std::vector<double> cov_;
    std::vector<double> chol_;
    double log_det_ = 0.0;
    int dim_ = 0;
};

// Sample mean and sample covariance (denominator N-1). Requires N >= m+1.
GaussianModel fit_gaussian(const PointSet& sample);

// Differential entropy of N(mu, Sigma) in nats given log det(Sigma):
// (1/2) (m log(2 pi e) + log det Sigma).
double gaussian_entropy(double cov_log_det, int dim);

// Closed-form KL divergence between two Gaussians in nats. Non-negative,
// zero iff the models coincide.
double gaussian_kl_closed_form(const GaussianModel& f, const GaussianModel& g);

}  // namespace klgof
