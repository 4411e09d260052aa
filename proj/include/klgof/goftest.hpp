#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "klgof/estimators.hpp"
#include "klgof/point_set.hpp"

namespace klgof {

// Configuration of the KL-based multivariate normality test. The
// neighborhood size is taken from `k`; the nested estimator config supplies
// backend, duplicate policy and execution mode (its own k field is
// overridden).
struct TestConfig {
    int k = 1;
    double alpha = 0.05;
    int n_bootstrap = 1000;  // B; >= 1000 recommended, >= 100 strongly advised
    std::uint64_t seed = 0;
    EstimatorConfig estimator{};

    EstimatorConfig estimator_with_k() const {
        EstimatorConfig c = estimator;
        c.k = k;
        return c;
    }
};

struct FittedSummary {
    std::vector<double> mean;
    double log_det = 0.0;
};

struct TestResult {
    double t_observed = 0.0;
    double critical_value = 0.0;
    double p_value = 1.0;
    bool reject = false;
    std::vector<double> null_statistics;  // all B bootstrap statistics, in
                                          // replication order
    TestConfig config;
    FittedSummary fitted;
    std::int64_t n = 0;
    int dim = 0;
};

// The KL-based normality statistic in nats:
//   T = (1/2) log[(2 pi e)^m det(S_N)] - H_knn(sample)
// i.e. the entropy of the Gaussian fitted by sample mean and covariance
// minus the k-nearest-neighbor entropy estimate. May be negative in finite
// samples; it is never clamped.
double test_statistic(const PointSet& sample, const EstimatorConfig& config);

// Parametric bootstrap calibration: fits N(mean, cov) to the sample,
// simulates B datasets of the same size from the fit, computes the
// statistic for each, and returns the empirical upper (1-alpha)-quantile
// together with all B null statistics. A failing replication aborts the
// whole calibration.
std::pair<double, std::vector<double>> bootstrap_critical_value(
    const PointSet& sample, const TestConfig& config);

// Full test: observed statistic, bootstrap critical value, add-one p-value
// (1 + #{T_b >= T_obs}) / (B + 1), and the upper-tail decision
// reject <=> T_obs >= critical value. Deterministic given (sample, seed).
TestResult run_test(const PointSet& sample, const TestConfig& config);

}  // namespace klgof
