#include "klgof/goftest.hpp"

#include <string>

#include "klgof/errors.hpp"
#include "klgof/parallel.hpp"
#include "klgof/rng.hpp"
#include "klgof/samplers.hpp"
#include "klgof/summaries.hpp"

namespace klgof {
namespace {

std::vector<double> bootstrap_null_statistics(const GaussianModel& model,
                                              std::int64_t n,
                                              const TestConfig& config) {
    if (config.n_bootstrap < 1) {
        throw DomainError("bootstrap: number of replications must be >= 1");
    }
    const EstimatorConfig est = config.estimator_with_k();
    std::vector<double> stats(static_cast<std::size_t>(config.n_bootstrap));
    parallel_for(config.n_bootstrap, est.exec, [&](std::int64_t b) {
        try {
            SeededRng rng(config.seed,
                          stream_id("bootstrap", {static_cast<std::uint64_t>(b)}));
            const PointSet replicate = sample_gaussian(model, n, rng);
            stats[b] = test_statistic(replicate, est);
        } catch (const std::exception& e) {
            throw Error("bootstrap replication " + std::to_string(b) +
                        " failed: " + e.what());
        }
    });
    return stats;
}

}  // namespace

double test_statistic(const PointSet& sample, const EstimatorConfig& config) {
    const GaussianModel model = fit_gaussian(sample);
    return entropy_gap(entropy_knn(sample, config), model);
}

std::pair<double, std::vector<double>> bootstrap_critical_value(
    const PointSet& sample, const TestConfig& config) {
    const GaussianModel model = fit_gaussian(sample);
    std::vector<double> stats =
        bootstrap_null_statistics(model, sample.size(), config);
    const double critical = upper_order_quantile(stats, config.alpha);
    return {critical, std::move(stats)};
}

TestResult run_test(const PointSet& sample, const TestConfig& config) {
    if (!(config.alpha > 0.0) || !(config.alpha < 1.0)) {
        throw DomainError("run_test: alpha must lie in (0, 1)");
    }
    const GaussianModel model = fit_gaussian(sample);
    const double t_observed = test_statistic(sample, config.estimator_with_k());
    std::vector<double> nulls =
        bootstrap_null_statistics(model, sample.size(), config);
    const double critical = upper_order_quantile(nulls, config.alpha);

    std::int64_t count_ge = 0;
    for (double t : nulls) {
        if (t >= t_observed) ++count_ge;
    }
    const double p_value = (1.0 + static_cast<double>(count_ge)) /
                           (static_cast<double>(nulls.size()) + 1.0);

    TestResult result;
    result.t_observed = t_observed;
    result.critical_value = critical;
    result.p_value = p_value;
    result.reject = t_observed >= critical;
    result.null_statistics = std::move(nulls);
    result.config = config;
    result.fitted = {model.mean(), model.log_det()};
    result.n = sample.size();
    result.dim = sample.dim();
    return result;
}

}  // namespace klgof
