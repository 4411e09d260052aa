#include "klgof/estimators.hpp"

#include <cmath>
#include <optional>
#include <vector>

#include "klgof/errors.hpp"
#include "klgof/rng.hpp"
#include "klgof/special_math.hpp"

namespace klgof {
namespace {

// Fixed seed so that jittering is a pure function of its input.
constexpr std::uint64_t kJitterSeed = 0x6B6C676F6A697401ull;

PointSet apply_jitter(const PointSet& sample, double scale,
                      std::uint64_t stream) {
    const std::int64_t n = sample.size();
    const int m = sample.dim();
    std::vector<double> sd(static_cast<std::size_t>(m), 0.0);
    std::vector<double> mean(static_cast<std::size_t>(m), 0.0);
    for (std::int64_t i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) mean[j] += sample(i, j);
    }
    for (int j = 0; j < m; ++j) mean[j] /= static_cast<double>(n);
    for (std::int64_t i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            const double c = sample(i, j) - mean[j];
            sd[j] += c * c;
        }
    }
    for (int j = 0; j < m; ++j) {
        sd[j] = std::sqrt(sd[j] / static_cast<double>(n));
        if (sd[j] == 0.0) sd[j] = 1.0;  // constant coordinate
    }
    SeededRng rng(kJitterSeed, stream);
    std::vector<double> data = sample.values();
    for (std::int64_t i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            data[i * m + j] += rng.uniform(-scale * sd[j], scale * sd[j]);
        }
    }
    return {std::move(data), n, m};
}

const PointSet& maybe_jitter(const PointSet& sample, const DuplicatePolicy& policy,
                             std::uint64_t stream,
                             std::optional<PointSet>& storage) {
    if (policy.kind == DuplicatePolicy::Kind::Jitter) {
        if (!(policy.jitter_scale > 0.0)) {
            throw DomainError("jitter scale must be positive");
        }
        storage.emplace(apply_jitter(sample, policy.jitter_scale, stream));
        return *storage;
    }
    return sample;
}

void check_radii(const std::vector<double>& radii, const char* what) {
    for (double r : radii) {
        if (r == 0.0) {
            throw DuplicatePointsError(std::string(what) +
                                       ": zero k-th neighbor radius "
                                       "(duplicate points)");
        }
    }
}

// Fixed-order reduction so results do not depend on thread count.
double sum_log(const std::vector<double>& radii) {
    double s = 0.0;
    for (double r : radii) s += std::log(r);
    return s;
}

}  // namespace

EntropyEstimate entropy_knn(const PointSet& sample, const EstimatorConfig& config) {
    const std::int64_t n = sample.size();
    const int m = sample.dim();
    if (config.k < 1 || n < config.k + 1) {
        throw InvalidKError("entropy_knn: need N >= k+1 with k >= 1");
    }
    std::optional<PointSet> jittered;
    const PointSet& pts = maybe_jitter(sample, config.duplicate_policy, 0, jittered);

    const std::vector<double> radii =
        kth_nn_distances_within(pts, config.k, config.backend, config.exec);
    check_radii(radii, "entropy_knn");

    const double value = digamma(static_cast<double>(n)) -
                         digamma(static_cast<double>(config.k)) +
                         log_unit_ball_volume(m) +
                         (static_cast<double>(m) / static_cast<double>(n)) *
                             sum_log(radii);
    return {value, n, config.k, m};
}

KlEstimate kl_knn(const PointSet& x_sample, const PointSet& y_sample,
                  const EstimatorConfig& config) {
    if (x_sample.dim() != y_sample.dim()) {
        throw DimensionMismatchError("kl_knn: samples have different dimensions");
    }
    const std::int64_t n = x_sample.size();
    const std::int64_t m_ref = y_sample.size();
    const int m = x_sample.dim();
    if (config.k < 1 || n < config.k + 1 || m_ref < config.k) {
        throw InvalidKError("kl_knn: need N >= k+1 and M >= k with k >= 1");
    }
    std::optional<PointSet> x_jittered, y_jittered;
    const PointSet& x = maybe_jitter(x_sample, config.duplicate_policy, 0, x_jittered);
    const PointSet& y = maybe_jitter(y_sample, config.duplicate_policy, 1, y_jittered);

    const std::vector<double> rho =
        kth_nn_distances_within(x, config.k, config.backend, config.exec);
    const std::vector<double> nu =
        kth_nn_distances_cross(x, y, config.k, config.backend, config.exec);
    check_radii(rho, "kl_knn (within-sample)");
    check_radii(nu, "kl_knn (cross-sample)");

    double ratio_sum = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        ratio_sum += std::log(nu[i]) - std::log(rho[i]);
    }
    const double value =
        (static_cast<double>(m) / static_cast<double>(n)) * ratio_sum +
        digamma(static_cast<double>(m_ref)) - digamma(static_cast<double>(n - 1));
    return {value, n, m_ref, config.k, m};
}

double entropy_gap(const EntropyEstimate& f_entropy, const GaussianModel& model) {
    if (f_entropy.dim != model.dim()) {
        throw DimensionMismatchError("entropy_gap: dimension mismatch");
    }
    return gaussian_entropy(model.log_det(), model.dim()) - f_entropy.value;
}

}  // namespace klgof
