#pragma once

#include <cstdint>

#include "klgof/gaussian.hpp"
#include "klgof/nn_search.hpp"
#include "klgof/parallel.hpp"
#include "klgof/point_set.hpp"

namespace klgof {

// What to do when a k-th neighbor radius is exactly zero (tied duplicate
// observations). Error refuses; Jitter perturbs each coordinate by uniform
// noise in [-a, a] with a = jitter_scale * per-coordinate standard
// deviation before any distances are computed.
struct DuplicatePolicy {
    enum class Kind { Error, Jitter };
    Kind kind = Kind::Error;
    double jitter_scale = 1e-9;

    static DuplicatePolicy error() { return {}; }
    static DuplicatePolicy jitter(double scale = 1e-9) {
        return {Kind::Jitter, scale};
    }
};

struct EstimatorConfig {
    int k = 1;  // neighborhood size; balances bias against variance
    DuplicatePolicy duplicate_policy{};
    KnnBackend backend = KnnBackend::SpatialTree;
    ExecMode exec = ExecMode::Parallel;
};

struct EntropyEstimate {
    double value = 0.0;  // nats
    std::int64_t n = 0;
    int k = 0;
    int dim = 0;
};

struct KlEstimate {
    double value = 0.0;  // nats; may be negative in finite samples
    std::int64_t n = 0;
    std::int64_t m_ref = 0;
    int k = 0;
    int dim = 0;
};

// k-nearest-neighbor estimate of differential Shannon entropy in nats:
//   psi(N) - psi(k) + log V_m + (m/N) sum_i log rho_{i,k}
// where rho_{i,k} is the distance from point i to its k-th nearest other
// sample point. Requires N >= k+1.
EntropyEstimate entropy_knn(const PointSet& sample, const EstimatorConfig& config);

// k-nearest-neighbor estimate of KL divergence D(f||g) in nats from
// independent samples X ~ f (size N) and Y ~ g (size M):
//   (m/N) sum_i log(nu_{i,k} / rho_{i,k}) + psi(M) - psi(N-1)
// with nu the X->Y radii and rho the within-X radii. The same k enters both
// radii, so no psi(k) term appears. Estimates are returned unclamped.
KlEstimate kl_knn(const PointSet& x_sample, const PointSet& y_sample,
                  const EstimatorConfig& config);

// Entropy gap of an estimate relative to a Gaussian model: the model's
// closed-form entropy minus the estimated entropy. For a model fitted to
// the sample's own moments this estimates the KL divergence from the
// moment-matched Gaussian.
double entropy_gap(const EntropyEstimate& f_entropy, const GaussianModel& model);

}  // namespace klgof
