#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "klgof/errors.hpp"
#include "klgof/estimators.hpp"
#include "klgof/gaussian.hpp"
#include "klgof/samplers.hpp"
#include "test_util.hpp"

using namespace klgof;
using namespace klgof::testutil;

TEST_CASE("fit matches the hand-computed square example") {
    const PointSet pts =
        make_points({0, 0, 2, 0, 0, 2, 2, 2}, 4, 2);
    const GaussianModel model = fit_gaussian(pts);
    CHECK(std::abs(model.mean()[0] - 1.0) < 1e-14);
    CHECK(std::abs(model.mean()[1] - 1.0) < 1e-14);
    CHECK(std::abs(model.cov()[0] - 4.0 / 3.0) < 1e-14);
    CHECK(std::abs(model.cov()[3] - 4.0 / 3.0) < 1e-14);
    CHECK(std::abs(model.cov()[1]) < 1e-14);
    CHECK(std::abs(model.log_det() - 2.0 * std::log(4.0 / 3.0)) < 1e-12);
}

TEST_CASE("collinear data is singular") {
    // Points on the line y = 2x.
    const PointSet pts = make_points({0, 0, 1, 2, 2, 4, 3, 6}, 4, 2);
    CHECK_THROWS_AS(fit_gaussian(pts), SingularCovarianceError);
}

TEST_CASE("too few observations is singular") {
    const PointSet pts = make_points({0.0, 1.0, 2.0, 3.0}, 2, 2);
    CHECK_THROWS_AS(fit_gaussian(pts), SingularCovarianceError);
}

TEST_CASE("fit recovers the moments of a large standard-normal sample") {
    SeededRng rng(21, 0);
    const PointSet sample =
        sample_gaussian(GaussianModel::standard(3), 10000, rng);
    const GaussianModel model = fit_gaussian(sample);
    for (int j = 0; j < 3; ++j) CHECK(std::abs(model.mean()[j]) < 0.05);
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            const double want = r == c ? 1.0 : 0.0;
            CHECK(std::abs(model.cov()[r * 3 + c] - want) < 0.1);
        }
    }
}

TEST_CASE("fit is affine consistent") {
    SeededRng rng(22, 0);
    const PointSet sample = random_points(rng, 500, 2, -2.0, 2.0);
    const GaussianModel base = fit_gaussian(sample);

    // x -> A x + b with A = [[2, 1], [0.5, 3]], b = (1, -2)
    std::vector<double> data(sample.values().size());
    for (std::int64_t i = 0; i < sample.size(); ++i) {
        const double x = sample(i, 0), y = sample(i, 1);
        data[i * 2] = 2.0 * x + 1.0 * y + 1.0;
        data[i * 2 + 1] = 0.5 * x + 3.0 * y - 2.0;
    }
    const GaussianModel moved = fit_gaussian(make_points(std::move(data), 500, 2));

    const double want_mean0 = 2.0 * base.mean()[0] + base.mean()[1] + 1.0;
    const double want_mean1 = 0.5 * base.mean()[0] + 3.0 * base.mean()[1] - 2.0;
    CHECK(std::abs(moved.mean()[0] - want_mean0) < 1e-8 * std::abs(want_mean0));
    CHECK(std::abs(moved.mean()[1] - want_mean1) < 1e-8 * std::abs(want_mean1));

    // A S A^T
    const double a[2][2] = {{2.0, 1.0}, {0.5, 3.0}};
    double want_cov[2][2] = {{0, 0}, {0, 0}};
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            for (int s = 0; s < 2; ++s) {
                for (int t = 0; t < 2; ++t) {
                    want_cov[r][c] += a[r][s] * base.cov()[s * 2 + t] * a[c][t];
                }
            }
        }
    }
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            CHECK(std::abs(moved.cov()[r * 2 + c] - want_cov[r][c]) <=
                  1e-8 * std::abs(want_cov[r][c]));
        }
    }
}

TEST_CASE("cholesky factor reconstructs the covariance") {
    SeededRng rng(23, 0);
    const PointSet sample = random_points(rng, 200, 3, -1.0, 3.0);
    const GaussianModel model = fit_gaussian(sample);
    const auto& chol = model.chol_lower();
    double diag_sum = 0.0;
    for (int r = 0; r < 3; ++r) {
        diag_sum += 2.0 * std::log(chol[r * 3 + r]);
        for (int c = 0; c < 3; ++c) {
            double v = 0.0;
            for (int t = 0; t < 3; ++t) v += chol[r * 3 + t] * chol[c * 3 + t];
            CHECK(std::abs(v - model.cov()[r * 3 + c]) <=
                  1e-8 * std::max(1.0, std::abs(model.cov()[r * 3 + c])));
        }
    }
    CHECK(model.log_det() == diag_sum);
}

TEST_CASE("asymmetric covariance is rejected") {
    CHECK_THROWS_AS(GaussianModel({0.0, 0.0}, {1.0, 0.5, 0.2, 1.0}), DomainError);
}

TEST_CASE("gaussian entropy closed forms") {
    CHECK(std::abs(gaussian_entropy(0.0, 1) - 1.4189385332046727) < 1e-12);
    CHECK(std::abs(gaussian_entropy(0.0, 2) - 2.8378770664093453) < 1e-12);
    CHECK(std::abs(gaussian_entropy(std::log(4.0), 1) - 2.1120857137646181) < 1e-12);
}

TEST_CASE("gaussian KL closed forms") {
    const GaussianModel std1 = GaussianModel::standard(1);
    CHECK(gaussian_kl_closed_form(std1, std1) == 0.0);

    const GaussianModel shifted({1.0}, {1.0});
    CHECK(std::abs(gaussian_kl_closed_form(std1, shifted) - 0.5) < 1e-12);

    const GaussianModel wide({0.0}, {4.0});
    CHECK(std::abs(gaussian_kl_closed_form(std1, wide) - 0.3181471805599453) <
          1e-12);
    CHECK(gaussian_kl_closed_form(wide, std1) > 0.0);

    CHECK_THROWS_AS(gaussian_kl_closed_form(std1, GaussianModel::standard(2)),
                    DimensionMismatchError);
}

TEST_CASE("entropy gap is zero at the model's own entropy") {
    const GaussianModel model({0.0, 0.0}, {1.0, 0.0, 0.0, 1.0});
    EntropyEstimate est;
    est.value = gaussian_entropy(model.log_det(), 2);
    est.dim = 2;
    CHECK(entropy_gap(est, model) == 0.0);
    est.dim = 3;
    CHECK_THROWS_AS(entropy_gap(est, model), DimensionMismatchError);
}

TEST_CASE("entropy gap concentrates near zero for Gaussian samples") {
    EstimatorConfig cfg;
    SeededRng rng(24, 99);
    const PointSet sample = sample_gaussian(GaussianModel::standard(2), 5000, rng);
    const double gap = entropy_gap(entropy_knn(sample, cfg), fit_gaussian(sample));
    CHECK(std::abs(gap) <= 0.05);
}

TEST_CASE("mean entropy gap is nonnegative for matched-moment samplers") {
    // The Gaussian maximizes entropy within a mean-covariance class, so the
    // population gap is >= 0 for every standardized generator; -0.02 leaves
    // room for estimator noise.
    EstimatorConfig cfg;
    const AlternativeSpec alts[] = {
        {Family::Gaussian, 2.0, 2, true},
        {Family::GeneralizedGaussian, 1.0, 2, true},
        {Family::GeneralizedGaussian, 4.0, 2, true},
        {Family::StudentT, 5.0, 2, true},
    };
    for (const AlternativeSpec& alt : alts) {
        double mean_gap = 0.0;
        for (int seed = 0; seed < 50; ++seed) {
            SeededRng rng(25, static_cast<std::uint64_t>(seed));
            const PointSet sample = sample_alternative(alt, 5000, rng);
            mean_gap +=
                entropy_gap(entropy_knn(sample, cfg), fit_gaussian(sample));
        }
        mean_gap /= 50.0;
        CHECK(mean_gap >= -0.02);
    }
}
