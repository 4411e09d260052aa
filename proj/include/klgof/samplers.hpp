#pragma once

#include <cstdint>
#include <string>

#include "klgof/gaussian.hpp"
#include "klgof/point_set.hpp"
#include "klgof/rng.hpp"

namespace klgof {

enum class Family { Gaussian, GeneralizedGaussian, StudentT };

// A data-generating distribution for experiments. `shape` is the
// generalized-Gaussian exponent s or the Student-t degrees of freedom nu;
// it is ignored for the Gaussian family. When standardize is set the draws
// are rescaled to unit coordinate covariance (requires nu > 2 for t).
struct AlternativeSpec {
    Family family = Family::Gaussian;
    double shape = 2.0;
    int dim = 1;
    bool standardize = true;
};

std::string family_name(Family family);

// n draws of mu + L z with z standard normal and L the model's Cholesky factor.
PointSet sample_gaussian(const GaussianModel& model, std::int64_t n, SeededRng& rng);

// n draws from the isotropic generalized Gaussian with density proportional
// to exp(-||x||^s / s): direction uniform on the unit sphere, radius R with
// R^s ~ Gamma(m/s, s). s = 2 recovers the standard Gaussian exactly. When
// standardize is set, the draws are rescaled by the exact Gamma-moment
// factor so the coordinate covariance is the identity.
PointSet sample_generalized_gaussian(int dim, double s, std::int64_t n,
                                     bool standardize, SeededRng& rng);

// n draws of z / sqrt(w/nu) with z standard normal and w ~ chi-square(nu);
// multiplied by sqrt((nu-2)/nu) when standardize is set.
PointSet sample_student_t(int dim, double nu, std::int64_t n, bool standardize,
                          SeededRng& rng);

PointSet sample_alternative(const AlternativeSpec& alt, std::int64_t n,
                            SeededRng& rng);

}  // namespace klgof
