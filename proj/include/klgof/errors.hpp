#pragma once

#include <stdexcept>
#include <string>

namespace klgof {

// Base class for every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of a function (x <= 0, s <= 0, ...).
struct DomainError : Error {
    using Error::Error;
};

// Neighborhood size k incompatible with the sample sizes.
struct InvalidKError : Error {
    using Error::Error;
};

// Two point sets with different coordinate dimensions.
struct DimensionMismatchError : Error {
    using Error::Error;
};

// A k-th neighbor radius of exactly zero under the Error duplicate policy.
struct DuplicatePointsError : Error {
    using Error::Error;
};

// Sample covariance not positive definite (Cholesky pivot collapsed).
struct SingularCovarianceError : Error {
    using Error::Error;
};

// Malformed external input: CSV data or experiment spec files.
struct BadInputError : Error {
    using Error::Error;
};

}  // namespace klgof
