#pragma once

#include <stdexcept>
#include <string>

namespace sslice {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroAfterProjection : Error {
    using Error::Error;
};
struct DimensionTooSmall : Error {
    using Error::Error;
};
struct DimensionMismatch : Error {
    using Error::Error;
};
struct NonpositiveScale : Error {
    using Error::Error;
};
struct NonpositiveVariance : Error {
    using Error::Error;
};
struct NumericallyIllConditioned : Error {
    using Error::Error;
};
struct QuadratureNonConvergent : Error {
    using Error::Error;
};
struct DomainError : Error {
    using Error::Error;
};
struct HullFailure : Error {
    using Error::Error;
};
struct DegenerateSection : Error {
    using Error::Error;
};
struct EmptySection : Error {
    using Error::Error;
};
struct SingularCovariance : Error {
    using Error::Error;
};
struct UnboundedIntegral : Error {
    using Error::Error;
};
struct NotApplicable : Error {
    using Error::Error;
};

}  // namespace sslice
