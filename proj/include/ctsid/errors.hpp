#pragma once

#include <stdexcept>
#include <string>

namespace ctsid {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// polynomial
struct DegreeZero : Error { using Error::Error; };
struct IllConditioned : Error { using Error::Error; };
struct ZeroConstantTerm : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };

// lti
struct ImproperTransferFunction : Error { using Error::Error; };
struct PoleOnGrid : Error { using Error::Error; };
struct EmptySignal : Error { using Error::Error; };

// signals
struct UnstableFilter : Error { using Error::Error; };
struct InvalidBounds : Error { using Error::Error; };

// estimator
struct SingularRegression : Error { using Error::Error; };
struct NearSingularNormalMatrix : Error { using Error::Error; };

// diagnostics
struct AssumptionA3Violated : Error { using Error::Error; };

// harness / io
struct SpecInvalid : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace ctsid
