// Exception types shared across the library.
#pragma once

#include <stdexcept>
#include <string>

namespace cqr {

// Base of everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input documents (channel files, prior files).
struct ParseError : Error {
    using Error::Error;
};

// An input violates a stated invariant (bad prior, bad Gram, caps exceeded).
struct ValidationError : Error {
    using Error::Error;
};

struct DomainError : ValidationError {
    using ValidationError::ValidationError;
};

struct DimensionTooLarge : ValidationError {
    using ValidationError::ValidationError;
};

struct RepresentationUnavailable : ValidationError {
    using ValidationError::ValidationError;
};

struct LengthMismatch : ValidationError {
    using ValidationError::ValidationError;
};

// Numerical failures inside kernels.
struct NumericError : Error {
    using Error::Error;
};

struct NonHermitianInput : NumericError {
    using NumericError::NumericError;
};

struct NotPSD : NumericError {
    using NumericError::NumericError;
};

struct BracketFailure : NumericError {
    using NumericError::NumericError;
};

struct UnboundedParameter : NumericError {
    using NumericError::NumericError;
};

}  // namespace cqr
