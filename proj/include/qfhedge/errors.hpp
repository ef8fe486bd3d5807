#pragma once

#include <stdexcept>
#include <string>

namespace qfhedge {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid configuration or parameter set (CLI exit code 2).
struct ConfigError : Error {
    using Error::Error;
};

struct AlphaTooLarge : ConfigError {
    using ConfigError::ConfigError;
};

struct RhoOutOfRange : ConfigError {
    using ConfigError::ConfigError;
};

struct NonPositiveVolatility : ConfigError {
    using ConfigError::ConfigError;
};

struct InitialBelowFloor : ConfigError {
    using ConfigError::ConfigError;
};

struct NonPositiveDimension : ConfigError {
    using ConfigError::ConfigError;
};

/// sqrt(2 * floor) <= alpha, so the convergence-rate constant is undefined.
struct DegenerateBound : Error {
    using Error::Error;
};

/// Tridiagonal elimination hit a pivot below the stability threshold.
struct ZeroPivot : Error {
    using Error::Error;
};

/// A solved surface left its admissible value band, signalling instability.
struct NonConvergedGrid : Error {
    using Error::Error;
};

/// Query outside the solved (lambda, t) domain.
struct OutOfDomain : Error {
    using Error::Error;
};

/// Hedge sensitivity too small to divide by.
struct DegenerateSensitivity : Error {
    using Error::Error;
};

}  // namespace qfhedge
