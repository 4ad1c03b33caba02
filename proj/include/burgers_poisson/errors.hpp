#pragma once

#include <stdexcept>
#include <string>

namespace bp {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Precondition violations: bad arguments, mismatched grids, hypotheses of a
/// bound that do not hold.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A point evaluation fell outside the truncated domain.
class OutOfDomain : public DomainError {
public:
    using DomainError::DomainError;
};

/// Data reached the truncation boundary (support margin violated).
class MarginError : public Error {
public:
    using Error::Error;
};

/// NaN/Inf, or an a priori bound that the scheme must satisfy was broken.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Malformed configuration, CSV, or command line.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace bp
