#pragma once

#include <stdexcept>
#include <string>

namespace twinrrm {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument is outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The requested rate is not supported by the SINR at the given bandwidth
/// (B log2(1 + SINR) <= R), so no finite latency exists.
class InfeasibleRateError : public Error {
 public:
  using Error::Error;
};

/// A bracketing root finder was given an interval without a sign change.
class NoSignChangeError : public Error {
 public:
  using Error::Error;
};

/// An iterative method hit its iteration cap.
class NonConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Malformed or out-of-range configuration input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace twinrrm
