#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace dmbmpc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A precondition of an operation was not met (dimension mismatch, empty
/// sequence, input outside its box, ...).
class ContractViolation : public Error {
public:
  using Error::Error;
};

/// Numerical failure inside the QP solver (e.g. Hessian not positive definite).
class SolverError : public Error {
public:
  using Error::Error;
};

/// A horizon configuration or bound precondition does not hold. The message
/// names the failed inequality.
class AdmissibilityError : public Error {
public:
  using Error::Error;
};

/// Malformed or inconsistent configuration. `key_path` names the offending key.
class ConfigError : public Error {
public:
  ConfigError(std::string key_path, const std::string& what)
      : Error(key_path.empty() ? what : key_path + ": " + what), key_path_(std::move(key_path)) {}

  const std::string& key_path() const noexcept { return key_path_; }

private:
  std::string key_path_;
};

/// Assumption-1 constant could not be estimated from the supplied samples.
class EstimationError : public Error {
public:
  using Error::Error;
};

/// Exhaustive enumeration would exceed the oracle's evaluation budget.
class OracleCapacityError : public Error {
public:
  using Error::Error;
};

}  // namespace dmbmpc
