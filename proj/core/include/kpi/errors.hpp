#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace kpi {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Array or grid shapes that do not agree.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// A scalar argument outside its admissible range.
class ParameterError : public Error {
public:
  using Error::Error;
};

/// Evaluation at a point where the formula is undefined (k = 0, xi = 0, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Violation of a structural constraint on the data, e.g. nonzero x-mean.
class ConstraintError : public Error {
public:
  using Error::Error;
};

/// A computed object failed a consistency check (non-PSD Gramian, singular
/// Toeplitz matrix, unresolvable eigenvalue).
class NumericalConsistencyError : public Error {
public:
  using Error::Error;
};

/// Iterative solve stopped without reaching its tolerance.
class NonConvergenceError : public NumericalConsistencyError {
public:
  NonConvergenceError(const std::string& what, std::vector<double> residual_history);

  const std::vector<double>& residual_history() const noexcept { return history_; }

private:
  std::vector<double> history_;
};

/// Malformed experiment configuration. `line()` is 1-based, 0 when unknown.
class ConfigError : public Error {
public:
  ConfigError(const std::string& what, int line = 0);

  int line() const noexcept { return line_; }

private:
  int line_;
};

}  // namespace kpi
