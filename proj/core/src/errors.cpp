#include "kpi/errors.hpp"

#include <utility>

namespace kpi {

NonConvergenceError::NonConvergenceError(const std::string& what,
                                         std::vector<double> residual_history)
    : NumericalConsistencyError(what), history_(std::move(residual_history)) {}

namespace {
std::string with_line(const std::string& what, int line) {
  if (line <= 0) return what;
  return "line " + std::to_string(line) + ": " + what;
}
}  // namespace

ConfigError::ConfigError(const std::string& what, int line)
    : Error(with_line(what, line)), line_(line) {}

}  // namespace kpi
