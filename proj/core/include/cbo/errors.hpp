#pragma once

#include <stdexcept>
#include <string>

namespace cbo {

// Bad user input: malformed config files, inconsistent dimensions, values out
// of range.  Maps to exit code 1 in the command line tool.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A solver failed to reach its goal (stationarity, linear solve, ...).
// Maps to exit code 3 in the command line tool.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// A particle trajectory produced a non-finite position or objective value.
// Recorded per sample by the experiment runner, not fatal to the experiment.
class DivergedRunError : public ConvergenceError {
 public:
  DivergedRunError(const std::string& what, long step)
      : ConvergenceError(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

}  // namespace cbo
