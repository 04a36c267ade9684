#pragma once

#include <stdexcept>
#include <string>

namespace bioconv {

/// Invalid argument or configuration value.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed input file. Carries the offending line number (0 if unknown).
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Model data violate their assumptions (e.g. nonpositive viscosity).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Linear or nonlinear solver failure.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent mesh hierarchy.
class HierarchyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bioconv
