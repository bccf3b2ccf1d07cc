#pragma once

#include <stdexcept>
#include <string>

namespace klab {

/// Raised when an iterative routine (root bracketing, bisection) fails to
/// converge within its documented iteration cap.
class NumericalFailure : public std::runtime_error {
 public:
  explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a verification suite is asked to check a configuration its
/// geometry does not cover (for example a first taming polynomial other than y).
class UnsupportedConfiguration : public std::invalid_argument {
 public:
  explicit UnsupportedConfiguration(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace klab
