#pragma once

#include <stdexcept>
#include <string>

namespace ffpage {

/// Thrown when an input violates a documented precondition or type invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a computation produces a result that breaks a numerical
/// invariant (non-converged eigensolver, spectrum far outside [0, 1], ...).
/// The message names the invariant.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

[[noreturn]] inline void fail_validation(const std::string& what) {
  throw ValidationError(what);
}

inline void require(bool condition, const std::string& what) {
  if (!condition) fail_validation(what);
}

}  // namespace detail
}  // namespace ffpage
