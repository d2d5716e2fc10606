#ifndef PLASTICITY_ERRORS_HPP
#define PLASTICITY_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace plasticity {

/// Raised when a caller violates a precondition (dimension mismatch, bad
/// label count, malformed selector). Maps to CLI exit code 2.
class UsageError : public std::invalid_argument {
 public:
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a numerical routine cannot meet its contract (eigensolver
/// did not converge, residual imaginary part too large). Maps to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace plasticity

#endif  // PLASTICITY_ERRORS_HPP
