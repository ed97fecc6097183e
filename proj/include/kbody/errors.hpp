#pragma once

#include <stdexcept>
#include <string>

namespace kbody {

// Operand shapes disagree (qubit counts, matrix dimensions).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A documented precondition on the value of an input does not hold
// (non-Hermitian matrix, unnormalized state, trace != 1, ...).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed or out-of-range argument (bad subset, k out of range, parse error).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Function evaluated outside its mathematical domain (log of a singular matrix).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Iterative numerics failed to converge.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// Requested problem exceeds a memory/enumeration cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kbody
