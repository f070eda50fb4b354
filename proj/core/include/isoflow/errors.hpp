#pragma once

#include <stdexcept>
#include <string>

namespace isoflow {

// Raised when an argument violates a documented precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a computation fails numerically (blow-up, loss of unitarity,
// Wronskian violation, eigensolver trouble).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace isoflow
