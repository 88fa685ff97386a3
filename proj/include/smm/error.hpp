#pragma once

#include <stdexcept>
#include <string>

namespace smm {

/// Thrown when an argument violates a documented precondition.
class InvalidInput : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when an iterative numerical routine exhausts its budget.
class ConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace smm
