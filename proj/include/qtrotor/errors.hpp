#pragma once

#include <stdexcept>
#include <string>

namespace qtr {

// Base for every failure of a numerical routine; the CLI maps these to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two ions at the same position.
class SingularConfiguration : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double last_residual)
      : NumericalError(what), last_residual_(last_residual) {}
  double last_residual() const { return last_residual_; }

 private:
  double last_residual_;
};

class BasisNotConverged : public NumericalError {
 public:
  BasisNotConverged(const std::string& what, double tail_weight)
      : NumericalError(what), tail_weight_(tail_weight) {}
  double tail_weight() const { return tail_weight_; }

 private:
  double tail_weight_;
};

// Input violates a documented precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace qtr
