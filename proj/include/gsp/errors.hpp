#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Core>

namespace gsp {

// Bad parameter or argument shape.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A documented precondition on the input (e.g. strong connectivity) is not met.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Iterative method failed to converge or a system is numerically singular.
// Carries the final residual and, when available, the best iterate.
class NumericFailure : public std::runtime_error {
 public:
  NumericFailure(const std::string& what, double residual = 0.0,
                 Eigen::VectorXd best = {})
      : std::runtime_error(what), residual_(residual), best_(std::move(best)) {}

  double residual() const { return residual_; }
  const Eigen::VectorXd& best_iterate() const { return best_; }

 private:
  double residual_;
  Eigen::VectorXd best_;
};

// U_SR lacks full column rank, so the bandlimited fit is not unique.
class NonUniqueReconstruction : public NumericFailure {
 public:
  using NumericFailure::NumericFailure;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, long line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gsp
