#ifndef BJW_ERRORS_HPP_
#define BJW_ERRORS_HPP_

#include <stdexcept>
#include <string>

#include "bjw/state.hpp"

namespace bjw {

/// Invalid input: non-finite values, parameters outside their admissible range.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The flux Jacobian failed to have three real, distinct eigenvalues.
class HyperbolicityError : public std::runtime_error {
 public:
  HyperbolicityError(const std::string& what, const State& at)
      : std::runtime_error(what), state_(at) {}
  const State& state() const { return state_; }

 private:
  State state_;
};

/// A 2x2 matrix required by a closed form was singular.
class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative solve did not reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual, int iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

/// A least-squares or extrapolation fit was too ill-conditioned to trust.
class IllConditionedError : public std::runtime_error {
 public:
  IllConditionedError(const std::string& what, double condition)
      : std::runtime_error(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

}  // namespace bjw

#endif  // BJW_ERRORS_HPP_
