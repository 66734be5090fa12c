#pragma once

#include <stdexcept>
#include <string>

namespace hausdorff {

// Input falls outside an operation's documented domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A quadrature or iteration stopped without reaching its tolerance.
// Carries the partial estimate and the residual error bound.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double partial_estimate,
                   double error_bound)
      : std::runtime_error(what),
        partial_estimate(partial_estimate),
        error_bound(error_bound) {}

  double partial_estimate;
  double error_bound;
};

// An integral was classified as divergent. Carries the last finite partial sum
// seen before the classification fired.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, double last_partial)
      : std::runtime_error(what), last_partial(last_partial) {}

  double last_partial;
};

// A stated hypothesis of a theorem-level check fails; the message names the
// hypothesis so harnesses can report it verbatim.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hausdorff
