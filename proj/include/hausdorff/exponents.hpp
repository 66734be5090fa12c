#pragma once

#include <cmath>

#include "errors.hpp"

namespace hausdorff {

// Exponent bundle (p, q, beta) for the operator estimates, together with the
// power-weight exponents (alpha on the source side, gamma on the target side)
// used by the scaling identities.
struct ExponentSet {
  double p = 2;
  double q = 2;
  double beta = 0;
  double alpha = 0;
  double gamma = 0;

  double p_conj() const {
    if (!(p > 1)) throw DomainError("p_conj: requires p > 1");
    return p / (p - 1.0);
  }

  double q_conj() const {
    if (!(q > 1)) throw DomainError("q_conj: requires q > 1");
    return q / (q - 1.0);
  }

  // Index s with 1 + 1/q = 1/p + 1/s, the convolution exponent pairing
  // L^p with L^s into L^q.
  double young_s() const {
    double inv = 1.0 + 1.0 / q - 1.0 / p;
    if (!(inv > 0) || inv > 1.0 + 1e-12) {
      throw DomainError("young_s: exponents admit no convolution index");
    }
    return 1.0 / inv;
  }

  // Unweighted scaling relation 1/p - 1/q = beta.
  bool lebesgue_diagonal(double tol = 1e-12) const {
    return std::abs(1.0 / p - 1.0 / q - beta) <= tol;
  }

  // Power-weight scaling relation (1+alpha)/p - (1+gamma)/q = beta.
  bool power_scaling(double tol = 1e-12) const {
    return std::abs((1.0 + alpha) / p - (1.0 + gamma) / q - beta) <= tol;
  }

  // Unweighted diagonal bundle: q is forced by 1/q = 1/p - beta.
  static ExponentSet diagonal(double p, double beta) {
    validate_p(p);
    validate_beta(beta);
    double inv_q = 1.0 / p - beta;
    if (!(inv_q > 0)) {
      throw DomainError("diagonal exponents: need 1/p > beta");
    }
    ExponentSet e;
    e.p = p;
    e.q = 1.0 / inv_q;
    e.beta = beta;
    return e;
  }

  static ExponentSet general(double p, double q, double beta, double alpha = 0,
                             double gamma = 0) {
    validate_p(p);
    validate_p(q);
    validate_beta(beta);
    if (!(alpha > -1) || !(gamma > -1) || !std::isfinite(alpha) ||
        !std::isfinite(gamma)) {
      throw DomainError("exponents: weight exponents must exceed -1");
    }
    ExponentSet e;
    e.p = p;
    e.q = q;
    e.beta = beta;
    e.alpha = alpha;
    e.gamma = gamma;
    return e;
  }

 private:
  static void validate_p(double p) {
    if (!(p > 0) || !std::isfinite(p)) {
      throw DomainError("exponents: indices must lie in (0, inf)");
    }
  }
  static void validate_beta(double beta) {
    if (!(beta >= 0) || !(beta < 1)) {
      throw DomainError("exponents: beta must lie in [0, 1)");
    }
  }
};

}  // namespace hausdorff
