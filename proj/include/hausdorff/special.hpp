#pragma once

#include <cmath>

#include "quadrature.hpp"

namespace hausdorff {

// Dawson integral D(x) = e^{-x^2} int_0^x e^{t^2} dt, evaluated through the
// cancellation-free form D(x) = x int_0^1 exp(-x^2 (1-u)(1+u)) du. For very
// large arguments the two-term asymptote 1/(2x) suffices at double precision.
inline double dawson(double x) {
  if (x == 0.0) return 0.0;
  double ax = std::abs(x);
  if (ax > 1e7) return 0.5 / x;
  double xx = x * x;
  auto f = [xx](double u) { return std::exp(-xx * (1.0 - u) * (1.0 + u)); };
  return x * integrate(f, Interval(0, 1), 1e-13);
}

// Smooth bump supported on (-1, 1), normalized to 1 at the origin.
inline double bump(double u) {
  double s = 1.0 - u * u;
  return s > 0 ? std::exp(1.0 - 1.0 / s) : 0.0;
}

}  // namespace hausdorff
