#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "exponents.hpp"
#include "fft.hpp"
#include "grid.hpp"
#include "kernels.hpp"
#include "norms.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"

namespace hausdorff {

// Pointwise application of the averaging operator
//   h f(x) = integral of Phi(x/|y|) |y|^(beta-1) f(y) dy.
// The substitution t = |x|/y turns each sign branch into an integral over
// scales, with the kernel's breakpoints landing on fixed abscissas:
//   h f(x) = |x|^beta int_0^inf Phi(sgn(x) t) t^(-beta-1)
//            [f(|x|/t) + f(-|x|/t)] dt.
// Divergent integrals raise DivergenceError (classified by shell probing),
// unresolved ones ConvergenceError.
inline double apply_hausdorff(const Kernel& k, double beta,
                              const RealFunction& f, double x,
                              double tol = 1e-9) {
  if (!(beta >= 0) || !(beta < 1)) {
    throw DomainError("apply_hausdorff: beta must lie in [0, 1)");
  }
  if (x == 0.0 || !std::isfinite(x)) {
    throw DomainError("apply_hausdorff: x must be nonzero and finite");
  }
  double ax = std::abs(x);
  double sgn = x > 0 ? 1.0 : -1.0;
  double t_lo = k.support_lo();
  double t_hi = k.support_hi();
  if (std::isfinite(f.support_radius)) {
    t_lo = std::max(t_lo, ax / f.support_radius);
  }
  if (!(t_lo < t_hi)) return 0.0;
  // The |x|^beta prefactor is folded into the integrand as (|x|/t)^beta, so
  // power-law arguments keep every intermediate finite: with the bare
  // t^(-beta-1) weight the inner integral can overflow at extreme |x| even
  // when h f(x) itself is moderate.
  auto integrand = [&](double t) {
    if (t <= 0.0) return 0.0;
    double phi = k.evaluate(sgn * t);
    if (phi == 0.0) return 0.0;
    double y = ax / t;
    double fsum = f(y) + f(-y);
    if (fsum == 0.0) return 0.0;
    return phi * std::pow(y, beta) * fsum / t;
  };
  std::vector<double> breaks;
  for (double b : k.breakpoints()) {
    if (b > 0) breaks.push_back(b);
  }
  for (double b : f.breakpoints) {
    if (b != 0.0) breaks.push_back(ax / std::abs(b));
  }
  if (std::isfinite(f.support_radius) && f.support_radius > 0) {
    breaks.push_back(ax / f.support_radius);
  }
  Interval dom(t_lo, t_hi);
  try {
    return integrate(integrand, dom, tol, breaks);
  } catch (const ConvergenceError& ce) {
    auto abs_integrand = [&](double t) { return std::abs(integrand(t)); };
    auto probe = probe_integrate(abs_integrand, dom, tol, breaks);
    if (probe.divergent) {
      throw DivergenceError(
          "apply_hausdorff: integral diverges at x = " + std::to_string(x),
          ce.partial_estimate);
    }
    throw;
  }
}

// Pointwise application on every node of a grid. Nodes where the quadrature
// diverges (or fails to converge) are recorded and carry the value zero.
struct GridApplication {
  GridFunction values;
  std::vector<int> divergent_nodes;
};

inline GridApplication apply_on_grid(const Kernel& k, double beta,
                                     const RealFunction& f,
                                     const LogGrid& out_grid,
                                     double tol = 1e-9) {
  std::vector<double> vals(out_grid.size(), 0.0);
  std::vector<char> bad(out_grid.size(), 0);
  parallel_for(out_grid.size(), [&](int i) {
    try {
      vals[i] = apply_hausdorff(k, beta, f, out_grid.node(i), tol);
    } catch (const DivergenceError&) {
      bad[i] = 1;
    } catch (const ConvergenceError&) {
      bad[i] = 1;
    }
  });
  GridApplication out{GridFunction(out_grid, std::move(vals)), {}};
  for (std::size_t i = 0; i < bad.size(); ++i) {
    if (bad[i]) out.divergent_nodes.push_back(static_cast<int>(i));
  }
  return out;
}

// Multiplicative convolution (f * g)(x) = int_0^inf f(y) g(x/y) dy/y of two
// positive-axis grid functions sharing one grid. In u = ln x this is an
// additive convolution, done by FFT; the result lives on the extended grid
// [r_min^2, r_max^2] with the same spacing.
inline PosGridFunction mult_convolve(const PosGridFunction& f,
                                     const PosGridFunction& g) {
  if (!(f.grid() == g.grid())) {
    throw DomainError("mult_convolve: operands must share one grid");
  }
  int n = f.grid().size();
  int m = 1;
  while (m < 2 * n) m <<= 1;
  std::vector<std::complex<double>> A(m), B(m);
  for (int i = 0; i < n; ++i) {
    A[i] = f.value(i);
    B[i] = g.value(i);
  }
  fft_inplace(A, -1);
  fft_inplace(B, -1);
  for (int i = 0; i < m; ++i) A[i] *= B[i];
  fft_inplace(A, 1);
  double du = f.grid().du();
  std::vector<double> out(2 * n - 1);
  for (int j = 0; j < 2 * n - 1; ++j) out[j] = du * A[j].real();
  PosLogGrid ext(f.grid().r_min() * f.grid().r_min(),
                 f.grid().r_max() * f.grid().r_max(), 2 * n - 1);
  return PosGridFunction(ext, std::move(out));
}

namespace detail {

// Sample a function of one sign branch as the average of its one-sided limits
// (identical to the value at smooth points, the midpoint at jumps).
template <class F>
double midpoint_sample(F&& f, double y) {
  double h = 1e-9 * y;
  return 0.5 * (f(y - h) + f(y + h));
}

}  // namespace detail

// Grid realization of the operator as a pair of multiplicative convolutions
// per sign of x. Requires the power-weight scaling relation
// (1+alpha)/p - (1+gamma)/q = beta; under it
//   h f(+-x) = x^(-(1+gamma)/q) [ G_{+-} * F_+ + G_{+-} * F_- ](x), x > 0,
// with G_{+-}(t) = Phi(+-t) t^((1+gamma)/q) and F_{+-}(y) = f(+-y) y^((1+alpha)/p).
// Jumps of Phi or f that land on nodes are sampled by their midpoint. Values
// near the ends of the extended grid reflect truncation of the factors, and
// at outputs where jumps of both factors meet on one node the accuracy
// degrades from O(du^2) to O(du), since the midpoint of a product of jumps is
// not the product of midpoints.
inline GridFunction hausdorff_as_mellin(const Kernel& k, const ExponentSet& e,
                                        const RealFunction& f,
                                        const PosLogGrid& conv_grid) {
  if (!e.power_scaling(1e-10)) {
    throw PreconditionError(
        "hausdorff_as_mellin: exponents must satisfy the scaling relation "
        "(1+alpha)/p - (1+gamma)/q = beta");
  }
  double eg = (1.0 + e.gamma) / e.q;
  double ea = (1.0 + e.alpha) / e.p;
  auto Gp = PosGridFunction::sample(conv_grid, [&](double t) {
    return detail::midpoint_sample([&](double s) { return k.evaluate(s); }, t) *
           std::pow(t, eg);
  });
  auto Gm = PosGridFunction::sample(conv_grid, [&](double t) {
    return detail::midpoint_sample([&](double s) { return k.evaluate(-s); }, t) *
           std::pow(t, eg);
  });
  auto Fp = PosGridFunction::sample(conv_grid, [&](double y) {
    return detail::midpoint_sample(f, y) * std::pow(y, ea);
  });
  auto Fm = PosGridFunction::sample(conv_grid, [&](double y) {
    return detail::midpoint_sample([&](double s) { return f(-s); }, y) *
           std::pow(y, ea);
  });
  auto pos = mult_convolve(Gp, Fp);
  auto pos2 = mult_convolve(Gp, Fm);
  auto neg = mult_convolve(Gm, Fp);
  auto neg2 = mult_convolve(Gm, Fm);
  const PosLogGrid& ext = pos.grid();
  LogGrid out_grid(ext);
  std::vector<double> vals(out_grid.size());
  int n = ext.size();
  for (int j = 0; j < n; ++j) {
    double x = ext.node(j);
    double w = std::pow(x, -eg);
    vals[n + j] = w * (pos.value(j) + pos2.value(j));
    vals[n - 1 - j] = w * (neg.value(j) + neg2.value(j));
  }
  return GridFunction(out_grid, std::move(vals));
}

}  // namespace hausdorff
