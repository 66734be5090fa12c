#pragma once

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "exponents.hpp"
#include "grid.hpp"
#include "kernels.hpp"
#include "quadrature.hpp"
#include "report.hpp"
#include "weights.hpp"

namespace hausdorff {

// A function of the line given in closed form, with the structure quadratures
// need: signed abscissas where it is only piecewise smooth, and a radius
// outside of which it vanishes (infinity when it does not).
struct RealFunction {
  std::function<double(double)> fn;
  std::vector<double> breakpoints{};
  double support_radius = kInf;

  double operator()(double x) const {
    if (std::abs(x) > support_radius) return 0.0;
    return fn(x);
  }
};

namespace detail {

inline void validate_index(double p, const char* where) {
  if (!(p > 0) || !std::isfinite(p)) {
    throw DomainError(std::string(where) + ": index must lie in (0, inf)");
  }
}

}  // namespace detail

// || f ||_{L^p(w)} for a closed-form function, with divergence probing at the
// origin, at the support edge, and along infinite tails.
inline NormValue weighted_lp_norm(const RealFunction& f, const Weight& w,
                                  double p, double tol = 1e-10) {
  detail::validate_index(p, "weighted_lp_norm");
  double R = f.support_radius;
  Interval dom = std::isfinite(R) ? Interval(-R, R) : Interval(-kInf, kInf);
  std::vector<double> breaks = f.breakpoints;
  for (double b : w.breakpoints()) breaks.push_back(b);
  auto integrand = [&f, &w, p](double x) {
    double v = std::abs(f(x));
    return v == 0.0 ? 0.0 : std::pow(v, p) * w(x);
  };
  auto r = probe_integrate(integrand, dom, tol, breaks);
  NormValue out;
  out.divergent = r.divergent;
  out.value = r.divergent ? kInf : std::pow(r.value, 1.0 / p);
  out.error = r.error;
  return out;
}

// || f ||_{L^p(w)} of the log-linear interpolant of grid samples, integrated
// cell by cell over the grid's support.
inline NormValue weighted_lp_norm(const GridFunction& f, const Weight& w,
                                  double p, double /*tol*/ = 1e-10) {
  detail::validate_index(p, "weighted_lp_norm");
  using gauss = boost::math::quadrature::gauss<double, 15>;
  const LogGrid& g = f.grid();
  double total = 0;
  for (int sign : {1, -1}) {
    for (int k = 0; k + 1 < g.n_per_side(); ++k) {
      double u0 = g.positive_half().u(k);
      double a = f.branch_value(sign, k);
      double b = f.branch_value(sign, k + 1);
      auto cell = [&](double s) {  // s = fraction across the cell
        double x = std::exp(u0 + s * g.du());
        double v = std::abs(a + (b - a) * s);
        double vv = v == 0.0 ? 0.0 : std::pow(v, p);
        return vv * w(sign * x) * x;  // dx = x du
      };
      total += g.du() * gauss::integrate(cell, 0.0, 1.0);
    }
  }
  return {std::pow(total, 1.0 / p), false, 0.0};
}

namespace detail {

// w-measure of { |interpolant| > lam } for a grid function: per cell the
// interpolant is linear in u, so the level set is a union of subcells.
inline double measure_above(const GridFunction& f, const Weight& w,
                            double lam) {
  const LogGrid& g = f.grid();
  double total = 0;
  for (int sign : {1, -1}) {
    for (int k = 0; k + 1 < g.n_per_side(); ++k) {
      double a = std::abs(f.branch_value(sign, k));
      double b = std::abs(f.branch_value(sign, k + 1));
      double s0 = 0.0, s1 = 1.0;
      if (a <= lam && b <= lam) continue;
      if (a <= lam || b <= lam) {
        double cross = (lam - a) / (b - a);
        if (a <= lam) {
          s0 = cross;
        } else {
          s1 = cross;
        }
      }
      double u0 = g.positive_half().u(k);
      double x0 = std::exp(u0 + s0 * g.du());
      double x1 = std::exp(u0 + s1 * g.du());
      total += weight_measure(w, Interval(x0, x1)).value;
    }
  }
  return total;
}

}  // namespace detail

// Weak norm sup_lam lam * w({|f| > lam})^(1/p) of the interpolant of grid
// samples. Candidate levels are the sample magnitudes; the best bracket is
// refined by golden section in log(lam).
inline NormValue weak_lp_norm(const GridFunction& f, const Weight& w,
                              double p) {
  detail::validate_index(p, "weak_lp_norm");
  std::vector<double> levels;
  for (double v : f.values()) {
    double av = std::abs(v);
    if (av > 0) levels.push_back(av);
  }
  if (levels.empty()) return {0.0, false, 0.0};
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  auto S = [&](double lam) {
    return lam * std::pow(detail::measure_above(f, w, lam), 1.0 / p);
  };
  double best_arg = 0, best_val = 0;
  std::vector<double> args;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    args.push_back(levels[i] * (1.0 - 1e-9));
    if (i + 1 < levels.size()) {
      args.push_back(std::sqrt(levels[i] * levels[i + 1]));
    }
  }
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < args.size(); ++i) {
    double v = S(args[i]);
    if (v > best_val) {
      best_val = v;
      best_arg = args[i];
      best_i = i;
    }
  }
  double lo = best_i > 0 ? args[best_i - 1] : best_arg * 0.5;
  double hi = best_i + 1 < args.size() ? args[best_i + 1] : best_arg * 2.0;
  detail::golden_refine(S, std::log(lo), std::log(hi), best_arg, best_val);
  return {best_val, false, 0.0};
}

// The kernel constant of the diagonal estimates:
//   ( integral of Phi(t)^(1/(1-beta)) |t|^(1/(q(1-beta)) - 1) dt )^(1-beta),
// with divergence probing at the origin and both tails.
inline NormValue k_constant(const Kernel& k, double beta, double q,
                            double tol = 1e-10) {
  if (!(beta >= 0) || !(beta < 1)) {
    throw DomainError("k_constant: beta must lie in [0, 1)");
  }
  detail::validate_index(q, "k_constant");
  double pe = 1.0 / (1.0 - beta);
  double we = 1.0 / (q * (1.0 - beta)) - 1.0;
  auto integrand = [&k, pe, we](double t) {
    if (t == 0.0) return 0.0;
    double phi = k.evaluate(t);
    if (phi == 0.0) return 0.0;
    return std::pow(phi, pe) * std::pow(std::abs(t), we);
  };
  auto r = probe_integrate(integrand, Interval(-kInf, kInf), tol,
                           k.breakpoints());
  NormValue out;
  out.divergent = r.divergent;
  out.value = r.divergent ? kInf : std::pow(r.value, 1.0 - beta);
  out.error = r.error;
  return out;
}

// The kernel constant of the power-weight estimates:
//   ( integral of |Phi(t)|^s |t|^((1+gamma) s / q - 1) dt )^(1/s).
inline NormValue k_general(const Kernel& k, double s, double q, double gamma,
                           double tol = 1e-10) {
  detail::validate_index(s, "k_general");
  detail::validate_index(q, "k_general");
  if (!(gamma > -1) || !std::isfinite(gamma)) {
    throw DomainError("k_general: gamma must exceed -1");
  }
  double we = (1.0 + gamma) * s / q - 1.0;
  auto integrand = [&k, s, we](double t) {
    if (t == 0.0) return 0.0;
    double phi = std::abs(k.evaluate(t));
    if (phi == 0.0) return 0.0;
    return std::pow(phi, s) * std::pow(std::abs(t), we);
  };
  auto r = probe_integrate(integrand, Interval(-kInf, kInf), tol,
                           k.breakpoints());
  NormValue out;
  out.divergent = r.divergent;
  out.value = r.divergent ? kInf : std::pow(r.value, 1.0 / s);
  out.error = r.error;
  return out;
}

// A two-weight constant together with its maximizing cutoff.
struct TwoWeightConstant {
  double value = 0;
  double maximizer = 0;
  bool divergent = false;
};

namespace detail {

// Shared sup-scan driver for the two-weight constants. factor1/factor2 map a
// cutoff to the two probe results; exponents apply outside. A divergent
// factor paired with a vanishing partner drops that cutoff; otherwise it
// marks the constant divergent.
inline TwoWeightConstant two_weight_sup(
    const std::function<ProbeResult(double)>& factor1, double e1,
    const std::function<ProbeResult(double)>& factor2, double e2,
    const Interval& search) {
  auto S = [&](double alpha) {
    ProbeResult r1 = factor1(alpha);
    ProbeResult r2 = factor2(alpha);
    if (r1.divergent) return r2.value == 0.0 ? 0.0 : kInf;
    if (r2.divergent) return r1.value == 0.0 ? 0.0 : kInf;
    return std::pow(r1.value, e1) * std::pow(r2.value, e2);
  };
  SupResult sup = sup_over_scale(S, search);
  return {sup.value, sup.arg, sup.divergent};
}

// Both cutoff integrals of a two-weight constant, with the exponents they
// carry into the product. Kept as closures so the sup scan and the flatness
// profile share one definition.
struct TwoWeightFactors {
  std::function<ProbeResult(double)> first;
  std::function<ProbeResult(double)> second;
  double e1 = 0;
  double e2 = 0;
};

inline TwoWeightFactors a_factors(const Weight& u, const Weight& v,
                                  const ExponentSet& e, double tol) {
  double pc = e.p_conj();
  double tail_exp = -e.q * (1.0 - e.beta);
  TwoWeightFactors fac;
  fac.first = [u, tail_exp, tol](double alpha) {
    auto f = [&](double x) { return u(x) * std::pow(x, tail_exp); };
    ProbeResult r = probe_integrate(f, Interval(alpha, kInf), tol,
                                    u.breakpoints());
    r.value *= 2.0;
    return r;
  };
  fac.second = [v, pc, tol](double alpha) {
    auto f = [&](double x) { return std::pow(v(x), 1.0 - pc); };
    ProbeResult r = probe_integrate(f, Interval(0.0, alpha), tol,
                                    v.breakpoints());
    r.value *= 2.0;
    return r;
  };
  fac.e1 = 1.0 / e.q;
  fac.e2 = 1.0 / pc;
  return fac;
}

inline TwoWeightFactors b_factors(const Weight& u, const Weight& v,
                                  const ExponentSet& e, double tol) {
  double pc = e.p_conj();
  double tail_exp = -(1.0 - e.beta) * pc;
  TwoWeightFactors fac;
  fac.first = [u, tol](double alpha) {
    auto f = [&](double x) { return u(x); };
    ProbeResult r = probe_integrate(f, Interval(0.0, alpha), tol,
                                    u.breakpoints());
    r.value *= 2.0;
    return r;
  };
  fac.second = [v, pc, tail_exp, tol](double alpha) {
    auto f = [&](double x) {
      return std::pow(v(x), 1.0 - pc) * std::pow(x, tail_exp);
    };
    ProbeResult r = probe_integrate(f, Interval(alpha, kInf), tol,
                                    v.breakpoints());
    r.value *= 2.0;
    return r;
  };
  fac.e1 = 1.0 / e.q;
  fac.e2 = 1.0 / pc;
  return fac;
}

}  // namespace detail

// sup over cutoffs alpha of
//   ( int_{|x| >= alpha} u(x) |x|^(-q(1-beta)) dx )^(1/q)
//   * ( int_{|x| <= alpha} v(x)^(1-p') dx )^(1/p').
inline TwoWeightConstant a_constant(const Weight& u, const Weight& v,
                                    const ExponentSet& e,
                                    const Interval& search = Interval(1e-6, 1e6),
                                    double tol = 1e-9) {
  auto fac = detail::a_factors(u, v, e, tol);
  return detail::two_weight_sup(fac.first, fac.e1, fac.second, fac.e2, search);
}

// sup over cutoffs alpha of
//   ( int_{|x| <= alpha} u(x) dx )^(1/q)
//   * ( int_{|x| >= alpha} v(x)^(1-p') |x|^(-(1-beta) p') dx )^(1/p').
inline TwoWeightConstant b_constant(const Weight& u, const Weight& v,
                                    const ExponentSet& e,
                                    const Interval& search = Interval(1e-6, 1e6),
                                    double tol = 1e-9) {
  auto fac = detail::b_factors(u, v, e, tol);
  return detail::two_weight_sup(fac.first, fac.e1, fac.second, fac.e2, search);
}

// A two-weight product evaluated on a log-spaced grid of cutoffs, with the
// spread statistics used to certify that the product does not depend on the
// cutoff (as happens when the weights match the operator's scaling).
struct CutoffProfile {
  std::vector<double> cutoffs;
  std::vector<double> products;
  double mean = 0;
  double rel_spread = 0;  // standard deviation over mean
  bool divergent = false;
};

namespace detail {

inline CutoffProfile two_weight_profile(const TwoWeightFactors& fac,
                                        const Interval& range, int count) {
  if (count < 2) {
    throw DomainError("two_weight_profile: need at least two cutoffs");
  }
  if (!range.finite() || !(range.lo > 0)) {
    throw DomainError("two_weight_profile: cutoff range must be positive");
  }
  CutoffProfile out;
  double llo = std::log(range.lo);
  double lhi = std::log(range.hi);
  for (int i = 0; i < count; ++i) {
    double alpha = std::exp(llo + (lhi - llo) * i / (count - 1.0));
    ProbeResult r1 = fac.first(alpha);
    ProbeResult r2 = fac.second(alpha);
    double prod;
    if (r1.divergent) {
      prod = r2.value == 0.0 ? 0.0 : kInf;
    } else if (r2.divergent) {
      prod = r1.value == 0.0 ? 0.0 : kInf;
    } else {
      prod = std::pow(r1.value, fac.e1) * std::pow(r2.value, fac.e2);
    }
    out.cutoffs.push_back(alpha);
    out.products.push_back(prod);
    if (!std::isfinite(prod)) out.divergent = true;
  }
  if (out.divergent) {
    out.mean = kInf;
    out.rel_spread = kInf;
    return out;
  }
  double s = 0;
  for (double p : out.products) s += p;
  out.mean = s / count;
  double var = 0;
  for (double p : out.products) var += (p - out.mean) * (p - out.mean);
  var /= count;
  out.rel_spread = out.mean > 0 ? std::sqrt(var) / out.mean : 0.0;
  return out;
}

}  // namespace detail

inline CutoffProfile a_constant_profile(const Weight& u, const Weight& v,
                                        const ExponentSet& e,
                                        const Interval& range, int count,
                                        double tol = 1e-9) {
  return detail::two_weight_profile(detail::a_factors(u, v, e, tol), range,
                                    count);
}

inline CutoffProfile b_constant_profile(const Weight& u, const Weight& v,
                                        const ExponentSet& e,
                                        const Interval& range, int count,
                                        double tol = 1e-9) {
  return detail::two_weight_profile(detail::b_factors(u, v, e, tol), range,
                                    count);
}

}  // namespace hausdorff
