#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "exponents.hpp"
#include "hausdorff_operator.hpp"
#include "kernels.hpp"
#include "norms.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "weights.hpp"

// Sharp-constant harness for the weighted bounds of the operator: extremal
// families that nearly saturate the two-weight constants, empirical norm
// ratios from nested quadrature, sandwich verdicts with explicit envelope
// constants, localized averaging checks, and a Young inequality check for
// multiplicative convolution.

namespace hausdorff {

// Which cutoff integral a test function is built to saturate: mass piled
// inside the cutoff against the core factor, or spread outside it against
// the tail factor.
enum class ExtremalKind { inner, outer };

// Nonnegative test function attached to a cutoff a:
//   inner:  v(x)^(1-p') on |x| <= a,
//   outer:  v(x)^(1-p') |x|^(-(1-beta)(p'-1)) on |x| >= a.
// Either choice turns the corresponding factor of the two-weight product
// into the p-th power of its own norm.
inline RealFunction extremal_test_function(ExtremalKind kind, const Weight& v,
                                           const ExponentSet& e, double a) {
  if (!(a > 0) || !std::isfinite(a)) {
    throw DomainError("extremal_test_function: cutoff must be positive");
  }
  double pc = e.p_conj();
  RealFunction f;
  if (kind == ExtremalKind::inner) {
    f.fn = [v, pc, a](double x) {
      return std::abs(x) <= a ? std::pow(v(x), 1.0 - pc) : 0.0;
    };
    f.support_radius = a;
  } else {
    double r = -(1.0 - e.beta) * (pc - 1.0);
    f.fn = [v, pc, r, a](double x) {
      double ax = std::abs(x);
      return ax >= a ? std::pow(v(x), 1.0 - pc) * std::pow(ax, r) : 0.0;
    };
  }
  f.breakpoints = {-a, a};
  for (double b : v.breakpoints()) f.breakpoints.push_back(b);
  return f;
}

// A family of test functions indexed by scale.
struct TestFamily {
  std::vector<RealFunction> members;
  std::vector<double> scales;
};

inline TestFamily extremal_family(ExtremalKind kind, const Weight& v,
                                  const ExponentSet& e, const Interval& scales,
                                  int count) {
  if (count < 1) throw DomainError("extremal_family: need at least one member");
  if (!scales.finite() || !(scales.lo > 0)) {
    throw DomainError("extremal_family: scale range must be positive");
  }
  TestFamily fam;
  double llo = std::log(scales.lo);
  double lhi = std::log(scales.hi);
  for (int i = 0; i < count; ++i) {
    double a = count == 1 ? scales.lo
                          : std::exp(llo + (lhi - llo) * i / (count - 1.0));
    fam.members.push_back(extremal_test_function(kind, v, e, a));
    fam.scales.push_back(a);
  }
  return fam;
}

// Image of a closed-form function under the operator, packaged for the outer
// quadrature of its norm. Breakpoints of the image sit at products of kernel
// and argument breakpoint magnitudes; a kernel supported inside |t| <= T maps
// support |y| <= R to support |x| <= T R.
inline RealFunction hausdorff_image(const Kernel& k, double beta,
                                    const RealFunction& f,
                                    double tol = 1e-9) {
  RealFunction g;
  g.fn = [k, beta, f, tol](double x) {
    return apply_hausdorff(k, beta, f, x, tol);
  };
  std::vector<double> mags;
  for (double tb : k.breakpoints()) {
    for (double fb : f.breakpoints) {
      mags.push_back(std::abs(tb) * std::abs(fb));
    }
    if (std::isfinite(f.support_radius)) {
      mags.push_back(std::abs(tb) * f.support_radius);
    }
  }
  if (std::isfinite(f.support_radius)) {
    mags.push_back(f.support_radius * k.support_lo());
    if (std::isfinite(k.support_hi())) {
      mags.push_back(f.support_radius * k.support_hi());
    }
  }
  for (double m : mags) {
    if (m > 0 && std::isfinite(m)) {
      g.breakpoints.push_back(m);
      g.breakpoints.push_back(-m);
    }
  }
  if (std::isfinite(f.support_radius) && std::isfinite(k.support_hi())) {
    g.support_radius = k.support_hi() * f.support_radius;
  }
  return g;
}

// One member of an empirical scan.
struct RatioSample {
  double scale = 0;
  double numerator = 0;    // || image ||_{L^q_u}
  double denominator = 0;  // || argument ||_{L^p_v}
  double ratio = 0;
  bool usable = false;
  std::string note;  // why the member was skipped, when it was
};

struct EmpiricalNorm {
  double best = 0;  // largest usable ratio
  double best_scale = 0;
  int usable = 0;
  bool divergent = false;  // some image norm diverged: no finite bound
  std::vector<RatioSample> samples;
};

namespace detail {

// Largest norm ratio over a family of arguments, where the caller supplies
// how an argument maps to its image.
inline EmpiricalNorm empirical_ratio_scan(
    const std::function<RealFunction(const RealFunction&)>& image_of,
    const ExponentSet& e, const Weight& u, const Weight& v,
    const TestFamily& family, double tol) {
  if (family.members.empty()) {
    throw DomainError("empirical norm scan: family is empty");
  }
  if (family.scales.size() != family.members.size()) {
    throw DomainError("empirical norm scan: scale labels do not match family");
  }
  EmpiricalNorm out;
  out.samples.resize(family.members.size());
  parallel_for(static_cast<int>(family.members.size()), [&](int i) {
    RatioSample s;
    s.scale = family.scales[i];
    NormValue den = weighted_lp_norm(family.members[i], v, e.p, tol);
    if (den.divergent) {
      s.note = "argument norm diverges";
    } else if (!(den.value > 0)) {
      s.note = "argument norm vanishes";
    } else {
      s.denominator = den.value;
      try {
        NormValue num = weighted_lp_norm(image_of(family.members[i]), u, e.q,
                                         tol);
        if (num.divergent) {
          s.note = "image norm diverges";
          s.numerator = kInf;
          s.ratio = kInf;
        } else {
          s.numerator = num.value;
          s.ratio = num.value / den.value;
          s.usable = true;
        }
      } catch (const DivergenceError& de) {
        s.note = de.what();
        s.numerator = kInf;
        s.ratio = kInf;
      } catch (const ConvergenceError& ce) {
        s.note = std::string("image quadrature failed to converge: ") +
                 ce.what();
      }
    }
    out.samples[i] = std::move(s);
  });
  for (const auto& s : out.samples) {
    if (s.ratio == kInf) out.divergent = true;
    if (!s.usable) continue;
    ++out.usable;
    if (s.ratio > out.best) {
      out.best = s.ratio;
      out.best_scale = s.scale;
    }
  }
  return out;
}

}  // namespace detail

// Largest ratio || h f ||_{L^q_u} / || f ||_{L^p_v} over the family.
inline EmpiricalNorm empirical_operator_norm(const Kernel& k,
                                             const ExponentSet& e,
                                             const Weight& u, const Weight& v,
                                             const TestFamily& family,
                                             double tol = 1e-8) {
  auto image_of = [&k, &e, tol](const RealFunction& f) {
    return hausdorff_image(k, e.beta, f, tol / 10);
  };
  return detail::empirical_ratio_scan(image_of, e, u, v, family, tol);
}

// Outcome of a sandwich verification: explicit lower and upper bounds for
// the best constant, and the empirical ratio that must land between them.
struct SandwichReport {
  double two_weight = 0;      // the A- or B-type constant
  double two_weight_arg = 0;  // its maximizing cutoff
  double lower = 0;           // envelope constant times the two-weight constant
  double upper = 0;           // explicit closed-form upper bound
  double k_value = 0;         // scale-integral constant of the kernel
  double k_core = 0;          // part of its defining integral over |t| <= 1
  double k_tail = 0;          // part over |t| >= 1
  BoundsReport envelope;
  EmpiricalNorm empirical;
  bool lower_ok = false;
  bool upper_ok = false;
  bool pass = false;
  std::vector<std::string> notes;
};

namespace detail {

// Split of the kernel's scale integral at |t| = 1, with divergence flags.
struct KernelScaleSplit {
  double core = 0, tail = 0;
  bool core_divergent = false, tail_divergent = false;
};

inline KernelScaleSplit kernel_scale_split(const Kernel& k, double beta,
                                           double q, double tol = 1e-10) {
  double pe = 1.0 / (1.0 - beta);
  double we = 1.0 / (q * (1.0 - beta)) - 1.0;
  auto integrand = [&k, pe, we](double t) {
    if (t == 0.0) return 0.0;
    double phi = k.evaluate(t);
    if (phi == 0.0) return 0.0;
    return std::pow(phi, pe) * std::pow(std::abs(t), we);
  };
  KernelScaleSplit split;
  auto core = probe_integrate(integrand, Interval(-1.0, 1.0), tol,
                              k.breakpoints());
  split.core = core.value;
  split.core_divergent = core.divergent;
  auto left = probe_integrate(integrand, Interval(-kInf, -1.0), tol,
                              k.breakpoints());
  auto right = probe_integrate(integrand, Interval(1.0, kInf), tol,
                               k.breakpoints());
  split.tail = left.value + right.value;
  split.tail_divergent = left.divergent || right.divergent;
  return split;
}

inline void require(bool ok, const std::string& what) {
  if (!ok) throw PreconditionError("sandwich hypothesis fails: " + what);
}

inline LogGrid envelope_probe_grid() { return make_log_grid(1e-4, 1e4, 320); }

}  // namespace detail

// Verifies the sandwich for increasing weights. Hypotheses (violations raise
// PreconditionError): 1 < p, q < infinity with 1/p - 1/q = beta, q(1-beta)
// > 1, u and v even and nondecreasing in |x|, the kernel nonnegative with
// C1 |t|^(beta-1) <= Phi(t) <= C2 |t|^(beta-1) for |t| >= 1, and the scale
// integral finite over |t| <= 1. Then with A the tail/core two-weight
// constant and K the full scale-integral constant, the best constant C of
// || h f ||_{L^q_u} <= C || f ||_{L^p_v} satisfies
//   C1 A <= C <= 2^(1/q') A { K 2^(beta-1) [q(1-beta)-1]^(1/q) (1+2^(1/q'))
//                             + C2 (p')^(1/p') p^(1/q) }.
// The report carries both bounds and the empirical ratio over the family.
inline SandwichReport verify_sandwich_increasing(
    const Kernel& k, const ExponentSet& e, const Weight& u, const Weight& v,
    double C1, double C2, const TestFamily& family, double verdict_tol = 1e-3) {
  detail::require(e.p > 1 && std::isfinite(e.p), "p must lie in (1, inf)");
  detail::require(e.q > 1 && std::isfinite(e.q), "q must lie in (1, inf)");
  detail::require(e.beta >= 0 && e.beta < 1, "beta must lie in [0, 1)");
  detail::require(e.q * (1.0 - e.beta) > 1.0, "q (1 - beta) must exceed 1");
  detail::require(e.lebesgue_diagonal(1e-9), "1/p - 1/q must equal beta");
  detail::require(u.increasing(), "u must be nondecreasing in |x|");
  detail::require(v.increasing(), "v must be nondecreasing in |x|");

  SandwichReport rep;
  KernelBounds env{C1, C2, BoundsRegion::outside_unit, e.beta};
  rep.envelope = verify_bounds(k, env, detail::envelope_probe_grid());
  detail::require(rep.envelope.pass,
                  "kernel escapes the declared envelope outside the unit "
                  "interval");
  auto split = detail::kernel_scale_split(k, e.beta, e.q);
  rep.k_core = split.core;
  rep.k_tail = split.tail;
  detail::require(!split.core_divergent,
                  "scale integral of the kernel diverges inside the unit "
                  "interval");
  if (split.tail_divergent) {
    // Cannot happen under the envelope with q(1-beta) > 1; treat defensively.
    rep.notes.push_back("scale integral diverges outside the unit interval");
    rep.k_value = kInf;
  } else {
    rep.k_value = std::pow(split.core + split.tail, 1.0 - e.beta);
  }

  TwoWeightConstant A = a_constant(u, v, e);
  rep.two_weight = A.divergent ? kInf : A.value;
  rep.two_weight_arg = A.maximizer;
  rep.lower = C1 > 0 ? C1 * rep.two_weight : 0.0;
  double qc = e.q_conj();
  double pc = e.p_conj();
  double bracket = rep.k_value * std::pow(2.0, e.beta - 1.0) *
                       std::pow(e.q * (1.0 - e.beta) - 1.0, 1.0 / e.q) *
                       (1.0 + std::pow(2.0, 1.0 / qc)) +
                   C2 * std::pow(pc, 1.0 / pc) * std::pow(e.p, 1.0 / e.q);
  rep.upper = std::pow(2.0, 1.0 / qc) * rep.two_weight * bracket;
  if (A.divergent) {
    rep.notes.push_back(
        "two-weight constant diverges: the operator is unbounded between "
        "these spaces");
    return rep;
  }

  rep.empirical = empirical_operator_norm(k, e, u, v, family);
  rep.lower_ok = rep.empirical.best >= rep.lower * (1.0 - verdict_tol);
  rep.upper_ok = !rep.empirical.divergent &&
                 rep.empirical.best <= rep.upper * (1.0 + verdict_tol);
  rep.pass = rep.lower_ok && rep.upper_ok && rep.empirical.usable > 0;
  return rep;
}

// Verifies the sandwich for decreasing weights. Hypotheses: 1 < p, q <
// infinity with 1/p - 1/q = beta, p'(1-beta) > 1, u and v even and
// nonincreasing in |x|, the kernel nonnegative with C1 <= Phi(t) <= C2 for
// |t| <= 1, and the scale integral finite over |t| >= 1. Then with B the
// core/tail two-weight constant,
//   C1 B <= C <= 2^(1/q') B { K 2^(beta-1) [p'(1-beta)-1]^(1/p') (1+2^(1/q'))
//                             + C2 (p')^(1/p') p^(1/q) }.
inline SandwichReport verify_sandwich_decreasing(
    const Kernel& k, const ExponentSet& e, const Weight& u, const Weight& v,
    double C1, double C2, const TestFamily& family, double verdict_tol = 1e-3) {
  detail::require(e.p > 1 && std::isfinite(e.p), "p must lie in (1, inf)");
  detail::require(e.q > 1 && std::isfinite(e.q), "q must lie in (1, inf)");
  detail::require(e.beta >= 0 && e.beta < 1, "beta must lie in [0, 1)");
  double pc = e.p_conj();
  detail::require(pc * (1.0 - e.beta) > 1.0, "p' (1 - beta) must exceed 1");
  detail::require(e.lebesgue_diagonal(1e-9), "1/p - 1/q must equal beta");
  detail::require(u.decreasing(), "u must be nonincreasing in |x|");
  detail::require(v.decreasing(), "v must be nonincreasing in |x|");

  SandwichReport rep;
  KernelBounds env{C1, C2, BoundsRegion::inside_unit, e.beta};
  rep.envelope = verify_bounds(k, env, detail::envelope_probe_grid());
  detail::require(rep.envelope.pass,
                  "kernel escapes the declared envelope inside the unit "
                  "interval");
  auto split = detail::kernel_scale_split(k, e.beta, e.q);
  rep.k_core = split.core;
  rep.k_tail = split.tail;
  detail::require(!split.tail_divergent,
                  "scale integral of the kernel diverges outside the unit "
                  "interval");
  if (split.core_divergent) {
    rep.notes.push_back("scale integral diverges inside the unit interval");
    rep.k_value = kInf;
  } else {
    rep.k_value = std::pow(split.core + split.tail, 1.0 - e.beta);
  }

  TwoWeightConstant B = b_constant(u, v, e);
  rep.two_weight = B.divergent ? kInf : B.value;
  rep.two_weight_arg = B.maximizer;
  rep.lower = C1 > 0 ? C1 * rep.two_weight : 0.0;
  double qc = e.q_conj();
  double bracket = rep.k_value * std::pow(2.0, e.beta - 1.0) *
                       std::pow(pc * (1.0 - e.beta) - 1.0, 1.0 / pc) *
                       (1.0 + std::pow(2.0, 1.0 / qc)) +
                   C2 * std::pow(pc, 1.0 / pc) * std::pow(e.p, 1.0 / e.q);
  rep.upper = std::pow(2.0, 1.0 / qc) * rep.two_weight * bracket;
  if (B.divergent) {
    rep.notes.push_back(
        "two-weight constant diverges: the operator is unbounded between "
        "these spaces");
    return rep;
  }

  rep.empirical = empirical_operator_norm(k, e, u, v, family);
  rep.lower_ok = rep.empirical.best >= rep.lower * (1.0 - verdict_tol);
  rep.upper_ok = !rep.empirical.divergent &&
                 rep.empirical.best <= rep.upper * (1.0 + verdict_tol);
  rep.pass = rep.lower_ok && rep.upper_ok && rep.empirical.usable > 0;
  return rep;
}

// Image of a nonnegative function under one of the localized averaging
// operators:
//   inner:  x -> |x|^(beta-1) * integral of f over |y| <= |x|,
//   outer:  x -> integral of |y|^(beta-1) f(y) over |y| >= |x|.
inline RealFunction localized_average_image(ExtremalKind kind, double beta,
                                            const RealFunction& f,
                                            double tol = 1e-9) {
  RealFunction g;
  std::vector<double> mags;
  for (double b : f.breakpoints) {
    double m = std::abs(b);
    if (m > 0 && std::isfinite(m)) mags.push_back(m);
  }
  if (std::isfinite(f.support_radius)) mags.push_back(f.support_radius);
  for (double m : mags) {
    g.breakpoints.push_back(m);
    g.breakpoints.push_back(-m);
  }
  if (kind == ExtremalKind::inner) {
    g.fn = [beta, f, mags, tol](double x) {
      double ax = std::abs(x);
      auto F = [&f](double y) { return f(y) + f(-y); };
      double cap = std::isfinite(f.support_radius)
                       ? std::min(ax, f.support_radius)
                       : ax;
      if (!(cap > 0)) return 0.0;
      double mass = integrate(F, Interval(0.0, cap), tol, mags);
      return std::pow(ax, beta - 1.0) * mass;
    };
  } else {
    g.fn = [beta, f, mags, tol](double x) {
      double ax = std::abs(x);
      auto integrand = [&f, beta](double y) {
        return std::pow(y, beta - 1.0) * (f(y) + f(-y));
      };
      auto r = probe_integrate(integrand, Interval(ax, kInf), tol, mags);
      if (r.divergent) {
        throw DivergenceError(
            "localized average: tail integral diverges at x = " +
                std::to_string(x),
            r.value);
      }
      return r.value;
    };
    g.support_radius = f.support_radius;
  }
  return g;
}

// Outcome of a localized averaging check: the empirical ratio over a family
// of nonnegative arguments must land in [T, T (p')^(1/p') p^(1/q)] where T
// is the matching two-weight constant (tail/core for inner, core/tail for
// outer). Hypotheses: 1 < p <= q < infinity, beta in [0, 1).
struct LocalizedAverageReport {
  double two_weight = 0;
  double two_weight_arg = 0;
  double bracket_lo = 0;
  double bracket_hi = 0;
  EmpiricalNorm empirical;
  bool pass = false;
};

inline LocalizedAverageReport localized_average_check(
    ExtremalKind kind, const ExponentSet& e, const Weight& u, const Weight& v,
    const TestFamily& family, double verdict_tol = 1e-3) {
  if (!(e.p > 1) || !(e.q >= e.p) || !std::isfinite(e.q)) {
    throw PreconditionError(
        "localized average check: need 1 < p <= q < inf");
  }
  if (!(e.beta >= 0) || !(e.beta < 1)) {
    throw PreconditionError("localized average check: beta must lie in [0, 1)");
  }
  LocalizedAverageReport rep;
  TwoWeightConstant T = kind == ExtremalKind::inner ? a_constant(u, v, e)
                                                    : b_constant(u, v, e);
  rep.two_weight = T.divergent ? kInf : T.value;
  rep.two_weight_arg = T.maximizer;
  double pc = e.p_conj();
  rep.bracket_lo = rep.two_weight;
  rep.bracket_hi =
      rep.two_weight * std::pow(pc, 1.0 / pc) * std::pow(e.p, 1.0 / e.q);
  if (T.divergent) return rep;
  auto image_of = [kind, &e](const RealFunction& f) {
    return localized_average_image(kind, e.beta, f);
  };
  rep.empirical = detail::empirical_ratio_scan(image_of, e, u, v, family, 1e-8);
  rep.pass = rep.empirical.usable > 0 && !rep.empirical.divergent &&
             rep.empirical.best >= rep.bracket_lo * (1.0 - verdict_tol) &&
             rep.empirical.best <= rep.bracket_hi * (1.0 + verdict_tol);
  return rep;
}

// Rectangle-rule L^p norm in the log variable, the measure under which the
// discrete multiplicative convolution is a plain convolution. Using the same
// rule on both sides makes the Young inequality exact for the discrete
// objects, so a failure indicates a bug rather than quadrature error.
inline double log_lp_norm(const PosGridFunction& f, double p) {
  detail::validate_index(p, "log_lp_norm");
  double acc = 0;
  for (double val : f.values()) acc += std::pow(std::abs(val), p);
  return std::pow(f.grid().du() * acc, 1.0 / p);
}

struct YoungCheck {
  double q = 0;    // target exponent, 1 + 1/q = 1/p + 1/s
  double lhs = 0;  // || f * g ||_q on the product grid
  double rhs = 0;  // || f ||_p || g ||_s
  bool pass = false;
};

inline YoungCheck young_mult_check(const PosGridFunction& f,
                                   const PosGridFunction& g, double p,
                                   double s, double slack = 1e-6) {
  if (!(p >= 1) || !(s >= 1) || !std::isfinite(p) || !std::isfinite(s)) {
    throw DomainError("young_mult_check: exponents must lie in [1, inf)");
  }
  double inv_q = 1.0 / p + 1.0 / s - 1.0;
  if (!(inv_q > 0)) {
    throw DomainError(
        "young_mult_check: exponent pair admits no finite target index");
  }
  YoungCheck out;
  out.q = 1.0 / inv_q;
  out.lhs = log_lp_norm(mult_convolve(f, g), out.q);
  out.rhs = log_lp_norm(f, p) * log_lp_norm(g, s);
  out.pass = out.lhs <= out.rhs + slack;
  return out;
}

}  // namespace hausdorff
