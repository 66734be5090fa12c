#pragma once

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"

namespace hausdorff {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Interval of the extended real line, lo < hi; endpoints may be infinite.
struct Interval {
  double lo;
  double hi;

  Interval(double lo, double hi) : lo(lo), hi(hi) {
    if (std::isnan(lo) || std::isnan(hi) || !(lo < hi)) {
      throw DomainError("Interval: endpoints must satisfy lo < hi");
    }
  }

  bool finite() const { return std::isfinite(lo) && std::isfinite(hi); }
  bool contains(double x) const { return lo < x && x < hi; }
  double length() const { return hi - lo; }
};

namespace detail {

struct SegmentValue {
  double value = 0;
  double error = 0;  // absolute error estimate
  double l1 = 0;
};

// One boost quadrature call on a segment with no interior structure.
// Finite segments use tanh-sinh (endpoint singularities allowed); segments
// with an endpoint at 0 are rescaled onto (0, 1) so astronomically small or
// large spans keep healthy abscissa resolution. A half-line with its finite
// end at c != 0 is folded onto (0, 1) by x -> c/w, which turns power decay at
// infinity into an integrable endpoint singularity that tanh-sinh is built
// for; half-lines anchored at 0 split at magnitude 1 first. The remaining
// shapes fall back to exp-sinh / sinh-sinh.
inline SegmentValue integrate_segment(const std::function<double(double)>& f,
                                      double lo, double hi, double tol);

inline SegmentValue integrate_segment_raw(
    const std::function<double(double)>& f, double lo, double hi, double tol) {
  using namespace boost::math::quadrature;
  SegmentValue r;
  // Staged products below keep f values that underflow to zero from being
  // multiplied into inf * 0 at the extreme end of a fold.
  try {
    if (lo == 0.0 && std::isfinite(hi)) {
      auto g = [&](double s) {
        double v = f(hi * s);
        return v == 0.0 ? 0.0 : v * hi;
      };
      static thread_local tanh_sinh<double> ts;
      r.value = ts.integrate(g, 0.0, 1.0, tol, &r.error, &r.l1);
    } else if (hi == 0.0 && std::isfinite(lo)) {
      auto g = [&](double s) {
        double v = f(lo * s);
        return v == 0.0 ? 0.0 : v * (-lo);
      };
      static thread_local tanh_sinh<double> ts;
      r.value = ts.integrate(g, 0.0, 1.0, tol, &r.error, &r.l1);
    } else if (std::isfinite(lo) && std::isfinite(hi)) {
      static thread_local tanh_sinh<double> ts;
      r.value = ts.integrate(f, lo, hi, tol, &r.error, &r.l1);
    } else if (std::isfinite(lo) && lo > 0) {
      auto g = [&](double w) {
        double x = lo / w;
        double v = f(x);
        if (v == 0.0) return 0.0;
        return (v * x) / w;
      };
      static thread_local tanh_sinh<double> ts;
      r.value = ts.integrate(g, 0.0, 1.0, tol, &r.error, &r.l1);
    } else if (std::isfinite(hi) && hi < 0) {
      auto g = [&](double w) {
        double x = hi / w;
        double v = f(x);
        if (v == 0.0) return 0.0;
        return (v * (-x)) / w;
      };
      static thread_local tanh_sinh<double> ts;
      r.value = ts.integrate(g, 0.0, 1.0, tol, &r.error, &r.l1);
    } else if (std::isfinite(lo)) {
      static thread_local exp_sinh<double> es;
      auto g = [&](double t) { return f(lo + t); };
      r.value = es.integrate(g, tol, &r.error, &r.l1);
    } else if (std::isfinite(hi)) {
      static thread_local exp_sinh<double> es;
      auto g = [&](double t) { return f(hi - t); };
      r.value = es.integrate(g, tol, &r.error, &r.l1);
    } else {
      static thread_local sinh_sinh<double> ss;
      r.value = ss.integrate(f, tol, &r.error, &r.l1);
    }
  } catch (const DomainError&) {
    throw;
  } catch (const std::exception& e) {
    // boost throws when the integrand evaluates non-finite near a singular
    // point; surface it as a convergence failure with an unknown bound.
    throw ConvergenceError(
        std::string("quadrature abandoned on segment: ") + e.what(),
        std::numeric_limits<double>::quiet_NaN(), kInf);
  }
  if (!std::isfinite(r.value)) {
    throw ConvergenceError("quadrature produced a non-finite value",
                           std::numeric_limits<double>::quiet_NaN(), kInf);
  }
  return r;
}

inline SegmentValue integrate_segment(const std::function<double(double)>& f,
                                      double lo, double hi, double tol) {
  if (lo == 0.0 && hi == kInf) {
    auto a = integrate_segment_raw(f, 0.0, 1.0, tol);
    auto b = integrate_segment_raw(f, 1.0, kInf, tol);
    return {a.value + b.value, a.error + b.error, a.l1 + b.l1};
  }
  if (lo == -kInf && hi == 0.0) {
    auto a = integrate_segment_raw(f, -kInf, -1.0, tol);
    auto b = integrate_segment_raw(f, -1.0, 0.0, tol);
    return {a.value + b.value, a.error + b.error, a.l1 + b.l1};
  }
  return integrate_segment_raw(f, lo, hi, tol);
}

inline std::vector<double> split_points(const Interval& domain,
                                        const std::vector<double>& breakpoints) {
  std::vector<double> pts;
  pts.push_back(domain.lo);
  for (double b : breakpoints) {
    if (std::isfinite(b) && domain.contains(b)) pts.push_back(b);
  }
  // Never integrate across the origin or to infinity in one stretch.
  if (domain.contains(0.0)) pts.push_back(0.0);
  if (!std::isfinite(domain.lo)) {
    double anchor = std::isfinite(domain.hi) ? domain.hi - 1.0 : -1.0;
    if (domain.contains(anchor)) pts.push_back(anchor);
  }
  if (!std::isfinite(domain.hi)) {
    double anchor = std::isfinite(domain.lo) ? domain.lo + 1.0 : 1.0;
    if (domain.contains(anchor)) pts.push_back(anchor);
  }
  pts.push_back(domain.hi);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  // Collapse split points within a few ulps of each other: they describe
  // structure below double resolution and leave razor-thin segments whose
  // error estimates are meaningless. Domain endpoints and the origin win.
  auto special = [&](double p) {
    return p == domain.lo || p == domain.hi || p == 0.0;
  };
  const double ulp = 16.0 * std::numeric_limits<double>::epsilon();
  for (std::size_t i = 1; i < pts.size();) {
    if (!std::isfinite(pts[i - 1]) || !std::isfinite(pts[i])) {
      ++i;
      continue;
    }
    double gap = pts[i] - pts[i - 1];
    double scale = std::max(std::abs(pts[i - 1]), std::abs(pts[i]));
    if (gap <= ulp * scale) {
      if (special(pts[i]) && !special(pts[i - 1])) {
        pts.erase(pts.begin() + (i - 1));
      } else if (!special(pts[i])) {
        pts.erase(pts.begin() + i);
      } else {
        ++i;  // both special: keep both
      }
    } else {
      ++i;
    }
  }
  return pts;
}

}  // namespace detail

// Adaptive quadrature of f over domain with the listed interior breakpoints
// split out. Endpoint singularities are handled by the underlying double
// exponential rules. Throws ConvergenceError when the requested tolerance is
// not met, carrying the partial estimate and the residual bound.
inline double integrate(const std::function<double(double)>& f,
                        const Interval& domain, double tol = 1e-10,
                        const std::vector<double>& breakpoints = {}) {
  if (!(tol > 0) || !std::isfinite(tol)) {
    throw DomainError("integrate: tolerance must be positive and finite");
  }
  auto pts = detail::split_points(domain, breakpoints);
  double total = 0, err = 0, l1 = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    auto seg = detail::integrate_segment(f, pts[i], pts[i + 1], tol);
    total += seg.value;
    err += seg.error;
    l1 += seg.l1;
  }
  double scale = std::max(l1, 1e-300);
  if (err / scale > std::max(1e-6, 100 * tol)) {
    throw ConvergenceError("integrate: tolerance not reached", total, err);
  }
  return total;
}

// Result of a divergence-aware quadrature.
struct ProbeResult {
  double value = 0;
  double error = 0;
  bool divergent = false;
};

namespace detail {

inline constexpr double kShellRatio = 1000.0;
inline constexpr int kMaxShells = 12;

// Integrates f from a positive anchor toward `end`, which must be 0 or +inf
// (callers reflect negative segments). A direct double-exponential pass over
// the whole stretch settles the common case; the geometric shell schedule
// only runs when that pass fails, and classifies divergence when the
// accumulated value doubles across two consecutive shells or the schedule
// runs out while the increments are still alive.
inline ProbeResult shell_integrate(const std::function<double(double)>& f,
                                   double anchor, double end, double tol) {
  if (!(anchor > 0) || !std::isfinite(anchor) || (end != 0.0 && end != kInf)) {
    throw DomainError("shell_integrate: anchor must be positive, end 0 or inf");
  }
  ProbeResult out;
  const bool toward_zero = (end == 0.0);
  auto settled = [tol](const SegmentValue& seg) {
    return seg.error / std::max(seg.l1, 1e-300) <= std::max(1e-6, 100 * tol);
  };
  try {
    SegmentValue seg = toward_zero
                           ? integrate_segment(f, 0.0, anchor, tol)
                           : integrate_segment(f, anchor, kInf, tol);
    if (settled(seg)) {
      out.value = seg.value;
      out.error = seg.error;
      return out;
    }
  } catch (const ConvergenceError&) {
    // Fall through.
  }
  // Second attempt in the log variable: near-critical power laws x^(d-1)
  // with small d, which the direct pass cannot certify, become clean
  // exponentials exp(d u). The u-range is clipped so exp(u) stays a normal
  // double and f never sees over- or underflowing arguments; the mass beyond
  // the clip is recovered from the integrand's decay rate at the clip edge
  // (exact for power laws) and counted in full as error, so anything the
  // extrapolation cannot certify still falls through to the shells.
  try {
    auto g = [&f](double u) {
      double x = std::exp(u);
      if (x == 0.0 || !std::isfinite(x)) return 0.0;
      double v = f(x);
      return v == 0.0 ? 0.0 : v * x;
    };
    const double clip = 700.0;
    double u_anchor = std::log(anchor);
    double u_lo = toward_zero ? -clip : u_anchor;
    double u_hi = toward_zero ? u_anchor : clip;
    if (u_lo < u_hi) {
      SegmentValue seg = integrate_segment(g, u_lo, u_hi, tol);
      double u_edge = toward_zero ? u_lo : u_hi;
      double width = std::min(std::log(kShellRatio), u_hi - u_lo);
      double u_in = toward_zero ? u_edge + width : u_edge - width;
      double g_edge = g(u_edge), g_in = g(u_in);
      bool certified = false;
      if (g_edge == 0.0) {
        certified = true;
      } else if (std::abs(g_edge) < std::abs(g_in)) {
        double rate = std::log(std::abs(g_in) / std::abs(g_edge)) / width;
        double tail = g_edge / rate;
        seg.value += tail;
        seg.error += std::abs(tail);
        certified = true;
      }
      if (certified && settled(seg)) {
        out.value = seg.value;
        out.error = seg.error;
        return out;
      }
    }
  } catch (const ConvergenceError&) {
    // Fall through to the shell classifier.
  }
  double edge = anchor;
  int doubled = 0, quiet = 0;
  double last_inc = 0;
  for (int k = 0; k < kMaxShells; ++k) {
    double next = toward_zero ? edge / kShellRatio : edge * kShellRatio;
    double a = toward_zero ? next : edge;
    double b = toward_zero ? edge : next;
    SegmentValue seg;
    try {
      seg = integrate_segment(f, a, b, tol);
    } catch (const ConvergenceError&) {
      // Blow-up inside a shell: divergent.
      out.divergent = true;
      return out;
    }
    double before = std::abs(out.value);
    out.value += seg.value;
    out.error += seg.error;
    double after = std::abs(out.value);
    if (before > 1e-280 && after >= 2.0 * before) {
      if (++doubled >= 2) {
        out.divergent = true;
        return out;
      }
    } else {
      doubled = 0;
    }
    last_inc = std::abs(seg.value);
    if (last_inc <= std::max(tol * after, 1e-300)) {
      if (++quiet >= 2) return out;
    } else {
      quiet = 0;
    }
    edge = next;
  }
  // Schedule exhausted with the increments still alive: divergent (covers
  // logarithmic growth, where no doubling ever happens).
  if (last_inc > std::max(1e3 * tol * std::abs(out.value), 1e-250)) {
    out.divergent = true;
  }
  out.error += last_inc;
  return out;
}

}  // namespace detail

// Quadrature that classifies divergence instead of throwing. Ends that are
// infinite or exactly zero are approached through geometric shells; interior
// breakpoints are split out. Intended for nonnegative integrands (norms,
// weight measures, kernel constants); the caller splits at the origin when
// the integrand can be singular there.
inline ProbeResult probe_integrate(const std::function<double(double)>& f,
                                   const Interval& domain, double tol = 1e-9,
                                   const std::vector<double>& breakpoints = {}) {
  auto pts = detail::split_points(domain, breakpoints);
  ProbeResult out;
  auto reflected = [&f](double t) { return f(-t); };
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double a = pts[i], b = pts[i + 1];
    ProbeResult part;
    bool lo_probe = !std::isfinite(a) || a == 0.0;
    bool hi_probe = !std::isfinite(b) || b == 0.0;
    if (lo_probe && hi_probe) {
      // Both ends delicate, e.g. (0, inf) or (-inf, 0) with no interior
      // breakpoint: split at magnitude 1 and recurse once.
      double mid;
      if (a == 0.0) {
        mid = std::isfinite(b) ? std::min(1.0, 0.5 * b) : 1.0;
      } else if (b == 0.0) {
        mid = std::isfinite(a) ? std::max(-1.0, 0.5 * a) : -1.0;
      } else {
        mid = 0.0;  // unreachable: the origin is always a split point
      }
      auto left = probe_integrate(f, Interval(a, mid), tol);
      auto right = probe_integrate(f, Interval(mid, b), tol);
      part.value = left.value + right.value;
      part.error = left.error + right.error;
      part.divergent = left.divergent || right.divergent;
    } else if (hi_probe) {
      // [a, +inf) with a > 0, or [a, 0) with a < 0.
      part = (b == 0.0) ? detail::shell_integrate(reflected, -a, 0.0, tol)
                        : detail::shell_integrate(f, a, kInf, tol);
    } else if (lo_probe) {
      // (0, b] with b > 0, or (-inf, b] with b < 0.
      part = (a == 0.0) ? detail::shell_integrate(f, b, 0.0, tol)
                        : detail::shell_integrate(reflected, -b, kInf, tol);
    } else {
      detail::SegmentValue seg;
      try {
        seg = detail::integrate_segment(f, a, b, tol);
      } catch (const ConvergenceError&) {
        part.divergent = true;
      }
      part.value = seg.value;
      part.error = seg.error;
    }
    out.value += part.value;
    out.error += part.error;
    out.divergent = out.divergent || part.divergent;
    if (out.divergent) break;
  }
  return out;
}

// Supremum scan over a positive scale parameter.
struct SupResult {
  double arg = 0;       // maximizing scale
  double value = 0;     // supremum estimate
  bool divergent = false;  // growth into a search boundary
};

namespace detail {

// Golden-section maximization of g(exp(u)) on [ulo, uhi].
inline void golden_refine(const std::function<double(double)>& g, double ulo,
                          double uhi, double& best_arg, double& best_val) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = ulo, b = uhi;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = g(std::exp(c)), fd = g(std::exp(d));
  for (int it = 0; it < 120 && (b - a) > 1e-12; ++it) {
    if (fc < fd) {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = g(std::exp(d));
    } else {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = g(std::exp(c));
    }
  }
  double u = fc > fd ? c : d;
  double v = std::max(fc, fd);
  if (v > best_val) {
    best_val = v;
    best_arg = std::exp(u);
  }
}

}  // namespace detail

// Scans g over a logarithmic seed grid (64 seeds per decade), then refines the
// best bracket by golden section. Flags divergence when the scan keeps growing
// into a boundary of the search interval. NaN values from g are a domain
// error; +inf marks the scan divergent at that scale.
inline SupResult sup_over_scale(const std::function<double(double)>& g,
                                const Interval& search) {
  if (!(search.lo > 0) || !std::isfinite(search.hi)) {
    throw DomainError("sup_over_scale: search interval must be within (0, inf)");
  }
  double ulo = std::log(search.lo), uhi = std::log(search.hi);
  double decades = (uhi - ulo) / std::log(10.0);
  int m = std::clamp(static_cast<int>(std::ceil(64.0 * decades)) + 1, 9, 4000);
  std::vector<double> us(m), vals(m);
  for (int i = 0; i < m; ++i) {
    us[i] = ulo + (uhi - ulo) * i / (m - 1);
    double v = g(std::exp(us[i]));
    if (std::isnan(v)) {
      throw DomainError("sup_over_scale: scan value is NaN");
    }
    if (v == kInf) {
      return {std::exp(us[i]), kInf, true};
    }
    vals[i] = v;
  }
  int best = static_cast<int>(std::max_element(vals.begin(), vals.end()) -
                              vals.begin());
  SupResult out;
  out.arg = std::exp(us[best]);
  out.value = vals[best];
  detail::golden_refine(g, us[std::max(0, best - 1)],
                        us[std::min(m - 1, best + 1)], out.arg, out.value);
  // Boundary growth: increasing at a sustained rate over the final stretch of
  // seeds. The rate floor keeps scans that merely level off to a finite
  // plateau from being mistaken for divergence.
  auto rising_into = [&](bool upper) {
    int span = std::min(17, m - 1);
    for (int i = 0; i < span; ++i) {
      int j = upper ? m - 1 - i : i;
      int jn = upper ? j - 1 : j + 1;
      if (!(vals[j] > vals[jn] * (1.0 + 1e-6))) return false;
    }
    return true;
  };
  if ((best == m - 1 && rising_into(true)) || (best == 0 && rising_into(false))) {
    out.divergent = true;
  }
  return out;
}

}  // namespace hausdorff
