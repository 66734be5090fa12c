#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "csv.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "quadrature.hpp"
#include "report.hpp"

namespace hausdorff {

enum class WeightKind { constant, power, even_monotone };
enum class MonotoneDirection { increasing, decreasing };

// Even weight on the line. Power weights are |x|^a with a > -1; tabulated
// weights interpolate a positive monotone profile of |x| and continue it
// constantly past the sampled range.
class Weight {
 public:
  static Weight constant(double c) {
    if (!(c > 0) || !std::isfinite(c)) {
      throw DomainError("constant weight: level must be positive and finite");
    }
    Weight w(WeightKind::constant);
    w.level_ = c;
    return w;
  }

  static Weight power(double a) {
    if (!(a > -1) || !std::isfinite(a)) {
      throw DomainError("power weight: exponent must exceed -1");
    }
    Weight w(WeightKind::power);
    w.exponent_ = a;
    return w;
  }

  static Weight even_monotone(PosGridFunction profile, MonotoneDirection dir) {
    const auto& v = profile.values();
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (!(v[k] > 0)) {
        throw DomainError("even_monotone weight: profile must be positive");
      }
      if (k > 0) {
        bool ok = dir == MonotoneDirection::increasing ? v[k] >= v[k - 1]
                                                       : v[k] <= v[k - 1];
        if (!ok) {
          throw DomainError(
              "even_monotone weight: profile violates the declared direction");
        }
      }
    }
    Weight w(WeightKind::even_monotone);
    w.direction_ = dir;
    w.profile_.emplace(std::move(profile));
    return w;
  }

  double operator()(double x) const {
    double ax = std::abs(x);
    switch (kind_) {
      case WeightKind::constant:
        return level_;
      case WeightKind::power:
        return std::pow(ax, exponent_);
      case WeightKind::even_monotone: {
        const auto& p = *profile_;
        if (ax <= p.grid().r_min()) return p.value(0);
        if (ax >= p.grid().r_max()) return p.value(p.grid().size() - 1);
        return p(ax);
      }
    }
    return 0.0;
  }

  WeightKind kind() const { return kind_; }
  double exponent() const { return exponent_; }
  double level() const { return level_; }

  bool increasing() const {
    switch (kind_) {
      case WeightKind::constant:
        return true;
      case WeightKind::power:
        return exponent_ >= 0;
      case WeightKind::even_monotone:
        return direction_ == MonotoneDirection::increasing;
    }
    return false;
  }

  bool decreasing() const {
    switch (kind_) {
      case WeightKind::constant:
        return true;
      case WeightKind::power:
        return exponent_ <= 0;
      case WeightKind::even_monotone:
        return direction_ == MonotoneDirection::decreasing;
    }
    return false;
  }

  // Finite |x| abscissas where the weight is only piecewise smooth.
  std::vector<double> breakpoints() const {
    if (kind_ != WeightKind::even_monotone) return {};
    std::vector<double> bs;
    const auto& g = profile_->grid();
    bs = {-g.r_max(), -g.r_min(), g.r_min(), g.r_max()};
    return bs;
  }

 private:
  explicit Weight(WeightKind kind) : kind_(kind) {}

  WeightKind kind_;
  double level_ = 1.0;
  double exponent_ = 0.0;
  MonotoneDirection direction_ = MonotoneDirection::increasing;
  std::optional<PosGridFunction> profile_;
};

// Measure of an interval under the weight. Constant and power weights use the
// closed forms; tabulated weights are integrated with divergence probing.
inline NormValue weight_measure(const Weight& w, const Interval& S) {
  NormValue out;
  switch (w.kind()) {
    case WeightKind::constant: {
      if (!S.finite()) {
        out.divergent = true;
        out.value = kInf;
        return out;
      }
      out.value = w.level() * S.length();
      return out;
    }
    case WeightKind::power: {
      if (!S.finite()) {
        out.divergent = true;
        out.value = kInf;
        return out;
      }
      double a = w.exponent();
      auto prim = [a](double x) {
        return (x >= 0 ? 1.0 : -1.0) * std::pow(std::abs(x), 1.0 + a) / (1.0 + a);
      };
      out.value = prim(S.hi) - prim(S.lo);
      return out;
    }
    case WeightKind::even_monotone: {
      auto r = probe_integrate([&w](double x) { return w(x); }, S, 1e-10,
                               w.breakpoints());
      out.value = r.divergent ? kInf : r.value;
      out.divergent = r.divergent;
      out.error = r.error;
      return out;
    }
  }
  return out;
}

// One interval's contribution to the Muckenhoupt-type characteristic.
struct ApBallEntry {
  Interval ball;
  double product = 0;
  bool divergent = false;
};

struct ApReport {
  double characteristic = 0;
  bool divergent = false;
  std::vector<ApBallEntry> balls;
};

// sup over the supplied intervals of avg_I(w) * avg_I(w^{-1/(p-1)})^{p-1}.
// Both averages are taken with the same shell quadrature so that the constant
// weight scores exactly one. A non-integrable factor marks the interval (and
// the report) divergent; its product is excluded from the supremum.
inline ApReport ap_characteristic(const Weight& w, double p,
                                  const std::vector<Interval>& balls) {
  if (!(p > 1) || !std::isfinite(p)) {
    throw DomainError("ap_characteristic: need 1 < p < inf");
  }
  if (balls.empty()) {
    throw DomainError("ap_characteristic: need at least one interval");
  }
  ApReport rep;
  double ex = -1.0 / (p - 1.0);
  for (const Interval& ball : balls) {
    if (!ball.finite()) {
      throw DomainError("ap_characteristic: intervals must be finite");
    }
    ApBallEntry entry{ball};
    auto bw = probe_integrate([&w](double x) { return w(x); }, ball, 1e-10,
                              w.breakpoints());
    auto bs = probe_integrate([&w, ex](double x) { return std::pow(w(x), ex); },
                              ball, 1e-10, w.breakpoints());
    auto b1 = probe_integrate([](double) { return 1.0; }, ball, 1e-10);
    if (bw.divergent || bs.divergent || b1.divergent) {
      entry.divergent = true;
      rep.divergent = true;
    } else {
      double avg_w = bw.value / b1.value;
      double avg_s = bs.value / b1.value;
      entry.product = avg_w * std::pow(avg_s, p - 1.0);
      rep.characteristic = std::max(rep.characteristic, entry.product);
    }
    rep.balls.push_back(entry);
  }
  return rep;
}

// Smallest r such that the weight is admissible for the r-scale of weighted
// spaces: max(1, 1 + a) for |x|^a, one for constants.
inline double critical_index(const Weight& w) {
  switch (w.kind()) {
    case WeightKind::constant:
      return 1.0;
    case WeightKind::power:
      return std::max(1.0, 1.0 + w.exponent());
    case WeightKind::even_monotone:
      throw DomainError(
          "critical_index: defined for power and constant weights only");
  }
  return 1.0;
}

// Loads a tabulated monotone weight from a two-column file (node, value),
// nodes positive ascending, values positive and monotone in the declared
// direction. Resampled onto a log-uniform grid spanning the node range.
inline Weight load_even_monotone_weight(const std::string& path,
                                        MonotoneDirection dir,
                                        int resample_n = 0) {
  auto rows = detail::read_two_column_table(path);
  detail::require_positive_ascending_nodes(rows, path);
  return Weight::even_monotone(detail::resample_log_uniform(rows, resample_n),
                               dir);
}

}  // namespace hausdorff
