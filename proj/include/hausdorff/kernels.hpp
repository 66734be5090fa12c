#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "csv.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "quadrature.hpp"

namespace hausdorff {

enum class KernelKind {
  fractional_hardy,
  adjoint_hardy,
  fractional_hlp,
  cesaro,
  gaussian_hat,
  sampled,
};

// The averaging profile Phi of the operator
//   f  |->  integral of Phi(x/|y|) |y|^(beta-1) f(y) dy.
// Each named variant is the profile that reduces the operator to a classical
// transform; Sampled wraps tabulated data.
class Kernel {
 public:
  // |t|^(beta-1) outside the unit interval, zero inside.
  static Kernel fractional_hardy(double beta) {
    require_beta(beta);
    Kernel k(KernelKind::fractional_hardy);
    k.beta_ = beta;
    k.even_ = true;
    k.integrable_ = false;
    k.support_lo_ = 1.0;
    k.support_hi_ = kInf;
    k.jumps_ = {-1.0, 1.0};
    return k;
  }

  // Indicator of 0 < |t| <= 1.
  static Kernel adjoint_hardy() {
    Kernel k(KernelKind::adjoint_hardy);
    k.even_ = true;
    k.integrable_ = true;
    k.support_lo_ = 0.0;
    k.support_hi_ = 1.0;
    k.jumps_ = {-1.0, 1.0};
    return k;
  }

  // Sum of the two Hardy profiles: |t|^(beta-1) outside, 1 inside.
  static Kernel fractional_hlp(double beta) {
    require_beta(beta);
    Kernel k(KernelKind::fractional_hlp);
    k.beta_ = beta;
    k.even_ = true;
    k.integrable_ = false;
    k.support_lo_ = 0.0;
    k.support_hi_ = kInf;
    k.jumps_ = {};
    return k;
  }

  // gamma (1-t)^(gamma-1) on (0, 1); not even.
  static Kernel cesaro(double gamma) {
    if (!(gamma > 0) || !std::isfinite(gamma)) {
      throw DomainError("cesaro kernel: gamma must be positive and finite");
    }
    Kernel k(KernelKind::cesaro);
    k.gamma_ = gamma;
    k.even_ = false;
    k.integrable_ = true;
    k.support_lo_ = 0.0;
    k.support_hi_ = 1.0;
    k.jumps_ = {0.0, 1.0};
    return k;
  }

  // sqrt(pi/sigma) exp(-pi^2 t^2 / sigma): the profile whose transform is
  // exp(-sigma xi^2).
  static Kernel gaussian_hat(double sigma) {
    if (!(sigma > 0) || !std::isfinite(sigma)) {
      throw DomainError("gaussian_hat kernel: sigma must be positive");
    }
    Kernel k(KernelKind::gaussian_hat);
    k.sigma_ = sigma;
    k.even_ = true;
    k.integrable_ = true;
    k.support_lo_ = 0.0;
    k.support_hi_ = kInf;
    k.jumps_ = {};
    return k;
  }

  // Tabulated profile; interpolated on its grid, zero outside.
  static Kernel sampled(GridFunction profile) {
    for (double v : profile.values()) {
      if (v < 0) throw DomainError("sampled kernel: values must be nonnegative");
    }
    Kernel k(KernelKind::sampled);
    k.even_ = true;
    int n = profile.grid().n_per_side();
    for (int j = 0; j < n; ++j) {
      if (profile.branch_value(1, j) != profile.branch_value(-1, j)) {
        k.even_ = false;
        break;
      }
    }
    k.integrable_ = true;
    k.support_lo_ = profile.grid().r_min();
    k.support_hi_ = profile.grid().r_max();
    k.jumps_ = {-k.support_hi_, -k.support_lo_, k.support_lo_, k.support_hi_};
    k.samples_ = std::move(profile);
    return k;
  }

  double evaluate(double t) const {
    if (t == 0.0) {
      throw DomainError("kernel evaluation at t = 0 is undefined");
    }
    double at = std::abs(t);
    switch (kind_) {
      case KernelKind::fractional_hardy:
        return at > 1.0 ? std::pow(at, beta_ - 1.0) : 0.0;
      case KernelKind::adjoint_hardy:
        return at <= 1.0 ? 1.0 : 0.0;
      case KernelKind::fractional_hlp:
        return at > 1.0 ? std::pow(at, beta_ - 1.0) : 1.0;
      case KernelKind::cesaro:
        return (t > 0.0 && t < 1.0) ? gamma_ * std::pow(1.0 - t, gamma_ - 1.0)
                                    : 0.0;
      case KernelKind::gaussian_hat: {
        double pi = std::numbers::pi;
        return std::sqrt(pi / sigma_) * std::exp(-pi * pi * t * t / sigma_);
      }
      case KernelKind::sampled:
        return (*samples_)(t);
    }
    return 0.0;
  }

  KernelKind kind() const { return kind_; }
  double beta() const { return beta_; }
  double gamma() const { return gamma_; }
  double sigma() const { return sigma_; }
  bool is_even() const { return even_; }
  bool integrable() const { return integrable_; }

  // Magnitude range outside of which the profile vanishes.
  double support_lo() const { return support_lo_; }
  double support_hi() const { return support_hi_; }

  // Finite abscissas where the profile jumps or stops; quadratures split here.
  const std::vector<double>& breakpoints() const { return jumps_; }

  const std::optional<GridFunction>& samples() const { return samples_; }

 private:
  explicit Kernel(KernelKind kind) : kind_(kind) {}

  static void require_beta(double beta) {
    if (!(beta >= 0) || !(beta < 1)) {
      throw DomainError("kernel: beta must lie in [0, 1)");
    }
  }

  KernelKind kind_;
  double beta_ = 0, gamma_ = 0, sigma_ = 0;
  bool even_ = true, integrable_ = false;
  double support_lo_ = 0, support_hi_ = kInf;
  std::vector<double> jumps_;
  std::optional<GridFunction> samples_;
};

// Two-sided envelope claim for a kernel: on the named region the profile is
// pinched between C1 and C2 times the envelope, which is |t|^(beta-1) outside
// the unit interval and the constant 1 inside it.
enum class BoundsRegion { outside_unit, inside_unit };

struct KernelBounds {
  double C1 = 0;
  double C2 = 0;
  BoundsRegion region = BoundsRegion::outside_unit;
  double beta = 0;  // envelope exponent for the outside region
};

struct BoundsReport {
  bool pass = false;
  double tightest_C1 = 0;  // largest lower constant supported by the probe
  double tightest_C2 = 0;  // smallest upper constant supported by the probe
  int violations = 0;
  double worst_t = 0;  // probe node with the largest violation
};

// Checks the envelope claim on the probe grid's nodes (strictly inside the
// region; the boundary |t| = 1 carries no measure).
inline BoundsReport verify_bounds(const Kernel& k, const KernelBounds& b,
                                  const LogGrid& probe) {
  if (!(b.C1 >= 0) || !(b.C2 >= b.C1)) {
    throw DomainError("verify_bounds: need 0 <= C1 <= C2");
  }
  bool outside = b.region == BoundsRegion::outside_unit;
  BoundsReport rep;
  rep.tightest_C1 = kInf;
  rep.tightest_C2 = 0;
  double worst_gap = 0;
  int used = 0;
  for (int i = 0; i < probe.size(); ++i) {
    double t = probe.node(i);
    double at = std::abs(t);
    if (outside ? at <= 1.0 : at >= 1.0) continue;
    ++used;
    double env = outside ? std::pow(at, b.beta - 1.0) : 1.0;
    double phi = k.evaluate(t);
    double ratio = phi / env;
    rep.tightest_C1 = std::min(rep.tightest_C1, ratio);
    rep.tightest_C2 = std::max(rep.tightest_C2, ratio);
    double gap = std::max(b.C1 * env - phi, phi - b.C2 * env);
    if (gap > 1e-12 * std::max(1.0, std::abs(phi))) {
      ++rep.violations;
      if (gap > worst_gap) {
        worst_gap = gap;
        rep.worst_t = t;
      }
    }
  }
  if (used == 0) {
    throw DomainError("verify_bounds: probe grid has no nodes in the region");
  }
  rep.pass = rep.violations == 0;
  return rep;
}

// Pointwise Fourier transform of an integrable kernel on the nodes of a
// frequency grid. Gaussian profiles use the closed form; the rest integrate
// Phi(t) e^{-2 pi i t xi} over the (finite) support per node.
inline ComplexGridFunction fourier_of_kernel(const Kernel& k,
                                             const LogGrid& freq_grid) {
  if (!k.integrable()) {
    throw DomainError(
        "fourier_of_kernel: kernel is not integrable, pointwise transform "
        "undefined");
  }
  std::vector<std::complex<double>> vals(freq_grid.size());
  if (k.kind() == KernelKind::gaussian_hat) {
    for (int i = 0; i < freq_grid.size(); ++i) {
      double xi = freq_grid.node(i);
      vals[i] = std::exp(-k.sigma() * xi * xi);
    }
    return ComplexGridFunction(freq_grid, std::move(vals));
  }
  double S = k.support_hi();
  Interval dom(-S, S);
  auto safe = [&k](double t) { return t == 0.0 ? 0.0 : k.evaluate(t); };
  const double tau = 2.0 * std::numbers::pi;
  for (int i = 0; i < freq_grid.size(); ++i) {
    double xi = freq_grid.node(i);
    auto re = [&](double t) { return safe(t) * std::cos(tau * t * xi); };
    auto im = [&](double t) { return safe(t) * std::sin(tau * t * xi); };
    vals[i] = {integrate(re, dom, 1e-12, k.breakpoints()),
               -integrate(im, dom, 1e-12, k.breakpoints())};
  }
  return ComplexGridFunction(freq_grid, std::move(vals));
}

// Loads a tabulated kernel profile from a two-column file (node, value) with
// positive ascending nodes. The data is resampled onto a log-uniform grid
// spanning the node range and extended evenly to negative arguments.
inline Kernel load_sampled_kernel(const std::string& path, int resample_n = 0) {
  auto rows = detail::read_two_column_table(path);
  detail::require_positive_ascending_nodes(rows, path);
  for (const auto& [x, v] : rows) {
    if (v < 0) throw DomainError("kernel values must be nonnegative in " + path);
  }
  PosGridFunction half = detail::resample_log_uniform(rows, resample_n);
  LogGrid grid(half.grid());
  std::vector<double> vals(grid.size());
  int n = grid.n_per_side();
  for (int j = 0; j < n; ++j) {
    vals[n + j] = half.value(j);
    vals[n - 1 - j] = half.value(j);
  }
  return Kernel::sampled(GridFunction(grid, std::move(vals)));
}

}  // namespace hausdorff
