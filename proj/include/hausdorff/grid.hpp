#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace hausdorff {

namespace detail {

inline bool value_finite(double v) { return std::isfinite(v); }
inline bool value_finite(const std::complex<double>& v) {
  return std::isfinite(v.real()) && std::isfinite(v.imag());
}

}  // namespace detail

// Logarithmic grid on (0, inf): nodes exp(u_k) with u_k uniform on
// [ln r_min, ln r_max], endpoints included.
class PosLogGrid {
 public:
  PosLogGrid(double r_min, double r_max, int n) : r_min_(r_min), r_max_(r_max), n_(n) {
    if (!(r_min > 0) || !(r_max > r_min) || !std::isfinite(r_max)) {
      throw DomainError("PosLogGrid: need 0 < r_min < r_max < inf");
    }
    if (n < 2) throw DomainError("PosLogGrid: need at least 2 nodes per side");
    u_min_ = std::log(r_min);
    du_ = (std::log(r_max) - u_min_) / (n - 1);
  }

  double r_min() const { return r_min_; }
  double r_max() const { return r_max_; }
  int size() const { return n_; }
  double du() const { return du_; }
  double u(int k) const { return u_min_ + du_ * k; }
  double node(int k) const { return std::exp(u(k)); }

  std::vector<double> nodes() const {
    std::vector<double> xs(n_);
    for (int k = 0; k < n_; ++k) xs[k] = node(k);
    return xs;
  }

  // Bracketing index for interpolation: largest k with u(k) <= u, clamped.
  int cell(double u) const {
    int k = static_cast<int>(std::floor((u - u_min_) / du_));
    if (k < 0) k = 0;
    if (k > n_ - 2) k = n_ - 2;
    return k;
  }

  bool operator==(const PosLogGrid& o) const {
    return r_min_ == o.r_min_ && r_max_ == o.r_max_ && n_ == o.n_;
  }

 private:
  double r_min_, r_max_, u_min_, du_;
  int n_;
};

// Symmetric logarithmic grid: the nodes +/-exp(u_k) of a PosLogGrid, listed
// in ascending order (negative branch first, by decreasing magnitude).
class LogGrid {
 public:
  LogGrid(double r_min, double r_max, int n_per_side)
      : half_(r_min, r_max, n_per_side) {}

  explicit LogGrid(PosLogGrid half) : half_(std::move(half)) {}

  double r_min() const { return half_.r_min(); }
  double r_max() const { return half_.r_max(); }
  int n_per_side() const { return half_.size(); }
  int size() const { return 2 * half_.size(); }
  double du() const { return half_.du(); }
  const PosLogGrid& positive_half() const { return half_; }

  // i in [0, 2n): i < n gives -exp(u_{n-1-i}), else +exp(u_{i-n}).
  double node(int i) const {
    int n = half_.size();
    return i < n ? -half_.node(n - 1 - i) : half_.node(i - n);
  }

  std::vector<double> nodes() const {
    std::vector<double> xs(size());
    for (int i = 0; i < size(); ++i) xs[i] = node(i);
    return xs;
  }

  bool operator==(const LogGrid& o) const { return half_ == o.half_; }

 private:
  PosLogGrid half_;
};

inline LogGrid make_log_grid(double r_min, double r_max, int n_per_side) {
  return LogGrid(r_min, r_max, n_per_side);
}

// Samples on a PosLogGrid with piecewise-linear interpolation in u = ln x.
// Evaluation outside [r_min, r_max] returns zero.
template <class T>
class PosGridFunctionT {
 public:
  PosGridFunctionT(PosLogGrid grid, std::vector<T> values)
      : grid_(std::move(grid)), values_(std::move(values)) {
    if (static_cast<int>(values_.size()) != grid_.size()) {
      throw DomainError("PosGridFunction: value count must match grid size");
    }
    for (const T& v : values_) {
      if (!detail::value_finite(v)) {
        throw DomainError("PosGridFunction: values must be finite");
      }
    }
  }

  template <class F>
  static PosGridFunctionT sample(const PosLogGrid& grid, F&& f) {
    std::vector<T> vals(grid.size());
    for (int k = 0; k < grid.size(); ++k) vals[k] = f(grid.node(k));
    return PosGridFunctionT(grid, std::move(vals));
  }

  const PosLogGrid& grid() const { return grid_; }
  const std::vector<T>& values() const { return values_; }
  T value(int k) const { return values_[k]; }

  T operator()(double x) const {
    if (!(x >= grid_.r_min() && x <= grid_.r_max())) return T{};
    double u = std::log(x);
    int k = grid_.cell(u);
    double s = (u - grid_.u(k)) / grid_.du();
    return values_[k] * (1.0 - s) + values_[k + 1] * s;
  }

 private:
  PosLogGrid grid_;
  std::vector<T> values_;
};

using PosGridFunction = PosGridFunctionT<double>;

// Samples on a symmetric LogGrid, indexed like LogGrid::node. Interpolation is
// piecewise linear in ln|x| on the matching sign branch; zero at the origin
// and outside the covered magnitudes.
template <class T>
class GridFunctionT {
 public:
  GridFunctionT(LogGrid grid, std::vector<T> values)
      : grid_(std::move(grid)), values_(std::move(values)) {
    if (static_cast<int>(values_.size()) != grid_.size()) {
      throw DomainError("GridFunction: value count must match grid size");
    }
    for (const T& v : values_) {
      if (!detail::value_finite(v)) {
        throw DomainError("GridFunction: values must be finite");
      }
    }
  }

  template <class F>
  static GridFunctionT sample(const LogGrid& grid, F&& f) {
    std::vector<T> vals(grid.size());
    for (int i = 0; i < grid.size(); ++i) vals[i] = f(grid.node(i));
    return GridFunctionT(grid, std::move(vals));
  }

  const LogGrid& grid() const { return grid_; }
  const std::vector<T>& values() const { return values_; }
  T value(int i) const { return values_[i]; }

  // Value at signed index on the positive (sign=+1) or negative (sign=-1)
  // branch, k indexing magnitude from r_min upward.
  T branch_value(int sign, int k) const {
    int n = grid_.n_per_side();
    return sign > 0 ? values_[n + k] : values_[n - 1 - k];
  }

  T operator()(double x) const {
    double ax = std::abs(x);
    if (!(ax >= grid_.r_min() && ax <= grid_.r_max())) return T{};
    const PosLogGrid& h = grid_.positive_half();
    double u = std::log(ax);
    int k = h.cell(u);
    double s = (u - h.u(k)) / h.du();
    int sign = x > 0 ? 1 : -1;
    return branch_value(sign, k) * (1.0 - s) + branch_value(sign, k + 1) * s;
  }

 private:
  LogGrid grid_;
  std::vector<T> values_;
};

using GridFunction = GridFunctionT<double>;
using ComplexGridFunction = GridFunctionT<std::complex<double>>;

}  // namespace hausdorff
