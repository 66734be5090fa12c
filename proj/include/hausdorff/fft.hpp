#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "errors.hpp"

namespace hausdorff {

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// In-place radix-2 FFT. direction = -1 applies e^{-2 pi i jk/n} (forward),
// direction = +1 the inverse transform including the 1/n factor.
inline void fft_inplace(std::vector<std::complex<double>>& a, int direction) {
  int n = static_cast<int>(a.size());
  if (!is_power_of_two(n)) {
    throw DomainError("fft_inplace: length must be a power of two");
  }
  if (direction != 1 && direction != -1) {
    throw DomainError("fft_inplace: direction must be +1 or -1");
  }
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  std::vector<std::complex<double>> w(n / 2);
  for (int k = 0; k < n / 2; ++k) {
    double ang = direction * 2.0 * std::numbers::pi * k / n;
    w[k] = {std::cos(ang), std::sin(ang)};
  }
  for (int len = 2; len <= n; len <<= 1) {
    int step = n / len;
    for (int i = 0; i < n; i += len) {
      for (int k = 0; k < len / 2; ++k) {
        std::complex<double> u = a[i + k];
        std::complex<double> v = a[i + k + len / 2] * w[k * step];
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
  if (direction == 1) {
    for (auto& z : a) z /= static_cast<double>(n);
  }
}

// Centered uniform grid x_j = -half_width + j dx, j = 0..n-1, with
// dx = 2 half_width / n (the right endpoint is excluded, the origin is node
// n/2). Dual frequencies are xi = k/(2 half_width) for wrapped bin index k.
class UniformGrid {
 public:
  UniformGrid(double half_width, int n) : L_(half_width), n_(n) {
    if (!(half_width > 0) || !std::isfinite(half_width)) {
      throw DomainError("UniformGrid: half_width must be positive and finite");
    }
    if (!is_power_of_two(n) || n < 4) {
      throw DomainError("UniformGrid: size must be a power of two, at least 4");
    }
    dx_ = 2.0 * L_ / n_;
  }

  double half_width() const { return L_; }
  int size() const { return n_; }
  double dx() const { return dx_; }
  double node(int j) const { return -L_ + dx_ * j; }
  int origin_index() const { return n_ / 2; }

  // Signed bin index in [-n/2, n/2) for FFT bin k in [0, n).
  int wrapped_bin(int k) const { return k < n_ / 2 ? k : k - n_; }
  double xi(int k) const { return wrapped_bin(k) / (2.0 * L_); }
  double xi_spacing() const { return 1.0 / (2.0 * L_); }

  std::vector<double> nodes() const {
    std::vector<double> xs(n_);
    for (int j = 0; j < n_; ++j) xs[j] = node(j);
    return xs;
  }

  bool operator==(const UniformGrid& o) const {
    return L_ == o.L_ && n_ == o.n_;
  }

 private:
  double L_, dx_;
  int n_;
};

// Continuum-normalized transform samples on a centered grid:
// fhat(xi_k) = dx (-1)^k DFT_k, returned in wrapped bin order. The (-1)^k
// phase accounts for the grid starting at -half_width.
inline std::vector<std::complex<double>> forward_transform_bins(
    const UniformGrid& g, const std::vector<double>& samples) {
  if (static_cast<int>(samples.size()) != g.size()) {
    throw DomainError("forward_transform_bins: sample count mismatch");
  }
  std::vector<std::complex<double>> a(samples.begin(), samples.end());
  fft_inplace(a, -1);
  for (int k = 0; k < g.size(); ++k) {
    a[k] *= (k % 2 == 0 ? g.dx() : -g.dx());
  }
  return a;
}

// Inverse of forward_transform_bins; returns the real parts.
inline std::vector<double> inverse_transform_bins(
    const UniformGrid& g, std::vector<std::complex<double>> bins) {
  if (static_cast<int>(bins.size()) != g.size()) {
    throw DomainError("inverse_transform_bins: bin count mismatch");
  }
  for (int k = 0; k < g.size(); ++k) {
    bins[k] /= (k % 2 == 0 ? g.dx() : -g.dx());
  }
  fft_inplace(bins, 1);
  std::vector<double> out(g.size());
  for (int j = 0; j < g.size(); ++j) out[j] = bins[j].real();
  return out;
}

// Applies a frequency multiplier m(xi) in place of each bin:
// out = IDFT[m(xi_k) DFT_k]. The centering phases cancel, so the multiplier
// acts directly on raw DFT bins. m must satisfy m(-xi) = conj(m(xi)) for a
// real result; the real part is returned regardless.
template <class M>
std::vector<double> apply_multiplier(const UniformGrid& g,
                                     const std::vector<double>& samples,
                                     M&& m) {
  if (static_cast<int>(samples.size()) != g.size()) {
    throw DomainError("apply_multiplier: sample count mismatch");
  }
  std::vector<std::complex<double>> a(samples.begin(), samples.end());
  fft_inplace(a, -1);
  for (int k = 0; k < g.size(); ++k) {
    a[k] *= m(g.xi(k));
  }
  fft_inplace(a, 1);
  std::vector<double> out(g.size());
  for (int j = 0; j < g.size(); ++j) out[j] = a[j].real();
  return out;
}

}  // namespace hausdorff
