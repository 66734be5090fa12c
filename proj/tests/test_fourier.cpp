#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "hausdorff/fourier.hpp"
#include "hausdorff/special.hpp"

using namespace hausdorff;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> sample(const UniformGrid& g, double (*fn)(double)) {
  std::vector<double> s(g.size());
  for (int j = 0; j < g.size(); ++j) s[j] = fn(g.node(j));
  return s;
}

double unit_gaussian(double x) { return std::exp(-kPi * x * x); }

// Zero-mean pair: the narrow copy carries twice the height at half the mass.
double balanced_pair(double x) {
  return std::exp(-kPi * x * x) - 2.0 * std::exp(-kPi * 4.0 * x * x);
}

double rel_l2(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0, den = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    num += (a[j] - b[j]) * (a[j] - b[j]);
    den += b[j] * b[j];
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("transform of the unit gaussian is itself") {
  UniformGrid g(8.0, 256);
  auto sp = fourier_transform(g, sample(g, unit_gaussian));
  double worst = 0;
  for (int i = 0; i < g.size(); ++i) {
    double xi = sp.xi(i);
    worst = std::max(worst,
                     std::abs(sp.values[i] - std::complex<double>(
                                                 std::exp(-kPi * xi * xi))));
  }
  REQUIRE(worst <= 1e-8);
}

TEST_CASE("transform round trip returns the samples") {
  UniformGrid g(8.0, 256);
  auto s = sample(g, balanced_pair);
  auto back = inverse_fourier_transform(fourier_transform(g, s));
  double worst = 0;
  for (int j = 0; j < g.size(); ++j) {
    worst = std::max(worst, std::abs(back[j] - s[j]));
  }
  REQUIRE(worst <= 1e-10);
}

TEST_CASE("transform of the centered unit indicator vanishes at frequency one") {
  // Sampling the jump at its midpoint value keeps the rectangle sum an exact
  // stand-in for the integral, so the sinc zero lands on the nose.
  UniformGrid g(8.0, 256);
  std::vector<double> s(g.size());
  for (int j = 0; j < g.size(); ++j) {
    double ax = std::abs(g.node(j));
    s[j] = ax < 0.5 ? 1.0 : (ax == 0.5 ? 0.5 : 0.0);
  }
  auto sp = fourier_transform(g, s);
  int hit = -1;
  for (int i = 0; i < g.size(); ++i) {
    if (std::abs(sp.xi(i) - 1.0) < 1e-12) hit = i;
  }
  REQUIRE(hit >= 0);
  REQUIRE(std::abs(sp.values[hit]) <= 1e-6);
}

TEST_CASE("transform preserves energy") {
  UniformGrid g(8.0, 512);
  auto s = sample(g, balanced_pair);
  auto sp = fourier_transform(g, s);
  double space = 0, freq = 0;
  for (double v : s) space += v * v;
  for (const auto& v : sp.values) freq += std::norm(v);
  space *= g.dx();
  freq *= g.xi_spacing();
  REQUIRE_THAT(freq, WithinRel(space, 1e-8));
}

TEST_CASE("transform refuses samples that still carry mass at the edges") {
  UniformGrid g(8.0, 256);
  std::vector<double> s(g.size());
  for (int j = 0; j < g.size(); ++j) {
    double x = g.node(j);
    s[j] = 1.0 / (1.0 + x * x);
  }
  REQUIRE_THROWS_AS(fourier_transform(g, s), DomainError);
  REQUIRE_THROWS_AS(hilbert_transform(g, s), DomainError);
}

TEST_CASE("conjugation twice negates zero-mean data") {
  // The inner transform's output is itself the outer call's input, and it
  // decays only cubically (the pair's second moment survives), so honoring
  // the edge precondition of the second call takes a deep window.
  UniformGrid g(8192.0, 1 << 19);
  auto s = sample(g, balanced_pair);
  auto twice = hilbert_transform(g, hilbert_transform(g, s));
  std::vector<double> neg(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) neg[j] = -s[j];
  REQUIRE(rel_l2(twice, neg) <= 1e-6);
}

TEST_CASE("conjugation preserves the energy of zero-mean data") {
  UniformGrid g(8.0, 1024);
  auto s = sample(g, balanced_pair);
  auto h = hilbert_transform(g, s);
  double in = 0, out = 0;
  for (double v : s) in += v * v;
  for (double v : h) out += v * v;
  REQUIRE_THAT(std::sqrt(out), WithinRel(std::sqrt(in), 1e-6));
}

TEST_CASE("conjugate of an even function vanishes at the origin") {
  UniformGrid g(8.0, 1024);
  auto h = hilbert_transform(g, sample(g, unit_gaussian));
  REQUIRE_THAT(h[g.origin_index()], WithinAbs(0.0, 1e-8));
}

TEST_CASE("conjugation acts as the sign multiplier bin by bin") {
  UniformGrid g(8.0, 512);
  auto s = sample(g, balanced_pair);
  auto h = hilbert_transform(g, s);
  auto bins_f = forward_transform_bins(g, s);
  auto bins_h = forward_transform_bins(g, h);
  double peak = 0;
  for (const auto& v : bins_f) peak = std::max(peak, std::abs(v));
  for (int k = 0; k < g.size(); ++k) {
    int wb = g.wrapped_bin(k);
    std::complex<double> want =
        (wb == 0 || k == g.size() / 2)
            ? std::complex<double>(0.0)
            : bins_f[k] * std::complex<double>(0.0, wb > 0 ? -1.0 : 1.0);
    REQUIRE(std::abs(bins_h[k] - want) <= 1e-10 * peak);
  }
}

TEST_CASE("conjugation anticommutes with reflection") {
  UniformGrid g(8.0, 512);
  std::vector<double> s(g.size());
  for (int j = 0; j < g.size(); ++j) {
    double x = g.node(j);
    s[j] = std::exp(-kPi * (x - 1.0) * (x - 1.0));
  }
  int n = g.size();
  std::vector<double> refl(n);
  for (int j = 0; j < n; ++j) refl[j] = s[(n - j) % n];
  auto h_refl = hilbert_transform(g, refl);
  auto h = hilbert_transform(g, s);
  double peak = 0;
  for (double v : h) peak = std::max(peak, std::abs(v));
  for (int j = 0; j < n; ++j) {
    REQUIRE(std::abs(h_refl[j] + h[(n - j) % n]) <= 1e-10 * peak);
  }
}

TEST_CASE("line conjugation matches the closed form for the gaussian") {
  // H(e^{-pi x^2})(x) = (2/sqrt(pi)) D(sqrt(pi) x) with D the Dawson
  // function. The plain multiplier misses this by a few percent, since the
  // gaussian has mass and its conjugate decays only like 1/(pi x); the
  // periodization correction restores line semantics to machine precision.
  UniformGrid g(8.0, 4096);
  auto h = hilbert_transform_line(g, sample(g, unit_gaussian));
  double worst = 0;
  for (int j = 0; j < g.size(); ++j) {
    double x = g.node(j);
    double want = 2.0 / std::sqrt(kPi) * dawson(std::sqrt(kPi) * x);
    worst = std::max(worst, std::abs(h[j] - want));
  }
  REQUIRE(worst <= 1e-12);
}

TEST_CASE("conjugation commutes with the averaging operator") {
  RealFunction f{[](double x) { return unit_gaussian(x); }};
  Kernel k = Kernel::gaussian_hat(kPi);
  for (double beta : {0.0, 0.25, 0.5}) {
    CAPTURE(beta);
    auto rep = commutation_check(k, beta, f);
    CAPTURE(rep.discrepancy, rep.refined, rep.ratio);
    REQUIRE(rep.discrepancy <= 1e-3);
    REQUIRE(rep.refined <= 0.5 * rep.discrepancy);
    REQUIRE(rep.pass);
  }
}

TEST_CASE("commutation discrepancy vanishes for zero data") {
  RealFunction zero{[](double) { return 0.0; }};
  auto rep = commutation_check(Kernel::gaussian_hat(kPi), 0.25, zero);
  REQUIRE(rep.discrepancy == 0.0);
  REQUIRE(rep.refined == 0.0);
  REQUIRE(rep.pass);
}

TEST_CASE("commutation holds for the inner-interval kernel at beta zero") {
  // The profile jumps at |t| = 1, so its conjugate carries a logarithmic
  // spike there; the sampled representation floors the discrepancy well
  // below budget but refinement stalls at that floor, so only the mismatch
  // level itself is asserted.
  RealFunction f{[](double x) { return unit_gaussian(x); }};
  auto rep = commutation_check(Kernel::adjoint_hardy(), 0.0, f);
  CAPTURE(rep.discrepancy, rep.refined);
  REQUIRE(rep.discrepancy <= 1e-3);
  REQUIRE(rep.refined <= 1e-3);
}

TEST_CASE("commutation rejects non-integrable kernels") {
  RealFunction f{[](double x) { return unit_gaussian(x); }};
  REQUIRE_THROWS_AS(commutation_check(Kernel::fractional_hardy(0.5), 0.5, f),
                    DomainError);
}

TEST_CASE("two-sided profile integral table for the gaussian profile") {
  for (int m : {0, 1, 2}) {
    CAPTURE(m);
    auto rep = hypothesis_integrals_phi(gaussian_hat_profile(1.0), m);
    for (const auto& e : rep.entries) {
      CAPTURE(e.index_a, e.index_b, e.index_c, e.order);
      REQUIRE_FALSE(e.integral.divergent);
    }
    REQUIRE(rep.all_finite);
    REQUIRE(std::isfinite(rep.max_value));
    REQUIRE(rep.max_value > 0.0);
  }
  auto rep = hypothesis_integrals_phi(gaussian_hat_profile(1.0), 1);
  REQUIRE_THAT(rep.entries[0].integral.value,
               WithinRel(std::sqrt(kPi), 1e-6));
  REQUIRE_THAT(rep.entries[1].integral.value,
               WithinRel(std::sqrt(kPi), 1e-6));
}

TEST_CASE("moment-damped profile satisfies every integral for m = 1") {
  auto rep = hypothesis_integrals_phi(damped_moment_profile(2, 1.0), 1);
  REQUIRE(rep.all_finite);
  REQUIRE(std::isfinite(rep.max_value));
  for (const auto& e : rep.entries) REQUIRE_FALSE(e.integral.divergent);
}

TEST_CASE("half-line table flags the designed divergent profile") {
  auto rep = hypothesis_integrals_g(exp_profile(1.0), 1);
  REQUIRE_FALSE(rep.all_finite);
  REQUIRE(std::isinf(rep.max_value));
  for (const auto& e : rep.entries) {
    if (e.index_a == 0 && e.index_b == 0) {
      REQUIRE(e.integral.divergent);  // exp(-xi) against xi^{-3/2}
    } else if (e.index_b < 0) {
      REQUIRE_FALSE(e.integral.divergent);
    }
  }
  // Plain-family values are Gamma(1/2) and Gamma(3/2).
  REQUIRE_THAT(rep.entries[0].integral.value,
               WithinRel(std::sqrt(kPi), 1e-6));
  REQUIRE_THAT(rep.entries[1].integral.value,
               WithinRel(0.5 * std::sqrt(kPi), 1e-6));
}

TEST_CASE("half-line table accepts the vanishing-at-zero profile") {
  auto rep = hypothesis_integrals_g(xexp_profile(1.0), 1);
  REQUIRE(rep.all_finite);
  // The largest entry is the weighted (0, 0) one: Gamma(1/2).
  REQUIRE_THAT(rep.max_value, WithinRel(std::sqrt(kPi), 1e-6));
}

TEST_CASE("zero profiles produce all-zero finite tables") {
  auto phi = hypothesis_integrals_phi(zero_profile(), 1);
  REQUIRE(phi.all_finite);
  REQUIRE(phi.max_value == 0.0);
  auto g = hypothesis_integrals_g(zero_profile(), 1);
  REQUIRE(g.all_finite);
  REQUIRE(g.max_value == 0.0);
  for (const auto& e : g.entries) REQUIRE(e.integral.value == 0.0);
}

TEST_CASE("integral tables demand the derivatives they consume") {
  UniformGrid g(16.0, 256);
  std::vector<double> s(g.size());
  for (int j = 0; j < g.size(); ++j) {
    double xi = g.node(j);
    s[j] = std::exp(-xi * xi);
  }
  auto prof = spectral_profile(g, s, 2);
  REQUIRE_THROWS_AS(hypothesis_integrals_phi(prof, 1), DomainError);
  REQUIRE_THROWS_AS(hypothesis_integrals_phi(gaussian_hat_profile(1.0), -1),
                    DomainError);
}

TEST_CASE("spectral differentiation tracks the closed form") {
  UniformGrid g(16.0, 512);
  std::vector<double> s(g.size());
  for (int j = 0; j < g.size(); ++j) {
    double xi = g.node(j);
    s[j] = std::exp(-xi * xi);
  }
  auto prof = spectral_profile(g, s, 4);
  auto exact = gaussian_hat_profile(1.0);
  for (int r = 0; r <= 2; ++r) {
    double worst = 0;
    for (double xi : {-2.5, -1.0, -0.3, 0.0, 0.7, 1.9, 3.0}) {
      worst =
          std::max(worst, std::abs(prof.deriv(r, xi) - exact.deriv(r, xi)));
    }
    CAPTURE(r);
    REQUIRE(worst <= 1e-4);
  }
  auto rep = hypothesis_integrals_phi(prof, 0);
  REQUIRE_THAT(rep.entries[0].integral.value,
               WithinRel(std::sqrt(kPi), 1e-3));
  // m = 0 yields one plain entry plus the (0,0,l) weighted entries for
  // l = 0, 1; the capped weight keeps all of them integrable.
  REQUIRE(rep.entries.size() == 3);
  REQUIRE(rep.all_finite);
}

TEST_CASE("window probe recovers the unit decay rate") {
  auto khat = gaussian_hat_profile(kPi);
  auto psi = [](double u) { return bump(u); };
  auto xs = geometric_points(1.0, 100.0, 17);
  auto ys = geometric_points(1.0, 400.0, 22);
  std::vector<double> ss{0.125, 0.25, 0.5, 1.0, 2.0, 4.0};
  auto rep = kernel_decay_probe(khat, psi, 0.25, xs, ys, ss);
  CAPTURE(rep.slope, rep.spread);
  REQUIRE_FALSE(rep.all_zero);
  REQUIRE(rep.slope >= -1.05);
  REQUIRE(rep.slope <= -0.95);
  REQUIRE(rep.spread <= 10.0);
  for (double e : rep.envelope) REQUIRE(e > 0.0);
}

TEST_CASE("window probe reports a vanishing profile as all zero") {
  auto psi = [](double u) { return bump(u); };
  auto rep = kernel_decay_probe(zero_profile(), psi, 0.25,
                                geometric_points(1.0, 10.0, 4),
                                geometric_points(1.0, 10.0, 4), {1.0});
  REQUIRE(rep.all_zero);
  REQUIRE(rep.spread == 0.0);
}

TEST_CASE("window probe validates its window") {
  auto khat = gaussian_hat_profile(1.0);
  auto xs = geometric_points(1.0, 10.0, 4);
  REQUIRE_THROWS_AS(
      kernel_decay_probe(khat, [](double u) { return u; }, 0.25, xs, xs, xs),
      DomainError);
  REQUIRE_THROWS_AS(kernel_decay_probe(
                        khat, [](double u) { return std::exp(-u * u); }, 0.25,
                        xs, xs, xs),
                    DomainError);
}
