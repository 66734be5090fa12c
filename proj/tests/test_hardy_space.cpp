#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "hausdorff/hardy_space.hpp"

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

// Derivative of a Gaussian: zero mean exactly, so it belongs to the p = 1
// space (its maximal function decays quadratically).
double gaussian_slope(double x) {
  return -2.0 * kPi * x * std::exp(-kPi * x * x);
}

// Smoothed indicator of [-1, 1]: even, bounded, rapidly decaying.
double smoothed_box(double x) {
  double r = std::sqrt(kPi);
  return 0.5 * (std::erf(r * (x + 1.0)) - std::erf(r * (x - 1.0)));
}

// One deterministic zero-mean family member: a translated, rescaled
// Gaussian slope.
std::vector<double> family_member(const UniformGrid& g, int k) {
  double t = -2.0 + 4.0 * k / 19.0;
  double sigma = std::pow(2.0, (k % 5 - 2) / 2.0);
  std::vector<double> s(g.size());
  for (int j = 0; j < g.size(); ++j) {
    double u = (g.node(j) - t) / sigma;
    s[j] = -2.0 * kPi * u / sigma * std::exp(-kPi * u * u);
  }
  return s;
}

RealFunction gaussian_line() {
  RealFunction f;
  f.fn = [](double x) { return std::exp(-kPi * x * x); };
  return f;
}

}  // namespace

TEST_CASE("dilation grid has the advertised geometry") {
  MaximalConfig cfg;
  auto s = cfg.s_grid();
  // 40 octaves at 8 scales per octave, endpoints included.
  REQUIRE(s.size() == 321);
  REQUIRE_THAT(s.front(), WithinRel(std::pow(2.0, -20), 1e-12));
  REQUIRE_THAT(s.back(), WithinRel(std::pow(2.0, 20), 1e-12));
  for (std::size_t i = 1; i < s.size(); ++i) {
    REQUIRE_THAT(s[i] / s[i - 1], WithinRel(cfg.rho, 1e-12));
  }
}

TEST_CASE("maximal config rejects degenerate setups") {
  MaximalConfig cfg;
  cfg.rho = 1.0;
  REQUIRE_THROWS_AS(cfg.validate(), DomainError);
  cfg = MaximalConfig{};
  cfg.s_min = 0.0;
  REQUIRE_THROWS_AS(cfg.validate(), DomainError);
  cfg = MaximalConfig{};
  cfg.phi_hat = [](double) { return 0.0; };  // profile with zero mass
  REQUIRE_THROWS_AS(cfg.validate(), DomainError);
}

TEST_CASE("maximal function of zero data is zero") {
  UniformGrid g(16.0, 512);
  auto M = radial_maximal(g, std::vector<double>(g.size(), 0.0));
  for (double v : M) REQUIRE(v == 0.0);
}

TEST_CASE("maximal function dominates the data in the small-scale limit") {
  UniformGrid g(16.0, 2048);
  auto f = sample(g, unit_gaussian);
  auto M = radial_maximal(g, f);
  for (int j = 0; j < g.size(); ++j) {
    REQUIRE(M[j] >= std::abs(f[j]) - 1e-6);
  }
}

TEST_CASE("maximal function of even data is even") {
  UniformGrid g(16.0, 2048);
  auto M = radial_maximal(g, sample(g, smoothed_box));
  for (int j = 1; j < g.size(); ++j) {
    REQUIRE_THAT(M[j], WithinAbs(M[g.size() - j], 1e-12));
  }
}

TEST_CASE("maximal operator is sublinear within rounding") {
  UniformGrid g(16.0, 1024);
  auto f = sample(g, unit_gaussian);
  auto h = sample(g, gaussian_slope);
  std::vector<double> sum(g.size());
  for (int j = 0; j < g.size(); ++j) sum[j] = f[j] + h[j];
  auto Mf = radial_maximal(g, f);
  auto Mh = radial_maximal(g, h);
  auto Ms = radial_maximal(g, sum);
  for (int j = 0; j < g.size(); ++j) {
    REQUIRE(Ms[j] <= Mf[j] + Mh[j] + 1e-10);
  }
}

TEST_CASE("maximal operator commutes with reflection for the even profile") {
  UniformGrid g(16.0, 1024);
  std::vector<double> f(g.size()), r(g.size());
  for (int j = 0; j < g.size(); ++j) {
    double x = g.node(j);
    f[j] = std::exp(-kPi * (x - 1.0) * (x - 1.0));
  }
  // Node 0 has no mirror on the grid; its reflected value is the (dead)
  // right edge.
  r[0] = 0.0;
  for (int j = 1; j < g.size(); ++j) r[j] = f[g.size() - j];
  auto Mf = radial_maximal(g, f);
  auto Mr = radial_maximal(g, r);
  for (int j = 1; j < g.size(); ++j) {
    REQUIRE_THAT(Mr[j], WithinAbs(Mf[g.size() - j], 1e-12));
  }
}

TEST_CASE("maximal operator demands edge decay") {
  UniformGrid g(8.0, 256);
  std::vector<double> f(g.size());
  for (int j = 0; j < g.size(); ++j) {
    double x = g.node(j);
    f[j] = 1.0 / (1.0 + x * x);
  }
  REQUIRE_THROWS_AS(radial_maximal(g, f), DomainError);
}

TEST_CASE("hardy quasi-norm gates its exponents") {
  UniformGrid g(16.0, 512);
  auto f = sample(g, unit_gaussian);
  REQUIRE_THROWS_AS(hardy_quasi_norm(g, f, 0.0, 1.5), DomainError);
  REQUIRE_THROWS_AS(hardy_quasi_norm(g, f, 0.0, 0.0), DomainError);
  REQUIRE_THROWS_AS(hardy_quasi_norm(g, f, -1.0, 1.0), DomainError);
}

TEST_CASE("hardy quasi-norm of zero data is zero") {
  UniformGrid g(16.0, 512);
  auto nv = hardy_quasi_norm(g, std::vector<double>(g.size(), 0.0), 0.0, 1.0);
  REQUIRE(nv.value == 0.0);
  REQUIRE_FALSE(nv.divergent);
}

TEST_CASE("hardy quasi-norm is absolutely homogeneous") {
  UniformGrid g(16.0, 1024);
  auto f = sample(g, gaussian_slope);
  for (double p : {0.5, 1.0}) {
    double base = hardy_quasi_norm(g, f, 0.0, p).value;
    for (double c : {2.0, 1.7}) {
      std::vector<double> cf(f.size());
      for (std::size_t j = 0; j < f.size(); ++j) cf[j] = c * f[j];
      REQUIRE_THAT(hardy_quasi_norm(g, cf, 0.0, p).value,
                   WithinRel(c * base, 1e-11));
    }
  }
}

TEST_CASE("mass-carrying data is flagged divergent at p = 1") {
  UniformGrid g(16.0, 2048);
  // A Gaussian has nonzero mass, so its maximal function only decays like
  // 1/|x| and the p = 1 integral cannot exist; the window value stays
  // finite and the flag reports the obstruction. The zero-mean slope decays
  // a full power faster and is genuinely integrable.
  auto heavy = hardy_quasi_norm(g, sample(g, unit_gaussian), 0.0, 1.0);
  REQUIRE(heavy.divergent);
  REQUIRE(std::isfinite(heavy.value));
  auto light = hardy_quasi_norm(g, sample(g, gaussian_slope), 0.0, 1.0);
  REQUIRE_FALSE(light.divergent);
  REQUIRE(light.value > 0.0);
}

TEST_CASE("doubling the dilation grid density barely moves the quasi-norm") {
  UniformGrid g(16.0, 2048);
  auto f = sample(g, unit_gaussian);
  MaximalConfig coarse;
  MaximalConfig fine;
  fine.rho = std::pow(2.0, 1.0 / 16.0);
  double va = hardy_quasi_norm(g, f, 0.0, 1.0, coarse).value;
  double vb = hardy_quasi_norm(g, f, 0.0, 1.0, fine).value;
  REQUIRE(vb >= va);  // a denser grid can only raise the pointwise sup
  REQUIRE((vb - va) / vb <= 0.005);
}

TEST_CASE("identity dilation gives ratio exactly one") {
  UniformGrid g(16.0, 1024);
  auto rep = dilation_invariance_check(unit_gaussian, 1.0, 1.0, 0.0, g);
  REQUIRE(rep.ratio == 1.0);
  REQUIRE(rep.pass);
}

TEST_CASE("dilation isometry holds across the exponent cells") {
  UniformGrid g(16.0, 2048);
  for (double s : {0.25, 4.0}) {
    for (double p : {0.5, 1.0}) {
      for (double a : {0.0, 1.0}) {
        CAPTURE(s, p, a);
        auto rep = dilation_invariance_check(unit_gaussian, s, p, a, g);
        REQUIRE_THAT(rep.ratio, WithinAbs(1.0, 1e-3));
        REQUIRE(rep.pass);
      }
    }
  }
}

TEST_CASE("dilations outside the covered scales are rejected") {
  UniformGrid g(16.0, 512);
  MaximalConfig narrow;
  narrow.s_min = 0.5;
  narrow.s_max = 2.0;
  REQUIRE_THROWS_AS(
      dilation_invariance_check(unit_gaussian, 4.0, 1.0, 0.0, g, narrow),
      DomainError);
  MaximalConfig cfg;
  REQUIRE_THROWS_AS(dilation_invariance_check(unit_gaussian,
                                              std::pow(2.0, 20), 1.0, 0.0, g,
                                              cfg),
                    DomainError);
}

TEST_CASE("dilation check rejects vanishing reference data") {
  UniformGrid g(16.0, 512);
  auto zero = [](double) { return 0.0; };
  REQUIRE_THROWS_AS(dilation_invariance_check(zero, 2.0, 1.0, 0.0, g),
                    DomainError);
}

TEST_CASE("conjugation quasi-norm splits parity for even data") {
  UniformGrid g(16.0, 2048);
  auto f = sample(g, unit_gaussian);
  auto H = hilbert_transform_line(g, f);
  // The conjugate of even data is odd.
  for (int j = 1; j < g.size(); ++j) {
    REQUIRE_THAT(H[j], WithinAbs(-H[g.size() - j], 1e-10));
  }
  auto nv = hilbert_hardy_quasi_norm(g, f, Weight::constant(1.0), 1.0);
  REQUIRE(std::isfinite(nv.value));
  REQUIRE(nv.value > 0.0);
  // The conjugate inherits the 1/(pi x) mass tail, so the p = 1 integral
  // cannot exist and the flag must say so.
  REQUIRE(nv.divergent);
}

TEST_CASE("quasi-norm equivalence band stays narrow over a smooth family") {
  UniformGrid g(16.0, 2048);
  Weight one = Weight::constant(1.0);
  double r_min = kInf, r_max = 0.0;
  for (int k = 0; k < 20; ++k) {
    CAPTURE(k);
    auto f = family_member(g, k);
    auto maximal = hardy_quasi_norm(g, f, 0.0, 1.0);
    auto conjugate = hilbert_hardy_quasi_norm(g, f, one, 1.0);
    REQUIRE_FALSE(maximal.divergent);
    REQUIRE_FALSE(conjugate.divergent);
    REQUIRE(maximal.value > 0.0);
    double r = conjugate.value / maximal.value;
    r_min = std::min(r_min, r);
    r_max = std::max(r_max, r);
  }
  CAPTURE(r_min, r_max);
  REQUIRE(r_max / r_min <= 20.0);
}

TEST_CASE("scaling fit vanishes when the exponent relation holds") {
  // (1+a)/p - (1+g)/q = 3/4 - 1/4 = 1/2 = beta.
  auto rep = exponent_relation_probe(Kernel::fractional_hardy(0.5), 0.5,
                                     4.0 / 3.0, 4.0, 0.0, 0.0,
                                     gaussian_line(), {0.25, 1.0, 2.0, 4.0},
                                     LogGrid(1e-4, 1e4, 160));
  CAPTURE(rep.slope, rep.residual);
  REQUIRE_THAT(rep.slope, WithinAbs(-0.75, 1e-3));
  REQUIRE(std::abs(rep.residual) <= 1e-3);
  REQUIRE(rep.pass);
}

TEST_CASE("perturbing the target exponent moves the fit at its exact rate") {
  auto rep = exponent_relation_probe(Kernel::fractional_hardy(0.5), 0.5,
                                     4.0 / 3.0, 4.0, 0.0, 0.1,
                                     gaussian_line(), {0.25, 1.0, 2.0, 4.0},
                                     LogGrid(1e-4, 1e4, 160));
  REQUIRE_THAT(rep.residual, WithinAbs(-0.1 / 4.0, 1e-3));
  REQUIRE_FALSE(rep.pass);
}

TEST_CASE("source exponent enters the fit residual linearly") {
  LogGrid grid(1e-3, 1e3, 120);
  std::vector<double> scales{0.5, 1.0, 2.0};
  auto base = exponent_relation_probe(Kernel::fractional_hardy(0.5), 0.5,
                                      4.0 / 3.0, 4.0, 0.0, 0.0,
                                      gaussian_line(), scales, grid);
  auto shifted = exponent_relation_probe(Kernel::fractional_hardy(0.5), 0.5,
                                         4.0 / 3.0, 4.0, 1.0, 0.0,
                                         gaussian_line(), scales, grid);
  REQUIRE_THAT(shifted.residual - base.residual,
               WithinAbs(1.0 / (4.0 / 3.0), 1e-12));
}

TEST_CASE("degenerate scaling fits are rejected") {
  auto f = gaussian_line();
  REQUIRE_THROWS_AS(
      exponent_relation_probe(Kernel::fractional_hardy(0.5), 0.5, 4.0 / 3.0,
                              4.0, 0.0, 0.0, f, {1.0, 2.0},
                              LogGrid(1e-3, 1e3, 80)),
      DomainError);
  RealFunction zero;
  zero.fn = [](double) { return 0.0; };
  REQUIRE_THROWS_AS(
      exponent_relation_probe(Kernel::fractional_hardy(0.5), 0.5, 4.0 / 3.0,
                              4.0, 0.0, 0.0, zero, {0.5, 1.0, 2.0},
                              LogGrid(1e-3, 1e3, 80)),
      DomainError);
}
