#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "hausdorff/kernels.hpp"

using namespace hausdorff;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::string write_temp(const std::string& name, const std::string& body) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << body;
  return path.string();
}

}  // namespace

TEST_CASE("hardy-type kernel values") {
  Kernel k = Kernel::fractional_hardy(0.5);
  REQUIRE_THAT(k.evaluate(4.0), WithinAbs(0.5, 1e-15));
  REQUIRE_THAT(k.evaluate(-4.0), WithinAbs(0.5, 1e-15));
  REQUIRE(k.evaluate(0.5) == 0.0);
  REQUIRE(k.evaluate(1.0) == 0.0);
  REQUIRE(k.is_even());
  REQUIRE_FALSE(k.integrable());
  REQUIRE_THROWS_AS(k.evaluate(0.0), DomainError);
  REQUIRE_THROWS_AS(Kernel::fractional_hardy(1.0), DomainError);
  REQUIRE_THROWS_AS(Kernel::fractional_hardy(-0.1), DomainError);

  Kernel adj = Kernel::adjoint_hardy();
  REQUIRE(adj.evaluate(0.5) == 1.0);
  REQUIRE(adj.evaluate(1.0) == 1.0);
  REQUIRE(adj.evaluate(-0.7) == 1.0);
  REQUIRE(adj.evaluate(1.5) == 0.0);
  REQUIRE(adj.integrable());

  Kernel hlp = Kernel::fractional_hlp(0.25);
  REQUIRE(hlp.evaluate(0.3) == 1.0);
  REQUIRE_THAT(hlp.evaluate(16.0), WithinAbs(std::pow(16.0, -0.75), 1e-15));
  // Continuous across |t| = 1.
  REQUIRE_THAT(hlp.evaluate(1.0 + 1e-12), WithinAbs(1.0, 1e-11));
  REQUIRE_FALSE(hlp.integrable());
}

TEST_CASE("one-sided averaging kernel") {
  Kernel c = Kernel::cesaro(2.0);
  REQUIRE_THAT(c.evaluate(0.5), WithinAbs(1.0, 1e-15));
  REQUIRE(c.evaluate(-0.5) == 0.0);
  REQUIRE(c.evaluate(2.0) == 0.0);
  REQUIRE_FALSE(c.is_even());
  REQUIRE(c.integrable());
  REQUIRE_THROWS_AS(Kernel::cesaro(0.0), DomainError);

  // Unit mass for every order. The endpoint-singular orders (gamma < 1) lose
  // a little precision to cancellation in 1 - t next to the singularity.
  for (double g : {0.5, 1.0, 2.0, 3.5}) {
    Kernel kg = Kernel::cesaro(g);
    auto f = [&kg](double t) { return t == 0.0 ? 0.0 : kg.evaluate(t); };
    double tol = g < 1.0 ? 1e-7 : 1e-10;
    REQUIRE_THAT(integrate(f, Interval(0, 1), 1e-12), WithinAbs(1.0, tol));
  }
}

TEST_CASE("gaussian-transform kernel") {
  double pi = std::numbers::pi;
  Kernel g = Kernel::gaussian_hat(pi);
  REQUIRE_THAT(g.evaluate(1e-300), WithinAbs(1.0, 1e-12));
  REQUIRE_THAT(g.evaluate(1.0), WithinAbs(std::exp(-pi), 1e-15));
  REQUIRE(g.is_even());
  REQUIRE(g.integrable());
  // Unit total mass: the transform at frequency zero.
  auto f = [&g](double t) { return t == 0.0 ? 1.0 : g.evaluate(t); };
  REQUIRE_THAT(integrate(f, Interval(-kInf, kInf), 1e-12),
               WithinAbs(1.0, 1e-10));
}

TEST_CASE("envelope verification") {
  LogGrid probe(1e-3, 1e3, 200);
  Kernel k = Kernel::fractional_hardy(0.25);

  auto ok = verify_bounds(k, {1.0, 1.0, BoundsRegion::outside_unit, 0.25}, probe);
  REQUIRE(ok.pass);
  REQUIRE_THAT(ok.tightest_C1, WithinAbs(1.0, 1e-12));
  REQUIRE_THAT(ok.tightest_C2, WithinAbs(1.0, 1e-12));

  auto bad = verify_bounds(k, {0.2, 0.5, BoundsRegion::outside_unit, 0.25}, probe);
  REQUIRE_FALSE(bad.pass);
  REQUIRE(bad.violations > 0);
  REQUIRE(std::abs(bad.worst_t) > 1.0);

  Kernel c = Kernel::cesaro(2.0);
  auto inside = verify_bounds(c, {0.0, 2.0, BoundsRegion::inside_unit}, probe);
  REQUIRE(inside.pass);
  REQUIRE(inside.tightest_C2 <= 2.0);
  REQUIRE(inside.tightest_C2 > 1.9);

  REQUIRE_THROWS_AS(verify_bounds(k, {1.0, 0.5}, probe), DomainError);
  LogGrid far(2.0, 10.0, 16);
  REQUIRE_THROWS_AS(
      verify_bounds(k, {0.0, 1.0, BoundsRegion::inside_unit}, far),
      DomainError);
}

TEST_CASE("kernel transforms") {
  double pi = std::numbers::pi;
  LogGrid freq(0.25, 4.0, 9);

  auto ghat = fourier_of_kernel(Kernel::gaussian_hat(pi), freq);
  for (int i = 0; i < freq.size(); ++i) {
    double xi = freq.node(i);
    REQUIRE_THAT(ghat.value(i).real(), WithinAbs(std::exp(-pi * xi * xi), 1e-12));
    REQUIRE(ghat.value(i).imag() == 0.0);
  }

  // Indicator of |t| <= 1 transforms to sin(2 pi xi)/(pi xi).
  auto ahat = fourier_of_kernel(Kernel::adjoint_hardy(), freq);
  double at_quarter = ahat(0.25).real();
  REQUIRE_THAT(at_quarter, WithinAbs(4.0 / pi, 1e-8));
  REQUIRE_THAT(ahat(0.25).imag(), WithinAbs(0.0, 1e-10));
  for (int i = 0; i < freq.size(); ++i) {
    double xi = freq.node(i);
    REQUIRE_THAT(ahat.value(i).real(),
                 WithinAbs(std::sin(2 * pi * xi) / (pi * xi), 1e-9));
  }

  // One-sided indicator: transform picks up an imaginary part.
  auto chat = fourier_of_kernel(Kernel::cesaro(1.0), freq);
  REQUIRE_THAT(chat(0.25).real(), WithinAbs(2.0 / pi, 1e-9));
  REQUIRE_THAT(chat(0.25).imag(), WithinAbs(-2.0 / pi, 1e-9));

  REQUIRE_THROWS_AS(fourier_of_kernel(Kernel::fractional_hardy(0.5), freq),
                    DomainError);
}

TEST_CASE("tabulated kernels") {
  LogGrid g(0.01, 5.0, 240);
  auto prof = GridFunction::sample(g, [](double t) { return std::exp(-std::abs(t)); });
  Kernel k = Kernel::sampled(prof);
  REQUIRE(k.is_even());
  REQUIRE(k.integrable());
  REQUIRE_THAT(k.evaluate(2.0), WithinRel(std::exp(-2.0), 1e-3));
  REQUIRE(k.evaluate(6.0) == 0.0);

  std::vector<double> vals(g.size(), 1.0);
  vals[0] = -0.5;
  REQUIRE_THROWS_AS(Kernel::sampled(GridFunction(g, vals)), DomainError);
}

TEST_CASE("kernel file loading") {
  auto path = write_temp("kernel_ok.csv",
                         "node,value\n0.5,1.0\n1.0,2.0\n2.0,1.0\n4.0,0.5\n");
  Kernel k = load_sampled_kernel(path);
  REQUIRE(k.is_even());
  REQUIRE_THAT(k.evaluate(1.0), WithinAbs(2.0, 1e-12));
  REQUIRE_THAT(k.evaluate(-1.0), WithinAbs(2.0, 1e-12));
  REQUIRE(k.evaluate(8.0) == 0.0);
  REQUIRE(k.support_lo() == 0.5);
  REQUIRE(k.support_hi() == 4.0);

  auto bad_order = write_temp("kernel_bad1.csv", "1.0,1.0\n0.5,2.0\n");
  REQUIRE_THROWS_AS(load_sampled_kernel(bad_order), DomainError);

  auto bad_value = write_temp("kernel_bad2.csv", "0.5,1.0\n1.0,-2.0\n");
  REQUIRE_THROWS_AS(load_sampled_kernel(bad_value), DomainError);

  auto malformed = write_temp("kernel_bad3.csv", "0.5,1.0\noops\n");
  REQUIRE_THROWS_AS(load_sampled_kernel(malformed), DomainError);

  REQUIRE_THROWS_AS(load_sampled_kernel("/nonexistent/file.csv"), DomainError);
}
