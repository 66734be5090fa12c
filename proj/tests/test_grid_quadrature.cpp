#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "hausdorff/grid.hpp"
#include "hausdorff/quadrature.hpp"

using namespace hausdorff;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("interval validation") {
  REQUIRE_THROWS_AS(Interval(1.0, 1.0), DomainError);
  REQUIRE_THROWS_AS(Interval(2.0, 1.0), DomainError);
  REQUIRE_THROWS_AS(Interval(std::nan(""), 1.0), DomainError);
  REQUIRE(Interval(-kInf, kInf).contains(0.0));
  REQUIRE_FALSE(Interval(0.0, 1.0).finite() == false);
  REQUIRE(Interval(0.0, kInf).finite() == false);
}

TEST_CASE("integrate handles endpoint singularities and infinite tails") {
  auto inv_sqrt = [](double x) { return 1.0 / std::sqrt(x); };
  REQUIRE_THAT(integrate(inv_sqrt, Interval(0, 1)), WithinAbs(2.0, 1e-12));

  auto inv_sq = [](double t) { return 1.0 / (t * t); };
  REQUIRE_THAT(integrate(inv_sq, Interval(1, kInf)), WithinAbs(1.0, 1e-12));

  auto gauss = [](double x) { return std::exp(-std::numbers::pi * x * x); };
  REQUIRE_THAT(integrate(gauss, Interval(-kInf, kInf)), WithinAbs(1.0, 1e-12));

  auto cauchy = [](double x) { return 1.0 / (1.0 + x * x); };
  REQUIRE_THAT(integrate(cauchy, Interval(-kInf, kInf)),
               WithinAbs(std::numbers::pi, 1e-12));
}

TEST_CASE("integrate splits at breakpoints") {
  // A kink at x = 1/3; without the split the rule still converges, with it
  // the result is exact to machine precision.
  auto kink = [](double x) { return std::abs(x - 1.0 / 3.0); };
  double exact = 0.5 * (1.0 / 9.0 + 4.0 / 9.0);
  REQUIRE_THAT(integrate(kink, Interval(0, 1), 1e-12, {1.0 / 3.0}),
               WithinAbs(exact, 1e-14));

  // Indicator of (0, 1) integrated over the whole line via a breakpoint list.
  auto ind = [](double x) { return (x > 0 && x < 1) ? 1.0 : 0.0; };
  REQUIRE_THAT(integrate(ind, Interval(-2, 3), 1e-12, {0.0, 1.0}),
               WithinAbs(1.0, 1e-12));
}

TEST_CASE("integrate reports failure on a non-integrable singularity") {
  auto bad = [](double x) { return std::pow(x, -1.25); };
  REQUIRE_THROWS_AS(integrate(bad, Interval(0, 1)), ConvergenceError);
}

TEST_CASE("probe_integrate classifies convergent integrals") {
  auto inv_sqrt = [](double x) { return 1.0 / std::sqrt(x); };
  auto r = probe_integrate(inv_sqrt, Interval(0, 1));
  REQUIRE_FALSE(r.divergent);
  REQUIRE_THAT(r.value, WithinAbs(2.0, 1e-9));

  auto inv_sq = [](double t) { return 1.0 / (t * t); };
  r = probe_integrate(inv_sq, Interval(1, kInf));
  REQUIRE_FALSE(r.divergent);
  REQUIRE_THAT(r.value, WithinAbs(1.0, 1e-9));

  auto expo = [](double t) { return std::exp(-t); };
  r = probe_integrate(expo, Interval(0, kInf));
  REQUIRE_FALSE(r.divergent);
  REQUIRE_THAT(r.value, WithinAbs(1.0, 1e-9));

  auto cauchy = [](double x) { return 1.0 / (1.0 + x * x); };
  r = probe_integrate(cauchy, Interval(-kInf, kInf));
  REQUIRE_FALSE(r.divergent);
  REQUIRE_THAT(r.value, WithinAbs(std::numbers::pi, 1e-9));

  // Negative-side half line.
  auto expo_neg = [](double t) { return std::exp(t); };
  r = probe_integrate(expo_neg, Interval(-kInf, 0));
  REQUIRE_FALSE(r.divergent);
  REQUIRE_THAT(r.value, WithinAbs(1.0, 1e-9));
}

TEST_CASE("probe_integrate flags divergence at the origin and at infinity") {
  auto pow_bad = [](double x) { return std::pow(x, -1.25); };
  REQUIRE(probe_integrate(pow_bad, Interval(0, 1)).divergent);

  // Borderline logarithmic divergence in both directions.
  auto inv = [](double x) { return 1.0 / x; };
  REQUIRE(probe_integrate(inv, Interval(0, 1)).divergent);
  REQUIRE(probe_integrate(inv, Interval(1, kInf)).divergent);

  auto slow = [](double x) { return std::pow(x, -0.7); };
  REQUIRE(probe_integrate(slow, Interval(1, kInf)).divergent);
  REQUIRE_FALSE(probe_integrate(slow, Interval(0, 1)).divergent);

  // Divergence mirrored to the negative axis.
  auto inv_neg = [](double x) { return 1.0 / std::abs(x); };
  REQUIRE(probe_integrate(inv_neg, Interval(-1, 0)).divergent);
  REQUIRE(probe_integrate(inv_neg, Interval(-kInf, -1)).divergent);
}

TEST_CASE("sup_over_scale finds interior maxima") {
  auto g = [](double a) { return a * std::exp(-a); };
  auto r = sup_over_scale(g, Interval(1e-6, 1e6));
  REQUIRE_FALSE(r.divergent);
  REQUIRE_THAT(r.arg, WithinRel(1.0, 1e-6));
  REQUIRE_THAT(r.value, WithinAbs(std::exp(-1.0), 1e-12));
}

TEST_CASE("sup_over_scale flags boundary growth") {
  auto grow = [](double a) { return std::pow(a, 0.3); };
  auto r = sup_over_scale(grow, Interval(1e-6, 1e6));
  REQUIRE(r.divergent);
  REQUIRE_THAT(r.arg, WithinRel(1e6, 1e-9));

  auto shrink = [](double a) { return std::pow(a, -0.3); };
  r = sup_over_scale(shrink, Interval(1e-6, 1e6));
  REQUIRE(r.divergent);
  REQUIRE_THAT(r.arg, WithinRel(1e-6, 1e-9));

  auto bad = [](double) { return std::nan(""); };
  REQUIRE_THROWS_AS(sup_over_scale(bad, Interval(1e-6, 1e6)), DomainError);
}

TEST_CASE("log grid layout") {
  LogGrid g(0.5, 32.0, 13);
  REQUIRE(g.size() == 26);
  REQUIRE_THAT(g.node(13), WithinRel(0.5, 1e-15));
  REQUIRE_THAT(g.node(25), WithinRel(32.0, 1e-12));
  REQUIRE_THAT(g.node(0), WithinRel(-32.0, 1e-12));
  for (int i = 0; i + 1 < g.size(); ++i) REQUIRE(g.node(i) < g.node(i + 1));
  for (int i = 0; i < g.size(); ++i) {
    REQUIRE_THAT(g.node(i), WithinRel(-g.node(g.size() - 1 - i), 1e-14));
  }
  REQUIRE_THROWS_AS(LogGrid(0.0, 1.0, 8), DomainError);
  REQUIRE_THROWS_AS(LogGrid(2.0, 1.0, 8), DomainError);
  REQUIRE_THROWS_AS(LogGrid(1.0, 2.0, 1), DomainError);
  REQUIRE(make_log_grid(0.5, 32.0, 13) == g);
}

TEST_CASE("grid function interpolation is linear in log magnitude") {
  LogGrid g(0.25, 64.0, 33);
  auto f = GridFunction::sample(g, [](double x) { return std::log(std::abs(x)); });
  // ln|x| is exactly linear in u, so interpolation is exact everywhere inside.
  for (double x : {0.3, 1.7, 5.0, 41.0, -0.3, -1.7, -41.0}) {
    REQUIRE_THAT(f(x), WithinAbs(std::log(std::abs(x)), 1e-12));
  }
  REQUIRE(f(0.0) == 0.0);
  REQUIRE(f(0.1) == 0.0);
  REQUIRE(f(100.0) == 0.0);
  REQUIRE(f(-100.0) == 0.0);

  // Sign branches are independent.
  auto odd = GridFunction::sample(g, [](double x) { return x > 0 ? 2.0 : -3.0; });
  REQUIRE(odd(1.0) == 2.0);
  REQUIRE(odd(-1.0) == -3.0);
}

TEST_CASE("grid function validation") {
  LogGrid g(1.0, 2.0, 4);
  REQUIRE_THROWS_AS(GridFunction(g, std::vector<double>(7, 1.0)), DomainError);
  std::vector<double> vals(8, 1.0);
  vals[3] = std::nan("");
  REQUIRE_THROWS_AS(GridFunction(g, vals), DomainError);
}

TEST_CASE("positive grid function") {
  PosLogGrid g(0.5, 8.0, 17);
  REQUIRE(g.size() == 17);
  REQUIRE_THAT(g.node(0), WithinRel(0.5, 1e-15));
  REQUIRE_THAT(g.node(16), WithinRel(8.0, 1e-13));
  auto f = PosGridFunction::sample(g, [](double x) { return 3.0 * std::log(x); });
  REQUIRE_THAT(f(1.3), WithinAbs(3.0 * std::log(1.3), 1e-12));
  REQUIRE(f(0.4) == 0.0);
  REQUIRE(f(9.0) == 0.0);
  LogGrid sym(0.5, 8.0, 17);
  REQUIRE(sym.positive_half() == g);
}
