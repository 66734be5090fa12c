#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "hausdorff/exponents.hpp"
#include "hausdorff/weights.hpp"

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

Weight ramp_weight(MonotoneDirection dir) {
  PosLogGrid g(0.1, 10.0, 65);
  auto prof = PosGridFunction::sample(g, [dir](double x) {
    return dir == MonotoneDirection::increasing ? 1.0 + x : 1.0 / (1.0 + x);
  });
  return Weight::even_monotone(prof, dir);
}

}  // namespace

TEST_CASE("weight construction and evaluation") {
  Weight c = Weight::constant(2.0);
  REQUIRE(c(3.0) == 2.0);
  REQUIRE(c(-3.0) == 2.0);
  REQUIRE(c.increasing());
  REQUIRE(c.decreasing());
  REQUIRE_THROWS_AS(Weight::constant(0.0), DomainError);

  Weight w = Weight::power(0.5);
  REQUIRE_THAT(w(4.0), WithinAbs(2.0, 1e-15));
  REQUIRE_THAT(w(-4.0), WithinAbs(2.0, 1e-15));
  REQUIRE(w.increasing());
  REQUIRE_FALSE(w.decreasing());
  REQUIRE(Weight::power(-0.5).decreasing());
  REQUIRE_THROWS_AS(Weight::power(-1.0), DomainError);

  Weight m = ramp_weight(MonotoneDirection::increasing);
  REQUIRE(m.increasing());
  REQUIRE_FALSE(m.decreasing());
  REQUIRE_THAT(m(1.0), WithinRel(2.0, 1e-3));
  // Constant continuation outside the sampled range.
  REQUIRE_THAT(m(0.01), WithinRel(1.1, 1e-6));
  REQUIRE_THAT(m(100.0), WithinRel(11.0, 1e-6));

  PosLogGrid g(0.1, 10.0, 9);
  auto not_mono = PosGridFunction::sample(g, [](double x) { return 1.0 + std::sin(x); });
  REQUIRE_THROWS_AS(Weight::even_monotone(not_mono, MonotoneDirection::increasing),
                    DomainError);
  auto zero = PosGridFunction::sample(g, [](double) { return 0.0; });
  REQUIRE_THROWS_AS(Weight::even_monotone(zero, MonotoneDirection::increasing),
                    DomainError);
}

TEST_CASE("weight measures") {
  REQUIRE_THAT(weight_measure(Weight::constant(2.0), Interval(0, 3)).value,
               WithinAbs(6.0, 1e-15));
  REQUIRE_THAT(weight_measure(Weight::power(0.5), Interval(0, 1)).value,
               WithinAbs(2.0 / 3.0, 1e-15));
  REQUIRE_THAT(weight_measure(Weight::power(0.5), Interval(-1, 1)).value,
               WithinAbs(4.0 / 3.0, 1e-15));
  REQUIRE_THAT(weight_measure(Weight::power(-0.5), Interval(0, 4)).value,
               WithinAbs(4.0, 1e-15));

  REQUIRE(weight_measure(Weight::power(0.5), Interval(1, kInf)).divergent);
  REQUIRE(weight_measure(Weight::constant(1.0), Interval(-kInf, kInf)).divergent);

  Weight m = ramp_weight(MonotoneDirection::increasing);
  auto v = weight_measure(m, Interval(0.1, 10.0));
  REQUIRE_FALSE(v.divergent);
  // integral of 1 + x over [0.1, 10]
  REQUIRE_THAT(v.value, WithinRel(9.9 + 0.5 * (100.0 - 0.01), 1e-3));
  REQUIRE(weight_measure(m, Interval(-kInf, kInf)).divergent);
}

TEST_CASE("averaging characteristic") {
  // Constant weight scores exactly one on every interval.
  auto rep = ap_characteristic(Weight::constant(1.0), 2.0,
                               {Interval(-1, 1), Interval(2, 5), Interval(-3, 0.5)});
  REQUIRE(rep.characteristic == 1.0);
  REQUIRE_FALSE(rep.divergent);
  for (const auto& b : rep.balls) REQUIRE(b.product == 1.0);

  // |x|^(1/2) at p = 2 on centered intervals: product is 4/3 at every radius.
  for (double r : {0.5, 1.0, 8.0}) {
    auto pw = ap_characteristic(Weight::power(0.5), 2.0, {Interval(-r, r)});
    REQUIRE_THAT(pw.characteristic, WithinAbs(4.0 / 3.0, 1e-9));
  }

  // Exponent too large for the dual factor: divergence at the origin.
  auto dv = ap_characteristic(Weight::power(1.5), 2.0,
                              {Interval(-1, 1), Interval(1, 3)});
  REQUIRE(dv.divergent);
  REQUIRE(dv.balls[0].divergent);
  REQUIRE_FALSE(dv.balls[1].divergent);
  REQUIRE(dv.characteristic > 0);  // sup over the surviving interval

  REQUIRE_THROWS_AS(ap_characteristic(Weight::constant(1.0), 1.0, {Interval(0, 1)}),
                    DomainError);
  REQUIRE_THROWS_AS(ap_characteristic(Weight::constant(1.0), 2.0, {}),
                    DomainError);
  REQUIRE_THROWS_AS(
      ap_characteristic(Weight::constant(1.0), 2.0, {Interval(0, kInf)}),
      DomainError);
}

TEST_CASE("critical index") {
  REQUIRE(critical_index(Weight::power(0.5)) == 1.5);
  REQUIRE(critical_index(Weight::power(-0.5)) == 1.0);
  REQUIRE(critical_index(Weight::power(2.0)) == 3.0);
  REQUIRE(critical_index(Weight::constant(7.0)) == 1.0);
  REQUIRE_THROWS_AS(critical_index(ramp_weight(MonotoneDirection::increasing)),
                    DomainError);
}

TEST_CASE("weight file loading") {
  auto path = write_temp("weight_ok.csv", "0.5,1.0\n1.0,2.0\n2.0,3.0\n4.0,4.0\n");
  Weight w = load_even_monotone_weight(path, MonotoneDirection::increasing);
  REQUIRE(w.increasing());
  REQUIRE_THAT(w(1.0), WithinAbs(2.0, 1e-12));
  REQUIRE_THAT(w(-2.0), WithinAbs(3.0, 1e-12));

  REQUIRE_THROWS_AS(
      load_even_monotone_weight(path, MonotoneDirection::decreasing),
      DomainError);
}

TEST_CASE("exponent bundles") {
  ExponentSet e = ExponentSet::diagonal(4.0 / 3.0, 0.5);
  REQUIRE_THAT(e.q, WithinAbs(4.0, 1e-12));
  REQUIRE_THAT(e.p_conj(), WithinAbs(4.0, 1e-12));
  REQUIRE_THAT(e.q_conj(), WithinAbs(4.0 / 3.0, 1e-12));
  REQUIRE_THAT(e.young_s(), WithinAbs(2.0, 1e-12));
  REQUIRE(e.lebesgue_diagonal());
  REQUIRE(e.power_scaling());

  ExponentSet w = ExponentSet::general(2.0, 2.0, 0.25, 1.0, 0.2);
  REQUIRE_FALSE(w.power_scaling());
  w.gamma = w.q * ((1.0 + w.alpha) / w.p - w.beta) - 1.0;
  REQUIRE(w.power_scaling(1e-12));

  REQUIRE_THROWS_AS(ExponentSet::diagonal(4.0, 0.5), DomainError);
  REQUIRE_THROWS_AS(ExponentSet::general(0.0, 2.0, 0.0), DomainError);
  REQUIRE_THROWS_AS(ExponentSet::general(2.0, 2.0, 1.0), DomainError);
  REQUIRE_THROWS_AS(ExponentSet::general(2.0, 2.0, 0.5, -1.5), DomainError);
  ExponentSet one{1.0, 2.0};
  REQUIRE_THROWS_AS(one.p_conj(), DomainError);
}
