#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "exponents.hpp"
#include "fourier.hpp"
#include "grid.hpp"
#include "hardy_space.hpp"
#include "hausdorff_operator.hpp"
#include "inequalities.hpp"
#include "kernels.hpp"
#include "norms.hpp"
#include "report.hpp"
#include "special.hpp"
#include "weights.hpp"

namespace hausdorff {

using json = nlohmann::json;

// A configuration field is missing, has the wrong type, or holds an
// inadmissible value. The message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One plot-ready column pair written to series/<name>.csv.
struct Series {
  std::string x_name;
  std::string y_name;
  std::vector<std::array<double, 2>> points;
};

// Everything one experiment run produces: machine-readable records (one per
// quantity or verdict), named series, and the aggregate verdict that decides
// the exit status. Records are plain JSON objects; the std::map-backed json
// type keeps keys sorted, which together with the shortest-round-trip float
// encoding makes the serialized output byte-deterministic.
struct ReportBundle {
  std::vector<json> records;
  std::map<std::string, Series> series;
  bool all_pass = true;
  int verdicts = 0;
};

namespace detail {

// Non-finite doubles have no JSON encoding; they serialize as null and the
// accompanying divergence flags carry the meaning.
inline json num(double v) { return std::isfinite(v) ? json(v) : json(); }

// Canonical spelling of a number inside record and series names, taken from
// the JSON encoder so names and values never disagree (0.25, 2.0, ...).
inline std::string tag(double v) { return json(v).dump(); }

inline void add_meta(ReportBundle& b, const std::string& experiment,
                     std::uint64_t seed) {
  json r;
  r["kind"] = "meta";
  r["name"] = "run";
  r["experiment"] = experiment;
  r["seed"] = seed;
  b.records.push_back(std::move(r));
}

inline void add_quantity(ReportBundle& b, const std::string& name,
                         double value, json extra = json::object()) {
  json r = std::move(extra);
  r["kind"] = "quantity";
  r["name"] = name;
  r["value"] = num(value);
  b.records.push_back(std::move(r));
}

inline void add_verdict(ReportBundle& b, const std::string& name, bool pass,
                        double tolerance, double observed,
                        const std::string& provenance,
                        json extra = json::object()) {
  json r = std::move(extra);
  r["kind"] = "verdict";
  r["name"] = name;
  r["pass"] = pass;
  r["tolerance"] = tolerance;
  r["observed"] = num(observed);
  r["provenance"] = provenance;
  b.records.push_back(std::move(r));
  b.all_pass = b.all_pass && pass;
  ++b.verdicts;
}

inline Series& add_series(ReportBundle& b, const std::string& name,
                          const std::string& x_name,
                          const std::string& y_name) {
  Series& s = b.series[name];
  s.x_name = x_name;
  s.y_name = y_name;
  return s;
}

// Typed cursor over a JSON object that reports the dotted path of whatever
// field fails, so a bad config dies with its exact location.
class Conf {
 public:
  Conf(const json* j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_->is_object()) {
      throw ConfigError(where() + ": expected an object");
    }
  }

  const std::string& path() const { return path_; }
  bool has(const char* key) const { return j_->contains(key); }

  Conf child(const char* key) const { return Conf(&field(key), dotted(key)); }

  double number(const char* key) const {
    const json& v = field(key);
    if (!v.is_number()) {
      throw ConfigError(dotted(key) + ": expected a number");
    }
    return v.get<double>();
  }
  double number_or(const char* key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  long long integer(const char* key) const {
    const json& v = field(key);
    if (!v.is_number_integer()) {
      throw ConfigError(dotted(key) + ": expected an integer");
    }
    return v.get<long long>();
  }
  long long integer_or(const char* key, long long fallback) const {
    return has(key) ? integer(key) : fallback;
  }

  bool flag_or(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = field(key);
    if (!v.is_boolean()) {
      throw ConfigError(dotted(key) + ": expected true or false");
    }
    return v.get<bool>();
  }

  std::string text(const char* key) const {
    const json& v = field(key);
    if (!v.is_string()) {
      throw ConfigError(dotted(key) + ": expected a string");
    }
    return v.get<std::string>();
  }

  std::vector<double> numbers(const char* key) const {
    const json& v = field(key);
    if (!v.is_array() || v.empty()) {
      throw ConfigError(dotted(key) + ": expected a nonempty array of numbers");
    }
    std::vector<double> out;
    for (const json& e : v) {
      if (!e.is_number()) {
        throw ConfigError(dotted(key) + ": expected a nonempty array of numbers");
      }
      out.push_back(e.get<double>());
    }
    return out;
  }
  std::vector<double> numbers_or(const char* key,
                                 std::vector<double> fallback) const {
    return has(key) ? numbers(key) : std::move(fallback);
  }

  std::vector<long long> integers(const char* key) const {
    const json& v = field(key);
    if (!v.is_array() || v.empty()) {
      throw ConfigError(dotted(key) +
                        ": expected a nonempty array of integers");
    }
    std::vector<long long> out;
    for (const json& e : v) {
      if (!e.is_number_integer()) {
        throw ConfigError(dotted(key) +
                          ": expected a nonempty array of integers");
      }
      out.push_back(e.get<long long>());
    }
    return out;
  }

  std::vector<std::string> texts(const char* key) const {
    const json& v = field(key);
    if (!v.is_array() || v.empty()) {
      throw ConfigError(dotted(key) + ": expected a nonempty array of strings");
    }
    std::vector<std::string> out;
    for (const json& e : v) {
      if (!e.is_string()) {
        throw ConfigError(dotted(key) + ": expected a nonempty array of strings");
      }
      out.push_back(e.get<std::string>());
    }
    return out;
  }

  std::vector<std::array<double, 2>> number_pairs(const char* key) const {
    const json& v = field(key);
    if (!v.is_array() || v.empty()) {
      throw ConfigError(dotted(key) +
                        ": expected a nonempty array of [lo, hi] pairs");
    }
    std::vector<std::array<double, 2>> out;
    for (const json& e : v) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
          !e[1].is_number()) {
        throw ConfigError(dotted(key) +
                          ": expected a nonempty array of [lo, hi] pairs");
      }
      out.push_back({e[0].get<double>(), e[1].get<double>()});
    }
    return out;
  }

  std::vector<Conf> objects(const char* key) const {
    const json& v = field(key);
    if (!v.is_array() || v.empty()) {
      throw ConfigError(dotted(key) + ": expected a nonempty array of objects");
    }
    std::vector<Conf> out;
    int i = 0;
    for (const json& e : v) {
      out.emplace_back(&e, dotted(key) + "[" + std::to_string(i++) + "]");
    }
    return out;
  }

  // Rejects fields outside the handler's vocabulary; a typo in an optional
  // key would otherwise silently fall back to the default.
  void allow(std::initializer_list<const char*> keys) const {
    for (auto it = j_->begin(); it != j_->end(); ++it) {
      bool known = false;
      for (const char* k : keys) known = known || it.key() == k;
      if (!known) throw ConfigError(dotted(it.key()) + ": unknown field");
    }
  }

 private:
  std::string where() const { return path_.empty() ? "config" : path_; }
  std::string dotted(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }
  const json& field(const char* key) const {
    if (!j_->contains(key)) {
      throw ConfigError(dotted(key) + ": missing required field");
    }
    return j_->at(key);
  }

  const json* j_;
  std::string path_;
};

// ---------------------------------------------------------------------------
// Spec parsers shared by the experiment handlers.

inline Kernel parse_kernel(const Conf& c) {
  std::string type = c.text("type");
  if (type == "fractional_hardy") {
    c.allow({"type", "beta"});
    return Kernel::fractional_hardy(c.number("beta"));
  }
  if (type == "adjoint_hardy") {
    c.allow({"type"});
    return Kernel::adjoint_hardy();
  }
  if (type == "fractional_hlp") {
    c.allow({"type", "beta"});
    return Kernel::fractional_hlp(c.number("beta"));
  }
  if (type == "cesaro") {
    c.allow({"type", "gamma"});
    return Kernel::cesaro(c.number("gamma"));
  }
  if (type == "gaussian_hat") {
    c.allow({"type", "sigma"});
    return Kernel::gaussian_hat(c.number("sigma"));
  }
  throw ConfigError(c.path() + ".type: unknown kernel '" + type + "'");
}

inline Weight parse_weight(const Conf& c,
                           const std::filesystem::path& base_dir) {
  std::string type = c.text("type");
  if (type == "constant") {
    c.allow({"type", "level"});
    return Weight::constant(c.number_or("level", 1.0));
  }
  if (type == "power") {
    c.allow({"type", "exponent"});
    return Weight::power(c.number("exponent"));
  }
  if (type == "even_monotone") {
    c.allow({"type", "path", "direction", "resample"});
    std::filesystem::path p = base_dir / c.text("path");
    if (!std::filesystem::exists(p)) {
      throw ConfigError(c.path() + ".path: file not found: " + p.string());
    }
    std::string dir = c.text("direction");
    MonotoneDirection d;
    if (dir == "increasing") {
      d = MonotoneDirection::increasing;
    } else if (dir == "decreasing") {
      d = MonotoneDirection::decreasing;
    } else {
      throw ConfigError(c.path() +
                        ".direction: expected increasing or decreasing");
    }
    return load_even_monotone_weight(
        p.string(), d, static_cast<int>(c.integer_or("resample", 0)));
  }
  throw ConfigError(c.path() + ".type: unknown weight '" + type + "'");
}

inline Weight parse_weight_or_one(const Conf& parent, const char* key,
                                  const std::filesystem::path& base_dir) {
  return parent.has(key) ? parse_weight(parent.child(key), base_dir)
                         : Weight::constant(1.0);
}

inline ExponentSet parse_exponents(const Conf& c) {
  c.allow({"p", "q", "beta", "alpha", "gamma"});
  double p = c.number("p");
  double beta = c.number("beta");
  ExponentSet e = c.has("q")
                      ? ExponentSet::general(p, c.number("q"), beta,
                                             c.number_or("alpha", 0.0),
                                             c.number_or("gamma", 0.0))
                      : ExponentSet::diagonal(p, beta);
  if (!c.has("q")) {
    e.alpha = c.number_or("alpha", 0.0);
    e.gamma = c.number_or("gamma", 0.0);
  }
  return e;
}

inline RealFunction one_sided_spike(double eps) {
  if (!(eps > 0) || !std::isfinite(eps)) {
    throw ConfigError("spike epsilon must be positive");
  }
  RealFunction f;
  f.fn = [eps](double x) {
    return x > 0 && x <= 1.0 ? std::pow(x, -0.5 + eps) : 0.0;
  };
  f.breakpoints = {1.0};
  f.support_radius = 1.0;
  return f;
}

inline RealFunction parse_function(const Conf& c) {
  const double pi = std::numbers::pi;
  std::string type = c.text("type");
  RealFunction f;
  if (type == "gaussian") {
    c.allow({"type"});
    f.fn = [pi](double x) { return std::exp(-pi * x * x); };
    return f;
  }
  if (type == "gaussian_slope") {
    c.allow({"type"});
    f.fn = [pi](double x) { return -2.0 * pi * x * std::exp(-pi * x * x); };
    return f;
  }
  if (type == "zero") {
    c.allow({"type"});
    f.fn = [](double) { return 0.0; };
    return f;
  }
  if (type == "indicator") {
    c.allow({"type", "radius"});
    double r = c.number("radius");
    if (!(r > 0) || !std::isfinite(r)) {
      throw ConfigError(c.path() + ".radius: must be positive and finite");
    }
    f.fn = [r](double x) { return std::abs(x) <= r ? 1.0 : 0.0; };
    f.breakpoints = {-r, r};
    f.support_radius = r;
    return f;
  }
  if (type == "spike") {
    c.allow({"type", "epsilon"});
    return one_sided_spike(c.number("epsilon"));
  }
  throw ConfigError(c.path() + ".type: unknown function '" + type + "'");
}

inline Interval parse_scale_range(const Conf& c, const char* lo_key,
                                  const char* hi_key) {
  double lo = c.number(lo_key);
  double hi = c.number(hi_key);
  if (!(lo > 0) || !(hi > lo) || !std::isfinite(hi)) {
    throw ConfigError(c.path() + ": need 0 < " + lo_key + " < " + hi_key +
                      " < inf");
  }
  return Interval(lo, hi);
}

inline int parse_count(const Conf& c, const char* key, long long lo,
                       long long hi) {
  long long n = c.integer(key);
  if (n < lo || n > hi) {
    throw ConfigError(c.path() + "." + key + ": must lie in [" +
                      std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return static_cast<int>(n);
}

inline TestFamily parse_family(const Conf& c, const Weight& v,
                               const ExponentSet& e) {
  std::string kind = c.text("kind");
  if (kind == "inner" || kind == "outer") {
    c.allow({"kind", "scale_lo", "scale_hi", "count"});
    Interval scales = parse_scale_range(c, "scale_lo", "scale_hi");
    int count = parse_count(c, "count", 1, 512);
    return extremal_family(
        kind == "inner" ? ExtremalKind::inner : ExtremalKind::outer, v, e,
        scales, count);
  }
  if (kind == "spike") {
    c.allow({"kind", "epsilons"});
    TestFamily fam;
    for (double eps : c.numbers("epsilons")) {
      fam.members.push_back(one_sided_spike(eps));
      fam.scales.push_back(eps);
    }
    return fam;
  }
  throw ConfigError(c.path() + ".kind: unknown family '" + kind + "'");
}

inline LogGrid parse_log_grid(const Conf& c) {
  c.allow({"r_min", "r_max", "nodes_per_side"});
  Interval r = parse_scale_range(c, "r_min", "r_max");
  return LogGrid(r.lo, r.hi, parse_count(c, "nodes_per_side", 2, 100000));
}

inline PosLogGrid parse_pos_log_grid(const Conf& c) {
  c.allow({"r_min", "r_max", "nodes"});
  Interval r = parse_scale_range(c, "r_min", "r_max");
  return PosLogGrid(r.lo, r.hi, parse_count(c, "nodes", 2, 1 << 20));
}

inline UniformGrid parse_uniform_grid(const Conf& c) {
  c.allow({"half_width", "nodes"});
  double l = c.number("half_width");
  if (!(l > 0) || !std::isfinite(l)) {
    throw ConfigError(c.path() + ".half_width: must be positive and finite");
  }
  long long n = c.integer("nodes");
  if (n < 8 || n > (1 << 24) || (n & (n - 1)) != 0) {
    throw ConfigError(c.path() + ".nodes: must be a power of two in [8, 2^24]");
  }
  return UniformGrid(l, static_cast<int>(n));
}

inline MaximalConfig parse_maximal(const Conf& c) {
  c.allow({"s_min", "s_max", "rho"});
  MaximalConfig cfg;
  cfg.s_min = c.number_or("s_min", cfg.s_min);
  cfg.s_max = c.number_or("s_max", cfg.s_max);
  cfg.rho = c.number_or("rho", cfg.rho);
  cfg.validate();
  return cfg;
}

inline DerivativeProfile parse_profile(const Conf& c) {
  std::string type = c.text("type");
  if (type == "gaussian_hat") {
    c.allow({"type", "sigma"});
    return gaussian_hat_profile(c.number("sigma"));
  }
  if (type == "damped_moment") {
    c.allow({"type", "power", "sigma"});
    return damped_moment_profile(parse_count(c, "power", 0, 16),
                                 c.number("sigma"));
  }
  if (type == "exp") {
    c.allow({"type", "rate"});
    return exp_profile(c.number_or("rate", 1.0));
  }
  if (type == "xexp") {
    c.allow({"type", "rate"});
    return xexp_profile(c.number_or("rate", 1.0));
  }
  if (type == "zero") {
    c.allow({"type"});
    return zero_profile();
  }
  throw ConfigError(c.path() + ".type: unknown profile '" + type + "'");
}

// ---------------------------------------------------------------------------
// Experiment handlers. Each consumes the validated config, runs the library
// calls, and appends records, verdicts, and series to the bundle.

inline void run_apply(const Conf& c, const std::filesystem::path&,
                      std::uint64_t, ReportBundle& b) {
  c.allow({"experiment", "seed", "kernel", "beta", "function", "grid",
           "tolerance", "expect_finite"});
  Kernel k = parse_kernel(c.child("kernel"));
  double beta = c.number("beta");
  RealFunction f = parse_function(c.child("function"));
  LogGrid grid = parse_log_grid(c.child("grid"));
  double tol = c.number_or("tolerance", 1e-9);
  bool expect_finite = c.flag_or("expect_finite", true);

  auto app = apply_on_grid(k, beta, f, grid, tol);
  Series& s = add_series(b, "image", "x", "value");
  double peak = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    double v = app.values.value(i);
    s.points.push_back({grid.node(i), v});
    peak = std::max(peak, std::abs(v));
  }
  json extra;
  extra["nodes"] = app.divergent_nodes;
  add_quantity(b, "divergent_nodes",
               static_cast<double>(app.divergent_nodes.size()),
               std::move(extra));
  add_quantity(b, "max_abs_value", peak);
  add_verdict(b, "image-finite-on-grid",
              app.divergent_nodes.empty() == expect_finite, 0.0,
              static_cast<double>(app.divergent_nodes.size()),
              "pointwise quadrature of the averaging operator converges at "
              "every probe node");
}

inline void run_norms(const Conf& c, const std::filesystem::path& base,
                      std::uint64_t, ReportBundle& b) {
  c.allow({"experiment", "seed", "function", "weight", "p_values", "grid",
           "tolerance"});
  RealFunction f = parse_function(c.child("function"));
  Weight w = parse_weight(c.child("weight"), base);
  std::vector<double> ps = c.numbers("p_values");
  double tol = c.number_or("tolerance", 1e-10);
  for (double p : ps) {
    if (!(p > 0) || !std::isfinite(p)) {
      throw ConfigError("p_values: entries must be positive and finite");
    }
  }

  for (double p : ps) {
    NormValue nv = weighted_lp_norm(f, w, p, tol);
    json extra;
    extra["divergent"] = nv.divergent;
    add_quantity(b, "lp_norm_p" + tag(p), nv.value, std::move(extra));
  }

  if (c.has("grid")) {
    LogGrid grid = parse_log_grid(c.child("grid"));
    std::vector<double> vals(grid.size());
    for (int i = 0; i < grid.size(); ++i) vals[i] = f(grid.node(i));
    GridFunction gf(grid, std::move(vals));
    Series& s = add_series(b, "function", "x", "value");
    for (int i = 0; i < grid.size(); ++i) {
      s.points.push_back({grid.node(i), gf.value(i)});
    }
    for (double p : ps) {
      NormValue strong = weighted_lp_norm(gf, w, p);
      NormValue weak = weak_lp_norm(gf, w, p);
      add_quantity(b, "grid_lp_norm_p" + tag(p), strong.value);
      add_quantity(b, "weak_lp_norm_p" + tag(p), weak.value);
      double ratio = strong.value > 0 ? weak.value / strong.value : 0.0;
      add_verdict(b, "weak-below-strong-p" + tag(p),
                  weak.value <= strong.value * (1.0 + 1e-6), 1e-6, ratio,
                  "the distributional weak norm is dominated by the strong "
                  "norm of the same interpolant");
    }
  }
}

inline void run_constants(const Conf& c, const std::filesystem::path& base,
                          std::uint64_t, ReportBundle& b) {
  c.allow({"experiment", "seed", "kernel", "exponents", "u", "v", "compute",
           "profile", "search"});
  ExponentSet e = parse_exponents(c.child("exponents"));
  Weight u = parse_weight_or_one(c, "u", base);
  Weight v = parse_weight_or_one(c, "v", base);
  std::vector<std::string> compute =
      c.has("compute") ? c.texts("compute")
                       : std::vector<std::string>{"k", "a", "b"};
  Interval search(1e-6, 1e6);
  if (c.has("search")) {
    Conf sc = c.child("search");
    sc.allow({"lo", "hi"});
    search = parse_scale_range(sc, "lo", "hi");
  }

  struct ProfileSpec {
    Interval range{1e-2, 1e2};
    int count = 50;
    double max_spread = 1e-6;
  };
  std::optional<ProfileSpec> prof;
  if (c.has("profile")) {
    Conf pc = c.child("profile");
    pc.allow({"lo", "hi", "count", "max_spread"});
    ProfileSpec ps;
    ps.range = parse_scale_range(pc, "lo", "hi");
    ps.count = parse_count(pc, "count", 2, 100000);
    ps.max_spread = pc.number_or("max_spread", 1e-6);
    prof = ps;
  }

  for (const std::string& item : compute) {
    if (item == "k") {
      Kernel k = parse_kernel(c.child("kernel"));
      NormValue kv = k_constant(k, e.beta, e.q);
      json extra;
      extra["divergent"] = kv.divergent;
      extra["provenance"] = "scale-integral constant of the diagonal bound";
      add_quantity(b, "k_constant", kv.value, std::move(extra));
    } else if (item == "k_general") {
      Kernel k = parse_kernel(c.child("kernel"));
      NormValue kv = k_general(k, e.young_s(), e.q, e.gamma);
      json extra;
      extra["divergent"] = kv.divergent;
      extra["provenance"] = "scale-integral constant of the power-weight bound";
      add_quantity(b, "k_general", kv.value, std::move(extra));
    } else if (item == "a" || item == "b") {
      bool tail_core = item == "a";
      TwoWeightConstant t = tail_core ? a_constant(u, v, e, search)
                                      : b_constant(u, v, e, search);
      json extra;
      extra["maximizer"] = num(t.maximizer);
      extra["divergent"] = t.divergent;
      extra["provenance"] = tail_core
                                ? "tail/core two-weight constant"
                                : "core/tail two-weight constant";
      add_quantity(b, item + "_constant", t.divergent ? kInf : t.value,
                   std::move(extra));
      if (prof) {
        CutoffProfile cp =
            tail_core
                ? a_constant_profile(u, v, e, prof->range, prof->count)
                : b_constant_profile(u, v, e, prof->range, prof->count);
        Series& s = add_series(b, item + "_profile", "cutoff", "product");
        for (std::size_t i = 0; i < cp.cutoffs.size(); ++i) {
          s.points.push_back({cp.cutoffs[i], cp.products[i]});
        }
        json ve;
        ve["mean"] = num(cp.mean);
        add_verdict(b, item + "-cutoff-independence",
                    !cp.divergent && cp.rel_spread <= prof->max_spread,
                    prof->max_spread, cp.rel_spread,
                    "the two-weight product is independent of the cutoff when "
                    "the weights match the operator scaling",
                    std::move(ve));
      }
    } else {
      throw ConfigError("compute: unknown constant '" + item + "'");
    }
  }
}

inline void run_sandwich(const Conf& c, const std::filesystem::path& base,
                         ReportBundle& b, bool increasing) {
  c.allow({"experiment", "seed", "kernel", "exponents", "u", "v", "c1", "c2",
           "family", "tolerance"});
  Kernel k = parse_kernel(c.child("kernel"));
  ExponentSet e = parse_exponents(c.child("exponents"));
  Weight u = parse_weight_or_one(c, "u", base);
  Weight v = parse_weight_or_one(c, "v", base);
  double c1 = c.number_or("c1", 1.0);
  double c2 = c.number_or("c2", 1.0);
  TestFamily fam = parse_family(c.child("family"), v, e);
  double tol = c.number_or("tolerance", tolerances::verdict);

  SandwichReport rep =
      increasing ? verify_sandwich_increasing(k, e, u, v, c1, c2, fam, tol)
                 : verify_sandwich_decreasing(k, e, u, v, c1, c2, fam, tol);

  json tw;
  tw["maximizer"] = num(rep.two_weight_arg);
  tw["provenance"] = increasing ? "tail/core two-weight constant"
                                : "core/tail two-weight constant";
  add_quantity(b, "two_weight_constant", rep.two_weight, std::move(tw));
  json kx;
  kx["core"] = num(rep.k_core);
  kx["tail"] = num(rep.k_tail);
  add_quantity(b, "k_constant", rep.k_value, std::move(kx));
  add_quantity(b, "lower_bound", rep.lower);
  add_quantity(b, "upper_bound", rep.upper);

  json emp;
  emp["best_scale"] = num(rep.empirical.best_scale);
  emp["usable"] = rep.empirical.usable;
  emp["divergent"] = rep.empirical.divergent;
  json skipped = json::array();
  Series& s = add_series(b, "ratios", "scale", "ratio");
  for (const RatioSample& r : rep.empirical.samples) {
    if (r.usable) {
      s.points.push_back({r.scale, r.ratio});
    } else {
      json sk;
      sk["scale"] = num(r.scale);
      sk["note"] = r.note;
      skipped.push_back(std::move(sk));
    }
  }
  emp["skipped"] = std::move(skipped);
  add_quantity(b, "empirical_best", rep.empirical.best, std::move(emp));

  add_verdict(b, "empirical-above-lower", rep.lower_ok, tol,
              rep.empirical.best,
              "the family ratio dominates the envelope constant times the "
              "two-weight constant");
  add_verdict(b, "empirical-below-upper", rep.upper_ok, tol,
              rep.empirical.best,
              "the family ratio stays below the closed-form upper bound");
  json notes;
  notes["notes"] = rep.notes;
  add_verdict(b, "sandwich", rep.pass, tol, rep.empirical.best,
              increasing
                  ? "two-sided bracket for the best constant, nondecreasing "
                    "weights"
                  : "two-sided bracket for the best constant, nonincreasing "
                    "weights",
              std::move(notes));
}

inline void run_hardy_ineq(const Conf& c, const std::filesystem::path& base,
                           std::uint64_t, ReportBundle& b) {
  c.allow({"experiment", "seed", "exponents", "u", "v", "family", "directions",
           "tolerance"});
  ExponentSet e = parse_exponents(c.child("exponents"));
  Weight u = parse_weight_or_one(c, "u", base);
  Weight v = parse_weight_or_one(c, "v", base);
  Conf fc = c.child("family");
  fc.allow({"scale_lo", "scale_hi", "count"});
  Interval scales = parse_scale_range(fc, "scale_lo", "scale_hi");
  int count = parse_count(fc, "count", 1, 512);
  double tol = c.number_or("tolerance", tolerances::verdict);
  std::vector<std::string> dirs =
      c.has("directions") ? c.texts("directions")
                          : std::vector<std::string>{"inner", "outer"};

  for (const std::string& dir : dirs) {
    ExtremalKind kind;
    if (dir == "inner") {
      kind = ExtremalKind::inner;
    } else if (dir == "outer") {
      kind = ExtremalKind::outer;
    } else {
      throw ConfigError("directions: expected inner or outer, got '" + dir +
                        "'");
    }
    TestFamily fam = extremal_family(kind, v, e, scales, count);
    LocalizedAverageReport rep =
        localized_average_check(kind, e, u, v, fam, tol);
    json tw;
    tw["maximizer"] = num(rep.two_weight_arg);
    add_quantity(b, dir + "_two_weight", rep.two_weight, std::move(tw));
    json emp;
    emp["bracket_lo"] = num(rep.bracket_lo);
    emp["bracket_hi"] = num(rep.bracket_hi);
    emp["usable"] = rep.empirical.usable;
    emp["divergent"] = rep.empirical.divergent;
    add_quantity(b, dir + "_empirical_best", rep.empirical.best,
                 std::move(emp));
    Series& s = add_series(b, dir + "_ratios", "scale", "ratio");
    for (const RatioSample& r : rep.empirical.samples) {
      if (r.usable) s.points.push_back({r.scale, r.ratio});
    }
    add_verdict(b, dir + "-bracket", rep.pass, tol, rep.empirical.best,
                "the localized averaging bound holds with best constant "
                "inside the explicit two-weight bracket");
  }
}

inline void run_young(const Conf& c, const std::filesystem::path&,
                      std::uint64_t seed, ReportBundle& b) {
  c.allow({"experiment", "seed", "pairs", "exponent_pairs", "grid", "slack"});
  int pairs = parse_count(c, "pairs", 1, 100000);
  std::vector<std::array<double, 2>> expo =
      c.has("exponent_pairs")
          ? c.number_pairs("exponent_pairs")
          : std::vector<std::array<double, 2>>{
                {1.0, 1.0}, {2.0, 1.0}, {1.5, 1.2}, {3.0, 1.1}};
  for (const auto& pr : expo) {
    if (!(pr[0] >= 1) || !(pr[1] >= 1) || !(1.0 / pr[0] + 1.0 / pr[1] > 1.0)) {
      throw ConfigError(
          "exponent_pairs: each [p, s] needs p, s >= 1 and 1/p + 1/s > 1");
    }
  }
  PosLogGrid grid = parse_pos_log_grid(c.child("grid"));
  double slack = c.number_or("slack", 1e-6);

  std::mt19937_64 rng(seed);
  auto draw = [&rng]() {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  int passed = 0;
  double min_margin = kInf;
  json failures = json::array();
  Series& s = add_series(b, "margins", "trial", "margin");
  for (int trial = 0; trial < pairs; ++trial) {
    std::vector<double> fv(grid.size()), gv(grid.size());
    for (double& x : fv) x = draw();
    for (double& x : gv) x = draw();
    auto [p, q] = expo[trial % expo.size()];
    YoungCheck chk = young_mult_check(PosGridFunction(grid, fv),
                                      PosGridFunction(grid, gv), p, q, slack);
    double margin = chk.rhs - chk.lhs;
    s.points.push_back({static_cast<double>(trial), margin});
    min_margin = std::min(min_margin, margin);
    if (chk.pass) {
      ++passed;
    } else {
      failures.push_back(trial);
    }
  }
  json total;
  total["total"] = pairs;
  add_quantity(b, "pairs_passed", passed, std::move(total));
  add_quantity(b, "min_margin", min_margin);
  json fx;
  fx["failures"] = std::move(failures);
  add_verdict(b, "young-inequality", passed == pairs, slack, min_margin,
              "the norm of a multiplicative convolution is bounded by the "
              "product of the factor norms",
              std::move(fx));
}

inline void run_commute(const Conf& c, const std::filesystem::path&,
                        std::uint64_t, ReportBundle& b) {
  c.allow({"experiment", "seed", "kernel", "betas", "function", "options",
           "require_halving"});
  Kernel k = parse_kernel(c.child("kernel"));
  std::vector<double> betas = c.numbers_or("betas", {0.0, 0.25, 0.5});
  RealFunction f = parse_function(c.child("function"));
  CommutationOptions opt;
  if (c.has("options")) {
    Conf oc = c.child("options");
    oc.allow({"half_width", "samples", "budget", "quad_tol"});
    opt.half_width = oc.number_or("half_width", opt.half_width);
    opt.samples = static_cast<int>(oc.integer_or("samples", opt.samples));
    opt.budget = oc.number_or("budget", opt.budget);
    opt.quad_tol = oc.number_or("quad_tol", opt.quad_tol);
  }
  // Jump kernels floor the refined discrepancy at the sampled representation
  // of their conjugate's spike, so halving is made optional.
  bool halving = c.flag_or("require_halving", true);

  Series& s = add_series(b, "discrepancy", "beta", "discrepancy");
  for (double beta : betas) {
    CommutationReport rep = commutation_check(k, beta, f, opt);
    s.points.push_back({beta, rep.discrepancy});
    json extra;
    extra["refined"] = num(rep.refined);
    extra["ratio"] = num(rep.ratio);
    add_quantity(b, "discrepancy_beta" + tag(beta), rep.discrepancy,
                 std::move(extra));
    bool ok = halving ? rep.pass
                      : rep.discrepancy <= opt.budget &&
                            rep.refined <= opt.budget;
    add_verdict(b, "commutation-beta" + tag(beta), ok, opt.budget,
                rep.discrepancy,
                "conjugation intertwines the averaging operator with its "
                "conjugated-profile counterpart");
  }
}

inline void run_hypotheses(const Conf& c, const std::filesystem::path&,
                           std::uint64_t, ReportBundle& b) {
  c.allow({"experiment", "seed", "tables"});
  int ti = 0;
  for (const Conf& t : c.objects("tables")) {
    t.allow({"profile", "side", "orders", "expect_finite"});
    DerivativeProfile prof = parse_profile(t.child("profile"));
    std::string side = t.text("side");
    if (side != "two_sided" && side != "half_line") {
      throw ConfigError(t.path() + ".side: expected two_sided or half_line");
    }
    bool expect = t.flag_or("expect_finite", true);
    for (long long m : t.integers("orders")) {
      if (m < 0 || m > 8) {
        throw ConfigError(t.path() + ".orders: entries must lie in [0, 8]");
      }
      HypothesisReport rep =
          side == "two_sided"
              ? hypothesis_integrals_phi(prof, static_cast<int>(m))
              : hypothesis_integrals_g(prof, static_cast<int>(m));
      std::string base =
          "table" + std::to_string(ti) + "_m" + std::to_string(m);
      for (const HypothesisEntry& en : rep.entries) {
        std::string name = base + "_a" + std::to_string(en.index_a);
        if (en.index_b >= 0) name += "_b" + std::to_string(en.index_b);
        if (en.index_c >= 0) name += "_c" + std::to_string(en.index_c);
        json extra;
        extra["order"] = en.order;
        extra["exponent_near"] = num(en.exponent_near);
        extra["exponent_far"] = num(en.exponent_far);
        extra["divergent"] = en.integral.divergent;
        add_quantity(b, name, en.integral.value, std::move(extra));
      }
      json mx;
      mx["all_finite"] = rep.all_finite;
      add_quantity(b, base + "_max", rep.max_value, std::move(mx));
      json ve;
      ve["expect_finite"] = expect;
      add_verdict(b, "integrability-" + base, rep.all_finite == expect, 0.0,
                  rep.max_value,
                  side == "two_sided"
                      ? "every weighted derivative integral of the two-sided "
                        "profile is finite exactly when the hypothesis set "
                        "holds"
                      : "every weighted derivative integral of the half-line "
                        "factor profile is finite exactly when the hypothesis "
                        "set holds",
                  std::move(ve));
    }
    ++ti;
  }
}

inline void run_decay(const Conf& c, const std::filesystem::path&,
                      std::uint64_t, ReportBundle& b) {
  c.allow({"experiment", "seed", "profile", "beta", "x_probes", "y_probes",
           "s_probes", "slope_band", "max_spread"});
  DerivativeProfile prof = parse_profile(c.child("profile"));
  double beta = c.number("beta");
  auto probes = [&](const char* key) {
    Conf pc = c.child(key);
    pc.allow({"lo", "hi", "count"});
    Interval r = parse_scale_range(pc, "lo", "hi");
    return geometric_points(r.lo, r.hi, parse_count(pc, "count", 2, 4096));
  };
  std::vector<double> xs = probes("x_probes");
  std::vector<double> ys = probes("y_probes");
  std::vector<double> ss = c.numbers("s_probes");
  std::vector<double> band = c.numbers("slope_band");
  if (band.size() != 2 || !(band[0] < band[1])) {
    throw ConfigError("slope_band: expected [lo, hi] with lo < hi");
  }
  double max_spread = c.number_or("max_spread", 10.0);

  DecayProbeReport rep = kernel_decay_probe(
      prof, [](double u) { return bump(u); }, beta, xs, ys, ss);
  json sx;
  sx["intercept"] = num(rep.intercept);
  sx["all_zero"] = rep.all_zero;
  add_quantity(b, "slope", rep.slope, std::move(sx));
  json sp;
  sp["ratio_min"] = num(rep.ratio_min);
  sp["ratio_max"] = num(rep.ratio_max);
  add_quantity(b, "spread", rep.spread, std::move(sp));
  Series& env = add_series(b, "envelope", "x", "envelope");
  for (std::size_t i = 0; i < rep.x.size(); ++i) {
    env.points.push_back({rep.x[i], rep.envelope[i]});
  }
  json bd;
  bd["band"] = band;
  add_verdict(b, "decay-slope", !rep.all_zero && rep.slope >= band[0] &&
                                     rep.slope <= band[1],
              0.5 * (band[1] - band[0]), rep.slope,
              "the windowed oscillatory envelope decays at the unit rate",
              std::move(bd));
  add_verdict(b, "decay-spread", !rep.all_zero && rep.spread <= max_spread,
              max_spread, rep.spread,
              "the envelope times the probe point stays within a bounded "
              "constant band");
}

inline void run_scaling(const Conf& c, const std::filesystem::path&,
                        std::uint64_t, ReportBundle& b) {
  c.allow({"experiment", "seed", "kernel", "exponents", "function", "scales",
           "grid", "tolerance"});
  Kernel k = parse_kernel(c.child("kernel"));
  ExponentSet e = parse_exponents(c.child("exponents"));
  RealFunction f = parse_function(c.child("function"));
  std::vector<double> scales = c.numbers("scales");
  LogGrid grid = parse_log_grid(c.child("grid"));
  double tol = c.number_or("tolerance", tolerances::verdict);

  ScalingFitReport rep = exponent_relation_probe(k, e.beta, e.p, e.q, e.alpha,
                                                 e.gamma, f, scales, grid, tol);
  json sx;
  sx["intercept"] = num(rep.intercept);
  add_quantity(b, "slope", rep.slope, std::move(sx));
  add_quantity(b, "residual", rep.residual);
  Series& s = add_series(b, "norms", "scale", "norm");
  for (std::size_t i = 0; i < rep.scales.size(); ++i) {
    s.points.push_back({rep.scales[i], rep.norms[i]});
  }
  add_verdict(b, "scaling-residual", rep.pass, rep.tolerance, rep.residual,
              "dilating the argument scales the weighted image norm exactly "
              "when the exponent relation holds");
}

inline void run_dilation(const Conf& c, const std::filesystem::path&,
                         std::uint64_t, ReportBundle& b) {
  c.allow({"experiment", "seed", "function", "s_values", "p_values",
           "a_values", "grid", "maximal", "tolerance"});
  RealFunction f = parse_function(c.child("function"));
  std::vector<double> svals = c.numbers("s_values");
  std::vector<double> pvals = c.numbers("p_values");
  std::vector<double> avals = c.numbers("a_values");
  UniformGrid grid = parse_uniform_grid(c.child("grid"));
  MaximalConfig cfg;
  if (c.has("maximal")) cfg = parse_maximal(c.child("maximal"));
  double tol = c.number_or("tolerance", tolerances::verdict);

  for (double p : pvals) {
    for (double a : avals) {
      Series& s = add_series(b, "ratio_p" + tag(p) + "_a" + tag(a), "s",
                             "ratio");
      for (double sc : svals) {
        DilationReport rep =
            dilation_invariance_check(f.fn, sc, p, a, grid, cfg, tol);
        std::string suffix = "_s" + tag(sc) + "_p" + tag(p) + "_a" + tag(a);
        s.points.push_back({sc, rep.ratio});
        json extra;
        extra["reference"] = num(rep.reference);
        extra["dilated"] = num(rep.dilated);
        extra["reference_divergent"] = rep.reference_divergent;
        extra["dilated_divergent"] = rep.dilated_divergent;
        add_quantity(b, "ratio" + suffix, rep.ratio, std::move(extra));
        add_verdict(b, "dilation" + suffix, rep.pass, tol, rep.ratio,
                    "the normalized dilation is an isometry of the maximal "
                    "quasi-norm");
      }
    }
  }
}

inline void run_ap(const Conf& c, const std::filesystem::path& base,
                   std::uint64_t, ReportBundle& b) {
  c.allow({"experiment", "seed", "weight", "balls", "cases", "tolerance"});
  Weight w = parse_weight(c.child("weight"), base);
  std::vector<Interval> balls;
  for (const auto& pr : c.number_pairs("balls")) {
    if (!(pr[0] < pr[1]) || !std::isfinite(pr[0]) || !std::isfinite(pr[1])) {
      throw ConfigError("balls: each entry needs finite lo < hi");
    }
    balls.emplace_back(pr[0], pr[1]);
  }
  double tol = c.number_or("tolerance", 1e-4);
  if (w.kind() != WeightKind::even_monotone) {
    add_quantity(b, "critical_index", critical_index(w));
  }

  for (const Conf& cc : c.objects("cases")) {
    cc.allow({"p", "expect_divergent", "dilation", "expect_characteristic",
              "characteristic_tolerance"});
    double p = cc.number("p");
    if (!(p > 1) || !std::isfinite(p)) {
      throw ConfigError(cc.path() + ".p: need 1 < p < inf");
    }
    bool expect_div = cc.flag_or("expect_divergent", false);
    ApReport rep = ap_characteristic(w, p, balls);
    json extra;
    extra["divergent"] = rep.divergent;
    add_quantity(b, "characteristic_p" + tag(p), rep.characteristic,
                 std::move(extra));
    Series& s = add_series(b, "products_p" + tag(p), "ball_index", "product");
    int i = 0;
    for (const ApBallEntry& en : rep.balls) {
      s.points.push_back({static_cast<double>(i++),
                          en.divergent ? kInf : en.product});
    }
    add_verdict(b, "ap-flag-p" + tag(p), rep.divergent == expect_div, 0.0,
                rep.characteristic,
                "the averaged product over balls is finite exactly when the "
                "weight belongs to the class at this index");
    if (cc.has("dilation") && !rep.divergent) {
      double sf = cc.number("dilation");
      if (!(sf > 0) || !std::isfinite(sf)) {
        throw ConfigError(cc.path() + ".dilation: must be positive and finite");
      }
      std::vector<Interval> scaled;
      for (const Interval& ball : balls) {
        scaled.emplace_back(sf * ball.lo, sf * ball.hi);
      }
      ApReport rep2 = ap_characteristic(w, p, scaled);
      double drift = !rep2.divergent && rep.characteristic > 0
                         ? std::abs(rep2.characteristic / rep.characteristic -
                                    1.0)
                         : kInf;
      add_verdict(b, "ap-dilation-p" + tag(p), drift <= tol, tol, drift,
                  "the characteristic of a homogeneous weight is invariant "
                  "under dilation of the balls");
    }
    if (cc.has("expect_characteristic")) {
      double want = cc.number("expect_characteristic");
      double ctol = cc.number_or("characteristic_tolerance", 0.0);
      add_verdict(b, "ap-value-p" + tag(p),
                  !rep.divergent && std::abs(rep.characteristic - want) <= ctol,
                  ctol, rep.characteristic,
                  "closed-form characteristic of this weight");
    }
  }
}

}  // namespace detail

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "apply",  "norms",   "constants", "verify-thm-increasing",
      "verify-thm-decreasing", "hardy-ineq", "young", "commute",
      "hypotheses", "decay", "scaling", "dilation", "ap"};
  return names;
}

// Validates and dispatches one experiment config. base_dir resolves relative
// file references (tabulated weights); a CLI-level seed override replaces the
// config's seed and is what the meta record reports.
inline ReportBundle run_experiment(const json& config,
                                   const std::filesystem::path& base_dir,
                                   std::optional<long long> seed_override = {}) {
  detail::Conf root(&config, "");
  std::string name = root.text("experiment");
  long long seed = seed_override ? *seed_override : root.integer_or("seed", 0);
  if (seed < 0) throw ConfigError("seed: must be nonnegative");

  ReportBundle b;
  detail::add_meta(b, name, static_cast<std::uint64_t>(seed));
  auto s = static_cast<std::uint64_t>(seed);
  if (name == "apply") {
    detail::run_apply(root, base_dir, s, b);
  } else if (name == "norms") {
    detail::run_norms(root, base_dir, s, b);
  } else if (name == "constants") {
    detail::run_constants(root, base_dir, s, b);
  } else if (name == "verify-thm-increasing") {
    detail::run_sandwich(root, base_dir, b, true);
  } else if (name == "verify-thm-decreasing") {
    detail::run_sandwich(root, base_dir, b, false);
  } else if (name == "hardy-ineq") {
    detail::run_hardy_ineq(root, base_dir, s, b);
  } else if (name == "young") {
    detail::run_young(root, base_dir, s, b);
  } else if (name == "commute") {
    detail::run_commute(root, base_dir, s, b);
  } else if (name == "hypotheses") {
    detail::run_hypotheses(root, base_dir, s, b);
  } else if (name == "decay") {
    detail::run_decay(root, base_dir, s, b);
  } else if (name == "scaling") {
    detail::run_scaling(root, base_dir, s, b);
  } else if (name == "dilation") {
    detail::run_dilation(root, base_dir, s, b);
  } else if (name == "ap") {
    detail::run_ap(root, base_dir, s, b);
  } else {
    std::string known;
    for (const std::string& n : experiment_names()) {
      known += known.empty() ? n : ", " + n;
    }
    throw ConfigError("experiment: unknown name '" + name + "'; expected one "
                      "of: " + known);
  }
  return b;
}

namespace detail {

inline std::string format_cell(double v) {
  if (std::isfinite(v)) return json(v).dump();
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

inline std::string table_cell(const json& r, const char* key) {
  if (!r.contains(key)) return "";
  const json& v = r.at(key);
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number()) return v.dump();
  if (v.is_string()) return csv_escape(v.get<std::string>());
  return "";
}

}  // namespace detail

// Writes results.jsonl, tables.csv, and series/*.csv under out_dir. The JSONL
// stream is the deterministic machine record; the table is the same records
// flattened for reading, with the observed value in the value column.
inline void write_bundle(const ReportBundle& b,
                         const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  auto open = [](const fs::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("output: cannot write " + p.string());
    return out;
  };
  {
    std::ofstream out = open(out_dir / "results.jsonl");
    for (const json& r : b.records) out << r.dump() << '\n';
  }
  {
    std::ofstream out = open(out_dir / "tables.csv");
    out << "kind,name,value,tolerance,pass,provenance\n";
    for (const json& r : b.records) {
      std::string kind = detail::table_cell(r, "kind");
      std::string value = kind == "verdict" ? detail::table_cell(r, "observed")
                          : kind == "meta"  ? detail::table_cell(r, "experiment")
                                            : detail::table_cell(r, "value");
      out << kind << ',' << detail::table_cell(r, "name") << ',' << value
          << ',' << detail::table_cell(r, "tolerance") << ','
          << detail::table_cell(r, "pass") << ','
          << detail::table_cell(r, "provenance") << '\n';
    }
  }
  if (!b.series.empty()) {
    fs::create_directories(out_dir / "series", ec);
    for (const auto& [name, s] : b.series) {
      std::ofstream out = open(out_dir / "series" / (name + ".csv"));
      out << s.x_name << ',' << s.y_name << '\n';
      for (const auto& pt : s.points) {
        out << detail::format_cell(pt[0]) << ',' << detail::format_cell(pt[1])
            << '\n';
      }
    }
  }
}

}  // namespace hausdorff
