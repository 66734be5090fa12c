#pragma once

#include <string>

namespace hausdorff {

// A numeric result together with its divergence status and an error estimate.
struct NormValue {
  double value = 0;
  bool divergent = false;
  double error = 0;
};

// One named pass/fail line in a verification report.
struct Verdict {
  std::string name;
  bool pass = false;
  double tolerance = 0;
  std::string note;
};

// Shared tolerance tiers: closed-form identities are held to near machine
// precision, grid-based pipelines to their discretization error, and
// inequality verdicts to a stated relative margin.
namespace tolerances {
inline constexpr double closed_form = 1e-8;
inline constexpr double grid = 1e-4;
inline constexpr double verdict = 1e-3;
}  // namespace tolerances

}  // namespace hausdorff
