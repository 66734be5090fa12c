#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"

namespace hausdorff {
namespace detail {

// Reads a two-column table (node, value). Accepts comma or whitespace
// separators, blank lines, and an optional non-numeric header row.
inline std::vector<std::pair<double, double>> read_two_column_table(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open file: " + path);
  std::vector<std::pair<double, double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    for (char& c : line) {
      if (c == ',' || c == ';' || c == '\t') c = ' ';
    }
    std::istringstream ss(line);
    double a = 0, b = 0;
    if (!(ss >> a >> b)) {
      std::istringstream probe(line);
      std::string tok;
      if (first && (probe >> tok)) {
        first = false;
        continue;  // header row
      }
      if (line.find_first_not_of(" \r\n") == std::string::npos) continue;
      throw DomainError("malformed row in " + path + ": " + line);
    }
    first = false;
    rows.emplace_back(a, b);
  }
  if (rows.size() < 2) {
    throw DomainError("need at least two data rows in " + path);
  }
  return rows;
}

inline void require_positive_ascending_nodes(
    const std::vector<std::pair<double, double>>& rows,
    const std::string& path) {
  double prev = 0;
  for (const auto& [x, v] : rows) {
    if (!(x > prev) || !std::isfinite(x)) {
      throw DomainError("nodes must be positive and strictly ascending in " +
                        path);
    }
    if (!std::isfinite(v)) {
      throw DomainError("values must be finite in " + path);
    }
    prev = x;
  }
}

// Resamples a positive-node table onto a log-uniform grid spanning its node
// range, interpolating linearly in log of the node.
inline PosGridFunction resample_log_uniform(
    const std::vector<std::pair<double, double>>& rows, int n) {
  if (n <= 0) n = std::max<int>(64, 2 * static_cast<int>(rows.size()));
  PosLogGrid grid(rows.front().first, rows.back().first, n);
  std::vector<double> vals(grid.size());
  std::size_t j = 0;
  for (int k = 0; k < grid.size(); ++k) {
    double x = std::min(std::max(grid.node(k), rows.front().first),
                        rows.back().first);
    while (j + 2 < rows.size() && rows[j + 1].first <= x) ++j;
    double u0 = std::log(rows[j].first), u1 = std::log(rows[j + 1].first);
    double s = (std::log(x) - u0) / (u1 - u0);
    s = std::min(1.0, std::max(0.0, s));
    vals[k] = rows[j].second * (1.0 - s) + rows[j + 1].second * s;
  }
  return PosGridFunction(grid, std::move(vals));
}

}  // namespace detail
}  // namespace hausdorff
