#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace unfold {

// Distances to an empty singular set, and delta on a totally geodesic graph,
// are genuinely infinite. They are carried as IEEE infinity so that every
// consumer has to branch on is_unbounded() instead of comparing against some
// arbitrary big number.
inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

inline bool is_unbounded(double v) { return std::isinf(v); }

// Canonical float formatting for every artifact we write: %.17g round-trips
// doubles exactly and is byte-stable, which the reproducibility contract
// depends on. Infinity serializes as "inf".
inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& s) {
  if (s == "inf") return kUnbounded;
  if (s == "-inf") return -kUnbounded;
  return std::stod(s);
}

}  // namespace unfold
