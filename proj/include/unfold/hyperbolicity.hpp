#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "unfold/graph.hpp"

namespace unfold {

// Sampled coarse-hyperbolicity statistics of one weighted metric. The thin
// and four-point estimates are reported raw (no relation between them is
// assumed); beta is the rough-starlikeness radius from a base vertex.
struct HyperbolicityReport {
  std::string weight;
  std::size_t n_triangles = 0;
  std::size_t n_quadruples = 0;
  double delta_thin = 0;
  double delta_4pt = 0;
  double beta = -1;         // -1 = not measured
  double formula_bound = 0;   // delta_formula of the supplied uniformity constant
  std::uint64_t seed = 0;
};

// Max over sampled triples of the thin-triangle defect: the farthest any
// point of one geodesic side gets from the union of the other two sides.
double estimate_thinness(const MetricGraph& g, const std::vector<double>& ecost,
                         std::size_t n_triangles, std::uint64_t seed);

// Max over sampled quadruples of the standard four-point defect
// (largest pair-sum minus second largest, halved).
double four_point_delta(const MetricGraph& g, const std::vector<double>& ecost,
                        std::size_t n_quadruples, std::uint64_t seed);

// Explicit hyperbolicity constant of the unfolded metric as a function of
// the uniformity constant a >= 1 (unit Lipschitz gauge):
//   b  = 64 a^4 exp(32 a^4)
//   b* = exp(4 a^2 log(1 + 4 b)) - 1
//   c  = 1 + b* (4 a^2 + 1) + 8 a^2
//   delta = 4 a^2 log(1 + c (2 c + 3))
// Evaluated through logarithms once the intermediates leave double range.
double delta_formula(double a);

// Rough-starlikeness radius: geodesics from the base to sampled ray
// surrogates (near-singular and outer-truncation vertices); beta is the
// largest distance from any graph vertex to the union of those geodesics.
double check_rough_starlike(const MetricGraph& g, const std::vector<double>& ecost,
                            std::uint32_t base, std::size_t n_targets,
                            std::uint64_t seed);

}  // namespace unfold
