#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "unfold/graph.hpp"
#include "unfold/sentinel.hpp"
#include "unfold/sigma.hpp"

namespace unfold {

enum class WeightKind { intrinsic, quasi_hyperbolic, sigma, sigma_smoothed };

const char* weight_name(WeightKind k);

// Per-vertex conformal weights; path cost across an edge is
// len * (w(u) + w(v)) / 2 (trapezoid rule, second-order accurate and
// monotone in the weights).
struct WeightField {
  WeightKind kind = WeightKind::intrinsic;
  std::string name;
  std::vector<double> w;
};

// smoothed weights are built from a smoothed field's b values by the caller
// (whitney module); `field` supplies b for sigma and delta for bookkeeping.
WeightField make_weight(const MetricGraph& g, WeightKind kind,
                        const SigmaField* field = nullptr);

// Per-unique-edge costs for a weight field (physical units, positive).
std::vector<double> edge_costs(const MetricGraph& g, const WeightField& w);

struct GeodesicPath {
  std::vector<std::uint32_t> vertices;
  std::vector<double> seg_intrinsic;  // per edge
  std::vector<double> seg_cost;       // per edge, weighted
  double len_intrinsic = 0;
  double cost = 0;
  // smallest intrinsic distance from an interior sample to either endpoint
  double l_min(std::size_t interior_index) const;
};

// Deterministic shortest path: among all cost-minimal p->q paths, the
// lexicographically smallest vertex sequence. p == q is rejected.
GeodesicPath shortest_path(const MetricGraph& g, const std::vector<double>& ecost,
                           std::uint32_t p, std::uint32_t q);

// Wraps an explicit vertex walk (consecutive vertices must be adjacent) with
// per-edge lengths and costs; cost is the plain segment sum.
GeodesicPath path_from_vertices(const MetricGraph& g, const std::vector<double>& ecost,
                                const std::vector<std::uint32_t>& vertices);

// Symmetric-by-construction pair distance (canonical orientation), so the
// metric-axiom check's exact symmetry assertion holds on floats.
double pair_distance(const MetricGraph& g, const std::vector<double>& ecost,
                     std::uint32_t x, std::uint32_t y);

// Rows of distances from each source to every vertex, computed in parallel,
// row order = source order.
std::vector<std::vector<double>> distance_matrix(const MetricGraph& g,
                                                 const std::vector<double>& ecost,
                                                 const std::vector<std::uint32_t>& sources);

struct ClauseStats {
  std::string name;
  std::size_t checked = 0;
  std::size_t violations = 0;
  double min_margin = kUnbounded;   // min over pairs of rhs - lhs (raw)
  double mean_margin = 0;
  bool skipped = false;
  std::string note;
};

struct SuiteReport {
  std::size_t n_pairs = 0;
  std::size_t n_eligible = 0;  // vertices whose witness ball avoids the rings
  double tolerance = 0;  // epsilon_h slack used in clauses 2-4
  double a_hat = 0;
  double l_hat = 0;
  std::vector<ClauseStats> clauses;
  std::string normalization_note;
  std::uint64_t seed = 0;
};

// Samples vertex pairs and checks the four comparison clauses between the
// sigma path metric d_b, the quasi-hyperbolic metric k, the intrinsic metric
// d, and the pointwise field values. a_hat feeds the upper-bound clause.
SuiteReport check_inequality_suite(const MetricGraph& g, const SigmaField& f,
                                   std::size_t n_pairs, std::uint64_t seed,
                                   double tolerance, double a_hat);

struct MetricSanity {
  bool symmetry_exact = false;
  std::size_t triangle_checked = 0;
  std::size_t triangle_violations = 0;  // beyond a few ulps
  double worst_triangle_defect = 0;     // most negative d(xy)+d(yz)-d(xz)
};

MetricSanity check_metric_axioms(const MetricGraph& g,
                                 const std::vector<double>& ecost,
                                 std::size_t n_triples, std::uint64_t seed);

struct BallVolumeRow {
  std::uint32_t center;
  double volume;   // sum of cell measures within the weighted radius
  double ratio;    // volume / (pi * rho^2)
};

// Descriptive bounded-geometry report: weighted-ball volumes at radius rho
// around sampled band vertices, compared with the Euclidean disc area.
std::vector<BallVolumeRow> ball_volume_report(const MetricGraph& g,
                                              const std::vector<double>& ecost,
                                              const std::vector<std::uint32_t>& centers,
                                              double rho);

// geodesics.csv polyline export: path_id,seq,vertex,x...,cum_intrinsic,cum_cost
void dump_geodesics_csv(const MetricGraph& g, const std::vector<GeodesicPath>& paths,
                        const std::string& file);

}  // namespace unfold
