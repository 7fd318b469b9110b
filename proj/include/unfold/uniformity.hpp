#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "unfold/graph.hpp"
#include "unfold/metric.hpp"
#include "unfold/sigma.hpp"

namespace unfold {

// Certificate that a vertex path behaves like a c-uniform curve for the
// field delta: it is near-shortest for the intrinsic metric (quasi-geodesic
// clause) and at every interior point the shorter arm is bounded by a
// multiple of delta there (double-cone clause).
struct UniformityCertificate {
  std::vector<std::uint32_t> curve;
  double len_intrinsic = 0;        // l(curve)
  double dist_intrinsic = 0;       // shortest-path distance of the endpoints
  double quasigeodesic_ratio = 1;  // len / dist, >= 1 up to rounding
  double cone_ratio = 0;           // max over interior samples of l_min / delta
  std::uint32_t cone_witness = 0;  // curve vertex attaining cone_ratio
  double c_hat = 0;                // max of the two ratios
};

// Certifies an explicit curve. Interior samples are the interior vertices;
// a single-edge curve uses the edge midpoint (l_min = len/2 against the
// smaller endpoint delta). Pass a precomputed intrinsic cost array to skip
// rebuilding it per call.
UniformityCertificate verify_sigma_uniform(const std::vector<std::uint32_t>& curve,
                                           const SigmaField& field,
                                           const MetricGraph& g,
                                           const std::vector<double>* icost = nullptr);

struct PipelineParams {
  double t = 0.25;     // hub / waypoint depth: waypoint k needs delta >= 2^-k t u
  double tau = 1.0 / 16.0;  // segment corridor depth, must stay below t
};

struct PipelineResult {
  std::vector<std::uint32_t> curve;  // p .. hub .. q
  std::uint32_t hub = 0;
  std::vector<std::uint32_t> waypoints_p;  // hub side toward p, outward order
  std::vector<std::uint32_t> waypoints_q;
  double u = 0;            // working scale: 2/3 of the ambient separation
  double realized_pi = 0;  // max_k 2^k * l(segment_k) / u
  bool degenerate = false; // adjacent endpoints: the single edge
};

// Builds the hub-and-dyadic-annuli quasi-geodesic between p and q: a hub
// maximizing delta inside both radius-u ambient balls, then per endpoint a
// chain of waypoints chosen from dyadic ambient annuli, joined by shortest
// paths constrained to sublevel corridors {delta >= 2^-k tau u}. The chain
// stops once the annulus scale drops under four local edge lengths.
PipelineResult build_pipeline(const MetricGraph& g, const SigmaField& field,
                              std::uint32_t p, std::uint32_t q,
                              const PipelineParams& params = {});

struct UniformityEstimate {
  double a_hat = 0;  // max certified c_hat
  double q50 = 0;    // nearest-rank quantiles of the c_hat sample
  double q90 = 0;
  std::vector<double> c_values;  // per pair, sampling order
  std::vector<std::pair<std::uint32_t, std::uint32_t>> sampled_pairs;
  std::uint64_t seed = 0;
};

// Samples vertex pairs, runs the sigma-weighted geodesic for each, and
// certifies it; the certified maxima probe the space's uniformity constant.
// Totally geodesic inputs are rejected (delta is unbounded, the double-cone
// clause is vacuous).
UniformityEstimate estimate_uniformity_constant(const MetricGraph& g,
                                                const SigmaField& field,
                                                std::size_t n_samples,
                                                std::uint64_t seed);

}  // namespace unfold
