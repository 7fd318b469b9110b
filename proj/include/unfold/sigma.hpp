#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "unfold/graph.hpp"
#include "unfold/model.hpp"

namespace unfold {

struct SigmaOptions {
  double alpha = 1.0;
  double ladder_q = 1.0905077326652577;  // 2^(1/8)
  bool refine = true;                    // exact per-vertex sup after the sweep
  bool keep_membership = false;          // retain per-level tube membership
  std::vector<double> ladder_base;       // override (base units, ascending)
};

// Discrete sigma-transform of the shape field: b(x) is the largest tube
// parameter c whose alpha/c-neighborhood of {a >= c} contains x. The ladder
// sweep brackets it; the refinement pass evaluates the exact supremum
// b(x) = max_v min(a(v), alpha / d(x, v)) by a truncated local sweep seeded
// with the bracket. delta = 1/b. Everything runs in base units (the scale
// factor cancels out of the tube condition), so rescaled graphs produce
// bit-identical base fields.
struct SigmaField {
  double alpha = 1.0;
  double ladder_q = 0.0;
  std::vector<double> b;       // physical
  std::vector<double> delta;   // physical, delta = 1/b elementwise
  std::vector<double> ladder;  // physical tube parameters, ascending
  bool refined = false;
  bool trivial = false;  // totally geodesic input: b == 0, delta unbounded
  double l_hat = 0.0;    // max over edges of |delta(u)-delta(v)| / length
  std::string graph_id;
  std::vector<double> b_ladder;                    // pre-refinement values
  std::vector<std::vector<std::uint8_t>> membership;  // [level][vertex], optional
};

SigmaField compute_sigma_field(const MetricGraph& g, const SigmaOptions& opt = {});

// sigma.csv (vertex,b,delta) + sigma.meta.json provenance.
void dump_sigma_csv(const SigmaField& f, const std::string& dir,
                    const std::string& stem = "sigma");
SigmaField load_sigma_csv(const std::string& dir, const std::string& stem = "sigma");

// Largest |delta(x) - delta(y)| / length over the graph's edges (unbounded
// endpoints skipped). Stored metadata is only a cache: recompute this for any
// loaded field before checking bounds against it.
double rescaled_slope(const MetricGraph& g, const SigmaField& f);

struct AxiomOptions {
  double s3_slack = 0.15;      // allowed excess of l_hat over 1/alpha
  double trend_slack = 0.05;   // divergence-trend band monotonicity slack
  double s4_rel_tol = 1e-10;   // blow-up fixed-point tolerance (refined fields)
  std::vector<double> lambdas = {2.0, 1.0 / 3.0};
  const ModelSurface* model = nullptr;  // enables the blow-up rebuild check
  double blowup_lambda = 3.0;
};

struct AxiomReport {
  bool s1 = false, s2 = false, s3 = false, s4 = false;
  bool pass = false;
  double alpha = 0;
  double l_hat = 0;
  double s2_min_gap = 0;        // min(b - a) over reliable vertices
  double s4_max_rel_dev = 0;    // blow-up fixed-point deviation
  int s4_bitwise_mismatches = -1;  // -1 = not checked
  std::vector<std::string> violations;
  std::vector<std::string> notes;
};

AxiomReport verify_axioms(const MetricGraph& g, const SigmaField& f,
                          const AxiomOptions& opt = {});

struct InterpolationRow {
  double alpha = 0;
  double sup_dev_a = 0;         // sup over band of |b_alpha - a|
  double sup_dev_inv_dist = 0;  // sup over band of |b_alpha/alpha - 1/dist_sigma|
};

struct InterpolationReport {
  std::vector<InterpolationRow> rows;  // ascending alpha
  bool monotone = false;               // b nondecreasing in alpha pointwise
  double worst_monotonicity_violation = 0;
};

// Band vertices must stay clear of the rings (flagged vertices are rejected).
InterpolationReport interpolation_sweep(const MetricGraph& g,
                                        const std::vector<double>& alphas,
                                        const std::vector<std::uint32_t>& band,
                                        const SigmaOptions& base_opt = {});

struct HarnackCheck {
  std::size_t eligible_edges = 0;
  std::size_t violations = 0;
  double worst_margin = 0;  // most negative slack-adjusted margin
};

// Short-edge two-sided bound: edges with len <= 1/(2 L b(u)) must satisfy
// |b(v)/b(u) - 1| <= 2 L b(u) len (1 + eps).
HarnackCheck harnack_band_check(const MetricGraph& g, const SigmaField& f,
                                double eps);

}  // namespace unfold
