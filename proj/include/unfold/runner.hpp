#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "unfold/graph.hpp"
#include "unfold/model.hpp"
#include "unfold/report.hpp"

namespace unfold {

// Everything the full verification run needs; the CLI maps its flags onto
// this struct one-to-one. Exactly one of model / graph_dir / mesh selects
// the input.
struct VerifyConfig {
  std::string model;      // descriptor, e.g. "simons" or "catenoid[c=1]"
  std::string graph_dir;  // directory with vertices.csv / edges.csv
  std::string mesh;       // OFF file
  std::string sidecar;    // singular-vertex sidecar for meshes
  std::string field_dir;  // validate this stored gauge instead of recomputing

  double h = 0.06;          // target edge length (relative on graded charts)
  int res = 0;              // cone charts: fixed angular resolution instead of h
  double rmin = 0, rmax = 0;  // first-axis range override (active when rmin < rmax)

  double alpha = 1.0;
  double ladder_q = 0;  // 0 = module default
  bool refine = true;

  std::size_t pairs = 256;       // inequality-suite sample pairs
  std::size_t samples = 128;     // uniformity geodesics
  std::size_t triangles = 48;    // thin-triangle triples
  std::size_t quads = 160;       // four-point quadruples
  std::size_t ray_targets = 12;  // boundary rays per target family

  double xi = 0;           // cover scale, 0 = auto from the Lipschitz bound
  double threshold = 0;    // ray-clustering threshold, 0 = 8*a^2 + 2*delta_thin
  double tolerance = 0.09;  // discretization slack used by the suite clauses
  std::uint64_t seed = 2026;
  bool strict = false;           // assumed tolerances become a failure
  bool with_refinement = true;   // coarse-rebuild drift evidence (model inputs)
  std::string out_dir;
};

struct VerifyOutcome {
  int exit_code = 0;  // 0 clean, 2 with violations
  std::vector<std::string> violations;
  std::vector<std::string> notes;
  ojson report;
};

// Builds the graph a VerifyConfig describes. model_out / from_model receive
// the parsed model when the input is a descriptor (rebuild checks need it).
MetricGraph make_verify_graph(const VerifyConfig& cfg, ModelSurface* model_out,
                              bool* from_model);

// Deterministic interior basepoint: the vertex farthest (intrinsically) from
// every marked ring, or vertex 0 when nothing is marked.
std::uint32_t pick_interior_base(const MetricGraph& g);

// The full pipeline: gauge axioms, interpolation, uniformity, the inequality
// suite, metric sanity, hyperbolicity, the cover + smoothing, the boundary
// map, refinement evidence, and the collected report.json. Section artifacts
// land in cfg.out_dir; every violation is listed in the outcome and the exit
// code is 2 when any exist.
VerifyOutcome run_verify(const VerifyConfig& cfg);

}  // namespace unfold
