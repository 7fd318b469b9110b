#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "unfold/graph.hpp"
#include "unfold/metric.hpp"
#include "unfold/sigma.hpp"

namespace unfold {

// One geodesic ray surrogate: the sigma-weighted shortest path from the base
// to a marked ring vertex. Rays toward the singular ring should show finite
// intrinsic length but growing weighted length as the ring deepens; rays to
// the outer truncation stand in for the point at infinity.
struct Ray {
  GeodesicPath path;  // base -> target
  std::uint32_t target = 0;
  bool to_sigma = false;
  int sigma_component = -1;  // ring component of the target
};

struct TargetSpec {
  bool sigma_targets = true;
  bool outer_targets = true;
  std::size_t max_per_family = 12;  // evenly strided over each ring family
};

struct RayBundle {
  std::uint32_t base = 0;
  std::vector<Ray> rays;
  std::vector<std::vector<double>> hausdorff;  // pairwise, weighted metric
  std::vector<int> cls;                        // per-ray class id
  int n_classes = 0;
  double threshold = 0;
  bool pairwise_consistent = true;  // every class is a clique under threshold
};

// Traces the rays and clusters them by single linkage on the pairwise
// weighted Hausdorff distance (computed on every-4th-vertex subsamples with
// exact distance sweeps). Classes violating the pairwise invariant are
// flagged, not silently merged.
RayBundle trace_rays(const MetricGraph& g, const SigmaField& field,
                     std::uint32_t base, const TargetSpec& spec,
                     double threshold);

struct BoundaryReport {
  int n_classes = 0;
  int sigma_classes = 0;
  int infinity_classes = 0;
  int mixed_classes = 0;       // classes joining ring and outer rays
  int sigma_components = 0;    // marked singular ring components in the graph
  bool surjective = false;     // every ring component reached by some ray
  bool injective = false;      // far-apart ring endpoints in distinct classes
  bool infinity_unique = false;  // all outer rays in one class
  bool ambiguous = false;        // single linkage broke the pairwise invariant
  bool pass = false;
  double threshold = 0;
  std::vector<int> class_to_component;  // per class: component id, or -2 for
                                        // the point at infinity, -3 mixed
  std::vector<std::string> notes;
};

// Structural checks of the boundary identification at mesh scale. An empty
// bundle is legal: a compact graph without marked rings has no rays and the
// report says so.
BoundaryReport verify_boundary_map(const RayBundle& bundle, const MetricGraph& g);

// rays.csv polyline export: ray,seq,vertex,cum_intrinsic,cum_cost.
void dump_rays_csv(const RayBundle& bundle, const std::string& file);

}  // namespace unfold
