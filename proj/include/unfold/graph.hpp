#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "unfold/model.hpp"

namespace unfold {

// Weighted graph discretization of a surface. Geometry is stored in base
// units together with a single conformal `scale` factor; physical lengths
// are base * scale and physical curvatures base / scale. scale_graph only
// touches the factor, so rescaled graphs share bit-identical base arrays —
// downstream computations that are scale-free (the sigma transform is) give
// bit-identical base results on G and lambda*G by construction.
struct MetricGraph {
  // CSR topology; neighbor lists sorted ascending.
  std::vector<std::uint32_t> offsets;   // n + 1
  std::vector<std::uint32_t> nbr;       // 2m
  std::vector<std::uint32_t> inc_edge;  // 2m, unique-edge id per slot
  std::vector<std::uint32_t> eu, ev;    // m unique edges, eu < ev

  std::vector<double> elen_base;        // m edge lengths
  std::vector<double> pos_base;         // n * ambient_dim
  std::vector<double> chart;            // n * chart_dim (scale-free; may be empty)
  std::vector<double> a_base;           // n shape-operator norms
  std::vector<double> dist_sigma_base;  // n distances to the singular set
  std::vector<double> measure_base;     // n per-vertex cell measures
  std::vector<std::uint8_t> near_sigma_ring;    // n
  std::vector<std::uint8_t> outer_truncation;   // n
  std::vector<std::uint8_t> a_unreliable;       // n (mesh estimator flag)

  double scale = 1.0;
  double h_base = 0.0;  // max edge length (base units)
  int ambient_dim = 0;
  int chart_dim = 0;
  bool totally_geodesic = false;
  bool has_sigma = false;
  bool compact_without_boundary = false;
  std::string id;

  std::size_t n() const { return offsets.empty() ? 0 : offsets.size() - 1; }
  std::size_t m() const { return eu.size(); }
  double h() const { return h_base * scale; }
  double edge_length(std::size_t e) const { return elen_base[e] * scale; }
  double avalue(std::size_t v) const { return a_base[v] / scale; }
  double dist_sigma(std::size_t v) const { return dist_sigma_base[v] * scale; }
  double measure(std::size_t v) const {
    double s = 1.0;
    for (int i = 0; i < chart_dim; ++i) s *= scale;  // scale^dim
    return measure_base[v] * s;
  }
  double pos(std::size_t v, int k) const {
    return pos_base[v * ambient_dim + k] * scale;
  }
};

// Grid discretization of a model chart. h is the target edge length: absolute
// for uniform charts, relative (per unit radius) for graded cone charts,
// where nodes follow r_i = r_min * rho^i and cell size scales with r. The
// catenoid chart is conformally flat, so it gets uniform chart steps sized to
// make the neck-circle edges equal h; physical cells grow with cosh(t/c). The
// realized maximum edge length is stored back into the graph as its
// resolution. bounds override the model's default non-periodic axis ranges
// (pass an empty vector to keep them). Stencils: 8-neighbor for 2d charts,
// 18-neighbor for 3d.
MetricGraph build_graph(const ModelSurface& m, double h,
                        const std::vector<std::pair<double, double>>& bounds = {});

// Angular-resolution flavor for cone charts: res nodes on each link circle;
// the radial ratio matches the angular arc so cells stay near-square.
MetricGraph build_cone_graph(const ModelSurface& m, double r_min, double r_max,
                             int res);

// Multiplies the conformal scale factor (base arrays are copied verbatim).
MetricGraph scale_graph(const MetricGraph& g, double lambda);

// Eagerly folds the scale factor into the arrays (scale becomes 1; every
// entry picks up one rounding). Used to cross-check the lazy representation.
MetricGraph scale_graph_eager(const MetricGraph& g, double lambda);

// Recomputes dist_sigma by a multi-source sweep from the near-sigma ring,
// seeded with the stored ring offsets. Compared against the analytic column
// as a discretization-quality check.
std::vector<double> recompute_dist_sigma(const MetricGraph& g);

// Largest ratio of graph distance to chart-metric distance over sampled
// vertex pairs of a flat chart (stencil quality epsilon_h = ratio - 1).
double measure_stencil_stretch(const MetricGraph& g, const ModelSurface& m,
                               int samples, std::uint64_t seed);

// vertices.csv: index,x0..x{d-1},a,dist_sigma,near_sigma_ring,outer_truncation
// edges.csv:    i,j,length
// chart.csv:    index,c0..c{k-1}  (written when chart coordinates exist)
// All values physical, %.17g, byte-stable.
void dump_graph_csv(const MetricGraph& g, const std::string& dir);
MetricGraph load_graph_csv(const std::string& dir);

// Unique-edge id joining u and v, or UINT32_MAX when they are not adjacent.
std::uint32_t find_edge(const MetricGraph& g, std::uint32_t u, std::uint32_t v);

// Connectivity check used by build/ingest postconditions.
bool graph_connected(const MetricGraph& g);

// Connected components among a flagged vertex subset (flag nonzero), using
// only edges internal to the subset. Returns component id per vertex (or -1).
std::vector<int> flagged_components(const MetricGraph& g,
                                    const std::vector<std::uint8_t>& flag);

}  // namespace unfold
