#pragma once

// Hand-built graphs and closed-form fields shared by the test suite. The
// builder assembles the CSR arrays the library expects so tests can shape
// exact fixtures (paths, stars, grids, tubes, graded wedges) without going
// through a model chart.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "unfold/graph.hpp"
#include "unfold/sentinel.hpp"
#include "unfold/sigma.hpp"

namespace support {

struct GraphBuilder {
  int ambient_dim = 3;
  int chart_dim = 0;
  std::vector<double> pos, chart, a, dist_sigma;
  std::vector<std::uint8_t> ring, outer;
  struct Edge {
    std::uint32_t u, v;
    double len;
  };
  std::vector<Edge> edges;

  std::uint32_t add_vertex(std::initializer_list<double> position,
                           double a_value = 0.0,
                           double d_sigma = unfold::kUnbounded,
                           bool near_ring = false, bool truncated = false,
                           std::initializer_list<double> chart_point = {}) {
    if (static_cast<int>(position.size()) != ambient_dim)
      throw std::invalid_argument("GraphBuilder: position dimension mismatch");
    if (static_cast<int>(chart_point.size()) != chart_dim)
      throw std::invalid_argument("GraphBuilder: chart dimension mismatch");
    pos.insert(pos.end(), position.begin(), position.end());
    chart.insert(chart.end(), chart_point.begin(), chart_point.end());
    a.push_back(a_value);
    dist_sigma.push_back(d_sigma);
    ring.push_back(near_ring ? 1 : 0);
    outer.push_back(truncated ? 1 : 0);
    return static_cast<std::uint32_t>(a.size() - 1);
  }

  void add_edge(std::uint32_t u, std::uint32_t v, double len) {
    if (u == v || !(len > 0))
      throw std::invalid_argument("GraphBuilder: bad edge");
    edges.push_back({std::min(u, v), std::max(u, v), len});
  }

  unfold::MetricGraph finish(const std::string& id, bool totally_geodesic,
                             bool has_sigma,
                             bool compact_without_boundary = false) const {
    unfold::MetricGraph g;
    const std::size_t n = a.size();
    const std::size_t m = edges.size();
    g.ambient_dim = ambient_dim;
    g.chart_dim = chart_dim;
    g.pos_base = pos;
    g.chart = chart;
    g.a_base = a;
    g.dist_sigma_base = dist_sigma;
    g.near_sigma_ring = ring;
    g.outer_truncation = outer;
    g.a_unreliable.assign(n, 0);
    g.measure_base.assign(n, 1.0);
    g.totally_geodesic = totally_geodesic;
    g.has_sigma = has_sigma;
    g.compact_without_boundary = compact_without_boundary;
    g.id = id;

    g.eu.resize(m);
    g.ev.resize(m);
    g.elen_base.resize(m);
    double h = 0;
    for (std::size_t e = 0; e < m; ++e) {
      g.eu[e] = edges[e].u;
      g.ev[e] = edges[e].v;
      g.elen_base[e] = edges[e].len;
      h = std::max(h, edges[e].len);
    }
    g.h_base = h;

    std::vector<std::uint32_t> degree(n, 0);
    for (const Edge& e : edges) {
      ++degree[e.u];
      ++degree[e.v];
    }
    g.offsets.assign(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) g.offsets[v + 1] = g.offsets[v] + degree[v];
    g.nbr.resize(2 * m);
    g.inc_edge.resize(2 * m);
    std::vector<std::uint32_t> cursor(g.offsets.begin(), g.offsets.end() - 1);
    for (std::size_t e = 0; e < m; ++e) {
      g.nbr[cursor[edges[e].u]] = edges[e].v;
      g.inc_edge[cursor[edges[e].u]++] = static_cast<std::uint32_t>(e);
      g.nbr[cursor[edges[e].v]] = edges[e].u;
      g.inc_edge[cursor[edges[e].v]++] = static_cast<std::uint32_t>(e);
    }
    for (std::size_t v = 0; v < n; ++v) {
      // sort each adjacency slice by neighbor index, edge ids in lockstep
      const std::uint32_t lo = g.offsets[v], hi = g.offsets[v + 1];
      std::vector<std::pair<std::uint32_t, std::uint32_t>> slice;
      slice.reserve(hi - lo);
      for (std::uint32_t s = lo; s < hi; ++s)
        slice.emplace_back(g.nbr[s], g.inc_edge[s]);
      std::sort(slice.begin(), slice.end());
      for (std::uint32_t s = lo; s < hi; ++s) {
        g.nbr[s] = slice[s - lo].first;
        g.inc_edge[s] = slice[s - lo].second;
      }
    }
    return g;
  }
};

// Straight path of n vertices with uniform edge length.
inline unfold::MetricGraph path_graph(std::size_t n, double step = 1.0) {
  GraphBuilder b;
  for (std::size_t i = 0; i < n; ++i)
    b.add_vertex({static_cast<double>(i) * step, 0.0, 0.0});
  for (std::size_t i = 0; i + 1 < n; ++i)
    b.add_edge(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i + 1), step);
  return b.finish("path", true, false);
}

// Star of `arms` unit-edge paths of length arm_len glued at one center.
inline unfold::MetricGraph star_tree(int arms = 3, int arm_len = 5,
                                     double step = 1.0) {
  GraphBuilder b;
  const std::uint32_t center = b.add_vertex({0.0, 0.0, 0.0});
  for (int k = 0; k < arms; ++k) {
    const double phi = 2.0 * M_PI * k / arms;
    std::uint32_t prev = center;
    for (int i = 1; i <= arm_len; ++i) {
      const std::uint32_t v =
          b.add_vertex({i * step * std::cos(phi), i * step * std::sin(phi), 0.0});
      b.add_edge(prev, v, step);
      prev = v;
    }
  }
  return b.finish("star_tree", true, false);
}

// nx-by-ny planar grid with the 8-neighbor stencil (diagonals sqrt(2)*step).
// Vertex (i,j) has index i*ny + j.
inline unfold::MetricGraph flat_grid(std::size_t nx, std::size_t ny,
                                     double step = 1.0) {
  GraphBuilder b;
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j)
      b.add_vertex({i * step, j * step, 0.0});
  auto id = [&](std::size_t i, std::size_t j) {
    return static_cast<std::uint32_t>(i * ny + j);
  };
  const double diag = step * std::sqrt(2.0);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      if (i + 1 < nx) b.add_edge(id(i, j), id(i + 1, j), step);
      if (j + 1 < ny) b.add_edge(id(i, j), id(i, j + 1), step);
      if (i + 1 < nx && j + 1 < ny) b.add_edge(id(i, j), id(i + 1, j + 1), diag);
      if (i + 1 < nx && j > 0) b.add_edge(id(i, j), id(i + 1, j - 1), diag);
    }
  return b.finish("flat_grid", true, false);
}

// Product tube: circle of radius R (res nodes) times [0, length], near-square
// cells, 8-neighbor stencil, both end rings flagged as truncation boundary.
// Vertex (iz, it) has index iz*res + it.
inline unfold::MetricGraph tube_graph(double R, double length, std::size_t res) {
  GraphBuilder b;
  const double dtheta = 2.0 * M_PI / static_cast<double>(res);
  const double arc = R * dtheta;
  const std::size_t nz = static_cast<std::size_t>(std::ceil(length / arc)) + 1;
  const double dz = length / static_cast<double>(nz - 1);
  for (std::size_t iz = 0; iz < nz; ++iz)
    for (std::size_t it = 0; it < res; ++it) {
      const double th = it * dtheta;
      b.add_vertex({R * std::cos(th), R * std::sin(th), iz * dz},
                   /*a=*/1.0 / R, unfold::kUnbounded, false,
                   iz == 0 || iz + 1 == nz);
    }
  auto id = [&](std::size_t iz, std::size_t it) {
    return static_cast<std::uint32_t>(iz * res + (it % res));
  };
  const double diag = std::hypot(arc, dz);
  for (std::size_t iz = 0; iz < nz; ++iz)
    for (std::size_t it = 0; it < res; ++it) {
      b.add_edge(id(iz, it), id(iz, it + 1), arc);
      if (iz + 1 < nz) {
        b.add_edge(id(iz, it), id(iz + 1, it), dz);
        b.add_edge(id(iz, it), id(iz + 1, it + 1), diag);
        b.add_edge(id(iz, it + 1), id(iz + 1, it), diag);
      }
    }
  return b.finish("tube", false, false);
}

// Constant-value gauge on an existing graph (slope zero by construction).
inline unfold::SigmaField constant_field(const unfold::MetricGraph& g, double b0,
                                         double alpha = 1.0) {
  unfold::SigmaField f;
  f.alpha = alpha;
  f.b.assign(g.n(), b0);
  f.delta.assign(g.n(), 1.0 / b0);
  f.refined = true;
  f.trivial = false;
  f.l_hat = unfold::rescaled_slope(g, f);
  f.graph_id = g.id;
  return f;
}

// The exact continuum gauge of a cone chart: b = (a0 + alpha) / r with the
// per-vertex radius supplied by the caller.
inline unfold::SigmaField cone_closed_form_field(const unfold::MetricGraph& g,
                                                 const std::vector<double>& radius,
                                                 double a0, double alpha = 1.0) {
  unfold::SigmaField f;
  f.alpha = alpha;
  f.b.resize(g.n());
  f.delta.resize(g.n());
  for (std::size_t v = 0; v < g.n(); ++v) {
    f.b[v] = (a0 + alpha) / radius[v];
    f.delta[v] = radius[v] / (a0 + alpha);
  }
  f.refined = true;
  f.trivial = false;
  f.l_hat = unfold::rescaled_slope(g, f);
  f.graph_id = g.id;
  return f;
}

struct WedgeFixture {
  unfold::MetricGraph graph;
  unfold::SigmaField field;
  std::vector<double> radius;  // per vertex
  double xi = 0;
};

// Thin, finely graded annular wedge of a cone with |A| = a0/r: `cols` angular
// columns and geometrically spaced radii, node spacing about a quarter of the
// ball radius xi*delta(r) so scale-adapted balls hold many vertices. Carries
// the closed-form gauge.
inline WedgeFixture graded_wedge(double r_lo, double r_hi, double a0,
                                 double xi = 1e-4, std::size_t cols = 4) {
  WedgeFixture w;
  w.xi = xi;
  const double alpha = 1.0;
  const double rel = xi / (4.0 * (a0 + alpha));  // node spacing / radius
  GraphBuilder b;
  b.chart_dim = 2;
  std::vector<double> radii;
  for (double r = r_lo; r <= r_hi * (1 + rel); r *= 1.0 + rel) radii.push_back(r);
  const std::size_t rows = radii.size();
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t c = 0; c < cols; ++c) {
      const double th = rel * static_cast<double>(c);
      b.add_vertex({radii[i] * std::cos(th), radii[i] * std::sin(th), 0.0},
                   a0 / radii[i], radii[i], false, false, {radii[i], th});
      w.radius.push_back(radii[i]);
    }
  auto id = [&](std::size_t i, std::size_t c) {
    return static_cast<std::uint32_t>(i * cols + c);
  };
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t c = 0; c < cols; ++c) {
      const double dr = i + 1 < rows ? radii[i + 1] - radii[i] : 0;
      const double arc = radii[i] * rel;
      if (c + 1 < cols) b.add_edge(id(i, c), id(i, c + 1), arc);
      if (i + 1 < rows) {
        b.add_edge(id(i, c), id(i + 1, c), dr);
        if (c + 1 < cols) {
          const double diag = std::hypot(dr, arc);
          b.add_edge(id(i, c), id(i + 1, c + 1), diag);
          b.add_edge(id(i, c + 1), id(i + 1, c), diag);
        }
      }
    }
  w.graph = b.finish("graded_wedge", false, true);
  w.field = cone_closed_form_field(w.graph, w.radius, a0, alpha);
  return w;
}

}  // namespace support
