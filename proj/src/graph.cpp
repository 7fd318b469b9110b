#include "unfold/graph.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <queue>
#include <stdexcept>

#include "unfold/rng.hpp"
#include "unfold/sentinel.hpp"

namespace unfold {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct GridAxis {
  std::vector<double> nodes;
  bool periodic = false;
  std::size_t count() const { return nodes.size(); }
};

// Builds CSR topology from a unique edge list (u < v), neighbors ascending.
void finalize_topology(MetricGraph& g, std::size_t n,
                       std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                       std::vector<double>& lengths) {
  // canonical order: sort unique edges by (u, v)
  std::vector<std::uint32_t> order(edges.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return edges[a] < edges[b];
  });
  g.eu.resize(edges.size());
  g.ev.resize(edges.size());
  g.elen_base.resize(edges.size());
  for (std::uint32_t k = 0; k < order.size(); ++k) {
    g.eu[k] = edges[order[k]].first;
    g.ev[k] = edges[order[k]].second;
    g.elen_base[k] = lengths[order[k]];
  }
  g.offsets.assign(n + 1, 0);
  for (std::size_t e = 0; e < g.eu.size(); ++e) {
    ++g.offsets[g.eu[e] + 1];
    ++g.offsets[g.ev[e] + 1];
  }
  for (std::size_t i = 0; i < n; ++i) g.offsets[i + 1] += g.offsets[i];
  g.nbr.resize(2 * g.eu.size());
  g.inc_edge.resize(2 * g.eu.size());
  std::vector<std::uint32_t> cursor(g.offsets.begin(), g.offsets.end() - 1);
  for (std::uint32_t e = 0; e < g.eu.size(); ++e) {
    std::uint32_t u = g.eu[e], v = g.ev[e];
    g.nbr[cursor[u]] = v;
    g.inc_edge[cursor[u]++] = e;
    g.nbr[cursor[v]] = u;
    g.inc_edge[cursor[v]++] = e;
  }
  // neighbor lists ascending per vertex (sort slots jointly)
  for (std::size_t v = 0; v < n; ++v) {
    std::uint32_t lo = g.offsets[v], hi = g.offsets[v + 1];
    std::vector<std::pair<std::uint32_t, std::uint32_t>> tmp;
    tmp.reserve(hi - lo);
    for (std::uint32_t s = lo; s < hi; ++s) tmp.emplace_back(g.nbr[s], g.inc_edge[s]);
    std::sort(tmp.begin(), tmp.end());
    for (std::uint32_t s = lo; s < hi; ++s) {
      g.nbr[s] = tmp[s - lo].first;
      g.inc_edge[s] = tmp[s - lo].second;
    }
  }
  g.h_base = 0;
  for (double l : g.elen_base) g.h_base = std::max(g.h_base, l);
}

MetricGraph build_grid(const ModelSurface& model, const std::vector<GridAxis>& axes,
                       double declared_h, const std::string& id) {
  // unit-scale geometry goes into the base arrays; the model's scale factor
  // is carried on the graph instead
  ModelSurface base = model;
  base.scale = 1.0;

  const int dim = static_cast<int>(axes.size());
  std::size_t n = 1;
  for (const auto& ax : axes) n *= ax.count();
  if (n == 0) throw std::invalid_argument("build_graph: empty grid");
  for (const auto& ax : axes)
    if (ax.count() < 16)
      throw std::invalid_argument(
          "build_graph: fewer than 16 vertices along a chart dimension");

  MetricGraph g;
  g.ambient_dim = base.ambient_dim;
  g.chart_dim = dim;
  g.scale = model.scale;
  g.totally_geodesic = model.totally_geodesic;
  g.has_sigma = model.has_sigma;
  g.id = id;

  // vertex order: row-major, last axis fastest
  std::vector<std::size_t> stride(dim, 1);
  for (int k = dim - 2; k >= 0; --k) stride[k] = stride[k + 1] * axes[k + 1].count();

  g.chart.resize(n * dim);
  g.pos_base.resize(n * base.ambient_dim);
  g.a_base.resize(n);
  g.dist_sigma_base.resize(n);
  g.measure_base.resize(n);
  g.near_sigma_ring.assign(n, 0);
  g.outer_truncation.assign(n, 0);
  g.a_unreliable.assign(n, 0);

  std::vector<std::size_t> idx(dim, 0);
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t rem = v;
    for (int k = 0; k < dim; ++k) {
      idx[k] = rem / stride[k];
      rem %= stride[k];
    }
    double c[3];
    for (int k = 0; k < dim; ++k) c[k] = axes[k].nodes[idx[k]];
    for (int k = 0; k < dim; ++k) g.chart[v * dim + k] = c[k];
    base.position(c, &g.pos_base[v * base.ambient_dim]);
    g.a_base[v] = base.shape_norm(c);
    g.dist_sigma_base[v] = base.dist_sigma(c);
    // cell measure: product of half-neighbor extents times sqrt(det g)
    double gdiag[3], ext = 1.0;
    base.metric_diag(c, gdiag);
    for (int k = 0; k < dim; ++k) {
      const auto& nodes = axes[k].nodes;
      const std::size_t cnt = nodes.size();
      double lo, hi;
      if (axes[k].periodic) {
        double prev = nodes[(idx[k] + cnt - 1) % cnt];
        double next = nodes[(idx[k] + 1) % cnt];
        double dprev = nodes[idx[k]] - prev;
        if (dprev <= 0) dprev += kTwoPi;
        double dnext = next - nodes[idx[k]];
        if (dnext <= 0) dnext += kTwoPi;
        lo = dprev / 2;
        hi = dnext / 2;
      } else {
        lo = idx[k] == 0 ? 0 : (nodes[idx[k]] - nodes[idx[k] - 1]) / 2;
        hi = idx[k] + 1 == cnt ? 0 : (nodes[idx[k] + 1] - nodes[idx[k]]) / 2;
      }
      ext *= (lo + hi) * std::sqrt(gdiag[k]);
    }
    g.measure_base[v] = ext;
    // boundary flags along non-periodic axes
    if (!axes[0].periodic) {
      bool inner = idx[0] == 0;
      bool outer = idx[0] + 1 == axes[0].count();
      if (model.has_sigma) {
        if (inner) g.near_sigma_ring[v] = 1;
        if (outer) g.outer_truncation[v] = 1;
      } else if (inner || outer) {
        g.outer_truncation[v] = 1;
      }
    }
    for (int k = 1; k < dim; ++k) {
      if (!axes[k].periodic &&
          (idx[k] == 0 || idx[k] + 1 == axes[k].count()))
        g.outer_truncation[v] = 1;
    }
  }

  // edges: axis steps plus 2-axis diagonals (8-neighbor in 2d, 18 in 3d)
  std::vector<std::array<int, 3>> dirs;
  if (dim == 2) {
    dirs = {{1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {1, -1, 0}};
  } else {
    dirs = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {1, -1, 0},
            {1, 0, 1}, {1, 0, -1}, {0, 1, 1}, {0, 1, -1}};
  }
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  std::vector<double> lengths;
  edges.reserve(n * dirs.size());
  lengths.reserve(n * dirs.size());
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t rem = v;
    for (int k = 0; k < dim; ++k) {
      idx[k] = rem / stride[k];
      rem %= stride[k];
    }
    for (const auto& d : dirs) {
      bool ok = true;
      std::size_t w = 0;
      double c0[3], c1[3];
      for (int k = 0; k < dim; ++k) c0[k] = axes[k].nodes[idx[k]];
      for (int k = 0; k < dim; ++k) {
        long j = static_cast<long>(idx[k]) + d[k];
        const auto cnt = static_cast<long>(axes[k].count());
        double coord;
        if (axes[k].periodic) {
          long jw = (j % cnt + cnt) % cnt;
          coord = axes[k].nodes[jw];
          // unwrapped coordinate for the chart segment
          if (j >= cnt) coord += kTwoPi;
          if (j < 0) coord -= kTwoPi;
          j = jw;
        } else {
          if (j < 0 || j >= cnt) {
            ok = false;
            break;
          }
          coord = axes[k].nodes[j];
        }
        c1[k] = coord;
        w += static_cast<std::size_t>(j) * stride[k];
      }
      if (!ok || w == v) continue;
      std::uint32_t a = static_cast<std::uint32_t>(v);
      std::uint32_t b = static_cast<std::uint32_t>(w);
      if (a > b) std::swap(a, b);
      edges.emplace_back(a, b);
      double len = base.segment_length(c0, c1);
      if (!(len > 0))
        throw std::runtime_error("build_graph: nonpositive edge length");
      lengths.push_back(len);
    }
  }
  // dedupe (u,v) keeping first
  {
    std::vector<std::uint32_t> order(edges.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::uint32_t x, std::uint32_t y) {
      if (edges[x] != edges[y]) return edges[x] < edges[y];
      return x < y;
    });
    std::vector<std::pair<std::uint32_t, std::uint32_t>> ue;
    std::vector<double> ul;
    ue.reserve(edges.size());
    ul.reserve(edges.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (i > 0 && edges[order[i]] == edges[order[i - 1]]) continue;
      ue.push_back(edges[order[i]]);
      ul.push_back(lengths[order[i]]);
    }
    edges.swap(ue);
    lengths.swap(ul);
  }
  finalize_topology(g, n, edges, lengths);

  (void)declared_h;
  if (!graph_connected(g)) throw std::runtime_error("build_graph: graph disconnected");

  // graded charts: the tip guard is against the local cell size at the inner
  // ring, the only place the tube geometry can be under-resolved
  if (model.has_sigma && !axes[0].nodes.empty()) {
    double r_min = axes[0].nodes[0];
    double local_h = 0;
    for (std::size_t e = 0; e < g.m(); ++e) {
      if (g.near_sigma_ring[g.eu[e]] || g.near_sigma_ring[g.ev[e]])
        local_h = std::max(local_h, g.elen_base[e]);
    }
    if (r_min < 2 * local_h)
      throw std::invalid_argument(
          "build_graph: inner radius under-resolved (r_min < 2h at the ring)");
  }
  return g;
}

GridAxis uniform_axis(double lo, double hi, std::size_t count, bool periodic) {
  GridAxis ax;
  ax.periodic = periodic;
  ax.nodes.resize(count);
  if (periodic) {
    for (std::size_t i = 0; i < count; ++i) ax.nodes[i] = lo + (hi - lo) * i / count;
  } else {
    for (std::size_t i = 0; i < count; ++i)
      ax.nodes[i] = lo + (hi - lo) * i / (count - 1);
  }
  return ax;
}

GridAxis graded_axis(double r_min, double r_max, double rel_step) {
  if (!(r_min > 0) || !(r_max > r_min))
    throw std::invalid_argument("build_graph: bad radial bounds");
  auto steps = static_cast<std::size_t>(
      std::ceil(std::log(r_max / r_min) / std::log1p(rel_step)));
  steps = std::max<std::size_t>(steps, 15);
  double rho = std::pow(r_max / r_min, 1.0 / static_cast<double>(steps));
  GridAxis ax;
  ax.nodes.resize(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i)
    ax.nodes[i] = r_min * std::pow(rho, static_cast<double>(i));
  ax.nodes.back() = r_max;
  return ax;
}

}  // namespace

MetricGraph build_graph(const ModelSurface& m, double h,
                        const std::vector<std::pair<double, double>>& bounds) {
  if (!(h > 0)) throw std::invalid_argument("build_graph: h must be positive");
  std::vector<ChartAxis> axes_cfg = m.axes;
  // override non-periodic axis bounds in order
  std::size_t bi = 0;
  for (auto& ax : axes_cfg) {
    if (ax.periodic) continue;
    if (bi < bounds.size()) {
      ax.lo = bounds[bi].first;
      ax.hi = bounds[bi].second;
      ++bi;
    }
    if (!(ax.hi > ax.lo)) throw std::invalid_argument("build_graph: empty axis range");
  }

  std::vector<GridAxis> axes;
  char idbuf[160];
  if (m.kind == ModelKind::cone_over_sphere_products ||
      m.kind == ModelKind::clifford_cone) {
    // h is the relative density: angular arc per step ~ h per unit radius
    const double link_r = cone_link_radius(m);
    auto res = static_cast<std::size_t>(std::ceil(kTwoPi * link_r / h));
    res = std::max<std::size_t>(res, 16);
    const double rel = kTwoPi * link_r / static_cast<double>(res);
    axes.push_back(graded_axis(axes_cfg[0].lo, axes_cfg[0].hi, rel));
    for (int k = 1; k < m.chart_dim(); ++k)
      axes.push_back(uniform_axis(0, kTwoPi, res, true));
    std::snprintf(idbuf, sizeof(idbuf), "%s|r=[%.17g,%.17g]|res=%zu",
                  m.name.c_str(), axes_cfg[0].lo, axes_cfg[0].hi, res);
  } else if (m.kind == ModelKind::catenoid) {
    // conformally flat chart (ds^2 = cosh^2(t/c) (dt^2 + c^2 dtheta^2)):
    // uniform chart steps give near-square physical cells that grow with the
    // conformal factor toward the ends, so deep truncations stay tractable.
    // h is the physical edge length at the neck circle.
    const double c = m.neck;
    auto res = static_cast<std::size_t>(std::ceil(kTwoPi * c / h));
    res = std::max<std::size_t>(res, 16);
    const double dt = c * kTwoPi / static_cast<double>(res);
    auto nt = static_cast<std::size_t>(
                  std::ceil((axes_cfg[0].hi - axes_cfg[0].lo) / dt)) +
              1;
    nt = std::max<std::size_t>(nt, 16);
    axes.push_back(uniform_axis(axes_cfg[0].lo, axes_cfg[0].hi, nt, false));
    axes.push_back(uniform_axis(0, kTwoPi, res, true));
    std::snprintf(idbuf, sizeof(idbuf), "%s|t=[%.17g,%.17g]|res=%zu",
                  m.name.c_str(), axes_cfg[0].lo, axes_cfg[0].hi, res);
  } else {
    // absolute target edge length: bound each axis's metric coefficient
    for (int k = 0; k < m.chart_dim(); ++k) {
      const auto& ac = axes_cfg[k];
      // scan the metric coefficient over the chart to bound the arc length
      double gmax = 0;
      double probe[3] = {0, 0, 0};
      for (int s = 0; s <= 32; ++s) {
        for (int kk = 0; kk < m.chart_dim(); ++kk) {
          const auto& a2 = axes_cfg[kk];
          probe[kk] = a2.lo + (a2.hi - a2.lo) * s / 32.0;
        }
        probe[k] = ac.lo + (ac.hi - ac.lo) * s / 32.0;
        double gd[3];
        ModelSurface unit = m;
        unit.scale = 1.0;
        unit.metric_diag(probe, gd);
        gmax = std::max(gmax, gd[k]);
      }
      const double arc = std::sqrt(gmax) * (ac.hi - ac.lo);
      auto cnt = static_cast<std::size_t>(std::ceil(arc / h)) + 1;
      cnt = std::max<std::size_t>(cnt, 16);
      axes.push_back(uniform_axis(ac.lo, ac.hi, ac.periodic ? cnt - 1 : cnt,
                                  ac.periodic));
    }
    std::snprintf(idbuf, sizeof(idbuf), "%s|h=%.17g", m.name.c_str(), h);
  }
  return build_grid(m, axes, h, idbuf);
}

MetricGraph build_cone_graph(const ModelSurface& m, double r_min, double r_max,
                             int res) {
  if (m.kind != ModelKind::cone_over_sphere_products &&
      m.kind != ModelKind::clifford_cone)
    throw std::invalid_argument("build_cone_graph: not a cone model");
  if (res < 16) throw std::invalid_argument("build_cone_graph: res < 16");
  const double link_r = cone_link_radius(m);
  const double h = kTwoPi * link_r / res;
  return build_graph(m, h, {{r_min, r_max}});
}

MetricGraph scale_graph(const MetricGraph& g, double lambda) {
  if (!(lambda > 0)) throw std::invalid_argument("scale_graph: lambda must be positive");
  MetricGraph out = g;
  out.scale = g.scale * lambda;
  return out;
}

MetricGraph scale_graph_eager(const MetricGraph& g, double lambda) {
  if (!(lambda > 0))
    throw std::invalid_argument("scale_graph_eager: lambda must be positive");
  MetricGraph out = g;
  const double s = g.scale * lambda;
  out.scale = 1.0;
  for (auto& l : out.elen_base) l *= s;
  for (auto& x : out.pos_base) x *= s;
  for (auto& a : out.a_base) a /= s;
  for (auto& d : out.dist_sigma_base) d *= s;
  double sd = 1.0;
  for (int k = 0; k < g.chart_dim; ++k) sd *= s;
  for (auto& mv : out.measure_base) mv *= sd;
  out.h_base = 0;
  for (double l : out.elen_base) out.h_base = std::max(out.h_base, l);
  return out;
}

std::vector<double> recompute_dist_sigma(const MetricGraph& g) {
  std::vector<double> dist(g.n(), kUnbounded);
  using Item = std::pair<double, std::uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (std::size_t v = 0; v < g.n(); ++v) {
    if (g.near_sigma_ring[v]) {
      dist[v] = g.dist_sigma(v);
      heap.emplace(dist[v], static_cast<std::uint32_t>(v));
    }
  }
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v]) continue;
    for (std::uint32_t s = g.offsets[v]; s < g.offsets[v + 1]; ++s) {
      const std::uint32_t w = g.nbr[s];
      const double nd = d + g.edge_length(g.inc_edge[s]);
      if (nd < dist[w]) {
        dist[w] = nd;
        heap.emplace(nd, w);
      }
    }
  }
  return dist;
}

std::uint32_t find_edge(const MetricGraph& g, std::uint32_t u, std::uint32_t v) {
  const std::uint32_t* beg = g.nbr.data() + g.offsets[u];
  const std::uint32_t* end = g.nbr.data() + g.offsets[u + 1];
  const std::uint32_t* it = std::lower_bound(beg, end, v);
  if (it == end || *it != v) return std::numeric_limits<std::uint32_t>::max();
  return g.inc_edge[g.offsets[u] + static_cast<std::uint32_t>(it - beg)];
}

bool graph_connected(const MetricGraph& g) {
  if (g.n() == 0) return false;
  std::vector<std::uint8_t> seen(g.n(), 0);
  std::vector<std::uint32_t> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    std::uint32_t v = stack.back();
    stack.pop_back();
    for (std::uint32_t s = g.offsets[v]; s < g.offsets[v + 1]; ++s) {
      std::uint32_t w = g.nbr[s];
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count == g.n();
}

std::vector<int> flagged_components(const MetricGraph& g,
                                    const std::vector<std::uint8_t>& flag) {
  std::vector<int> comp(g.n(), -1);
  int next = 0;
  for (std::size_t v = 0; v < g.n(); ++v) {
    if (!flag[v] || comp[v] >= 0) continue;
    comp[v] = next;
    std::vector<std::uint32_t> stack{static_cast<std::uint32_t>(v)};
    while (!stack.empty()) {
      std::uint32_t x = stack.back();
      stack.pop_back();
      for (std::uint32_t s = g.offsets[x]; s < g.offsets[x + 1]; ++s) {
        std::uint32_t w = g.nbr[s];
        if (flag[w] && comp[w] < 0) {
          comp[w] = next;
          stack.push_back(w);
        }
      }
    }
    ++next;
  }
  return comp;
}

double measure_stencil_stretch(const MetricGraph& g, const ModelSurface& m,
                               int samples, std::uint64_t seed) {
  if (m.kind != ModelKind::hyperplane)
    throw std::invalid_argument("measure_stencil_stretch: flat charts only");
  // graph distance vs straight-line chart distance over random pairs
  DetRng rng(seed);
  double worst = 1.0;
  ModelSurface unit = m;
  unit.scale = 1.0;
  for (int s = 0; s < samples; ++s) {
    auto a = static_cast<std::uint32_t>(rng.bounded(g.n()));
    auto b = static_cast<std::uint32_t>(rng.bounded(g.n()));
    if (a == b) continue;
    // Dijkstra from a until b settles
    std::vector<double> dist(g.n(), kUnbounded);
    using Item = std::pair<double, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[a] = 0;
    heap.emplace(0.0, a);
    while (!heap.empty()) {
      auto [d, v] = heap.top();
      heap.pop();
      if (d > dist[v]) continue;
      if (v == b) break;
      for (std::uint32_t t = g.offsets[v]; t < g.offsets[v + 1]; ++t) {
        const std::uint32_t w = g.nbr[t];
        const double nd = d + g.elen_base[g.inc_edge[t]];
        if (nd < dist[w]) {
          dist[w] = nd;
          heap.emplace(nd, w);
        }
      }
    }
    double dx = g.chart[a * 2] - g.chart[b * 2];
    double dy = g.chart[a * 2 + 1] - g.chart[b * 2 + 1];
    double straight = std::hypot(dx, dy);
    if (straight <= 0) continue;
    worst = std::max(worst, dist[b] / straight);
  }
  return worst;
}

void dump_graph_csv(const MetricGraph& g, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  {
    std::ofstream out(dir + "/vertices.csv");
    if (!out) throw std::runtime_error("dump_graph_csv: cannot write vertices.csv");
    out << "index";
    for (int k = 0; k < g.ambient_dim; ++k) out << ",x" << k;
    out << ",a,dist_sigma,near_sigma_ring,outer_truncation\n";
    for (std::size_t v = 0; v < g.n(); ++v) {
      out << v;
      for (int k = 0; k < g.ambient_dim; ++k) out << ',' << format_double(g.pos(v, k));
      out << ',' << format_double(g.avalue(v)) << ','
          << format_double(g.dist_sigma(v)) << ','
          << int(g.near_sigma_ring[v]) << ',' << int(g.outer_truncation[v]) << '\n';
    }
  }
  {
    std::ofstream out(dir + "/edges.csv");
    if (!out) throw std::runtime_error("dump_graph_csv: cannot write edges.csv");
    out << "i,j,length\n";
    for (std::size_t e = 0; e < g.m(); ++e)
      out << g.eu[e] << ',' << g.ev[e] << ',' << format_double(g.edge_length(e))
          << '\n';
  }
  if (!g.chart.empty()) {
    std::ofstream out(dir + "/chart.csv");
    out << "index";
    for (int k = 0; k < g.chart_dim; ++k) out << ",c" << k;
    out << '\n';
    for (std::size_t v = 0; v < g.n(); ++v) {
      out << v;
      for (int k = 0; k < g.chart_dim; ++k)
        out << ',' << format_double(g.chart[v * g.chart_dim + k]);
      out << '\n';
    }
  }
  {
    std::ofstream out(dir + "/graph.meta");
    out << "id," << g.id << "\n";
    out << "ambient_dim," << g.ambient_dim << "\n";
    out << "chart_dim," << g.chart_dim << "\n";
    out << "totally_geodesic," << int(g.totally_geodesic) << "\n";
    out << "has_sigma," << int(g.has_sigma) << "\n";
    out << "compact_without_boundary," << int(g.compact_without_boundary) << "\n";
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = line.find(',', pos);
    if (comma == std::string::npos) {
      out.push_back(line.substr(pos));
      break;
    }
    out.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return out;
}

}  // namespace

MetricGraph load_graph_csv(const std::string& dir) {
  MetricGraph g;
  g.scale = 1.0;
  {
    std::ifstream in(dir + "/graph.meta");
    if (in) {
      std::string line;
      while (std::getline(in, line)) {
        // key = text before the first comma; the value keeps any further
        // commas (graph ids contain them)
        auto comma = line.find(',');
        if (comma == std::string::npos) continue;
        const std::string key = line.substr(0, comma);
        const std::string val = line.substr(comma + 1);
        if (key == "id") g.id = val;
        if (key == "ambient_dim") g.ambient_dim = std::stoi(val);
        if (key == "chart_dim") g.chart_dim = std::stoi(val);
        if (key == "totally_geodesic") g.totally_geodesic = val == "1";
        if (key == "has_sigma") g.has_sigma = val == "1";
        if (key == "compact_without_boundary") g.compact_without_boundary = val == "1";
      }
    }
  }
  std::ifstream vin(dir + "/vertices.csv");
  if (!vin) throw std::runtime_error("load_graph_csv: missing vertices.csv in " + dir);
  std::string line;
  if (!std::getline(vin, line))
    throw std::runtime_error("load_graph_csv: empty vertices.csv");
  {
    auto head = split_csv_line(line);
    if (head.size() < 5 || head[0] != "index")
      throw std::runtime_error("load_graph_csv: bad vertices.csv header");
    g.ambient_dim = static_cast<int>(head.size()) - 5;
  }
  std::size_t expect = 0;
  while (std::getline(vin, line)) {
    if (line.empty()) continue;
    auto f = split_csv_line(line);
    if (f.size() != static_cast<std::size_t>(g.ambient_dim) + 5)
      throw std::runtime_error("load_graph_csv: bad vertex row: " + line);
    if (std::stoul(f[0]) != expect)
      throw std::runtime_error("load_graph_csv: vertex indices must be dense");
    ++expect;
    for (int k = 0; k < g.ambient_dim; ++k)
      g.pos_base.push_back(parse_double(f[1 + k]));
    g.a_base.push_back(parse_double(f[1 + g.ambient_dim]));
    g.dist_sigma_base.push_back(parse_double(f[2 + g.ambient_dim]));
    g.near_sigma_ring.push_back(static_cast<std::uint8_t>(std::stoi(f[3 + g.ambient_dim])));
    g.outer_truncation.push_back(static_cast<std::uint8_t>(std::stoi(f[4 + g.ambient_dim])));
  }
  const std::size_t n = g.a_base.size();
  if (n == 0) throw std::runtime_error("load_graph_csv: no vertices");
  g.a_unreliable.assign(n, 0);
  g.measure_base.assign(n, 0.0);

  std::ifstream ein(dir + "/edges.csv");
  if (!ein) throw std::runtime_error("load_graph_csv: missing edges.csv in " + dir);
  if (!std::getline(ein, line) || split_csv_line(line).size() != 3)
    throw std::runtime_error("load_graph_csv: bad edges.csv header");
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  std::vector<double> lengths;
  while (std::getline(ein, line)) {
    if (line.empty()) continue;
    auto f = split_csv_line(line);
    if (f.size() != 3) throw std::runtime_error("load_graph_csv: bad edge row: " + line);
    auto i = static_cast<std::uint32_t>(std::stoul(f[0]));
    auto j = static_cast<std::uint32_t>(std::stoul(f[1]));
    if (i >= n || j >= n || i == j)
      throw std::runtime_error("load_graph_csv: edge endpoints out of range");
    if (i > j) std::swap(i, j);
    double len = parse_double(f[2]);
    if (!(len > 0)) throw std::runtime_error("load_graph_csv: nonpositive edge length");
    edges.emplace_back(i, j);
    lengths.push_back(len);
  }
  finalize_topology(g, n, edges, lengths);

  std::ifstream cin_(dir + "/chart.csv");
  if (cin_) {
    std::getline(cin_, line);
    auto head = split_csv_line(line);
    g.chart_dim = static_cast<int>(head.size()) - 1;
    g.chart.resize(n * g.chart_dim);
    std::size_t v = 0;
    while (std::getline(cin_, line)) {
      if (line.empty()) continue;
      auto f = split_csv_line(line);
      for (int k = 0; k < g.chart_dim; ++k)
        g.chart[v * g.chart_dim + k] = parse_double(f[1 + k]);
      ++v;
    }
  }
  if (g.id.empty()) g.id = "csv:" + dir;
  // a-values all zero but not flagged as totally geodesic is the inconsistent
  // input case the sigma computation rejects; leave detection to it
  return g;
}

}  // namespace unfold
