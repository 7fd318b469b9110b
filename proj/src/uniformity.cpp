#include "unfold/uniformity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>
#include <stdexcept>

#include "unfold/dijkstra.hpp"
#include "unfold/parallel.hpp"
#include "unfold/rng.hpp"
#include "unfold/sentinel.hpp"

namespace unfold {

namespace {

double ambient_dist(const MetricGraph& g, std::uint32_t a, std::uint32_t b) {
  double s = 0;
  for (int k = 0; k < g.ambient_dim; ++k) {
    const double d = g.pos(a, k) - g.pos(b, k);
    s += d * d;
  }
  return std::sqrt(s);
}

// Dijkstra restricted to an allowed-vertex mask; returns the s..t vertex
// sequence or empty when t is unreachable inside the mask.
std::vector<std::uint32_t> masked_shortest_path(const MetricGraph& g,
                                                const std::vector<double>& ecost,
                                                const std::vector<std::uint8_t>& allowed,
                                                std::uint32_t s, std::uint32_t t) {
  const std::size_t n = g.n();
  std::vector<double> dist(n, kUnbounded);
  std::vector<std::uint32_t> parent(n, std::numeric_limits<std::uint32_t>::max());
  using Item = std::pair<double, std::uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[s] = 0;
  heap.emplace(0.0, s);
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v]) continue;
    if (v == t) break;
    for (std::uint32_t k = g.offsets[v]; k < g.offsets[v + 1]; ++k) {
      const std::uint32_t w = g.nbr[k];
      if (!allowed[w]) continue;
      const double nd = d + ecost[g.inc_edge[k]];
      if (nd < dist[w]) {
        dist[w] = nd;
        parent[w] = v;
        heap.emplace(nd, w);
      }
    }
  }
  if (is_unbounded(dist[t])) return {};
  std::vector<std::uint32_t> path{t};
  for (std::uint32_t v = t; v != s; v = parent[v]) path.push_back(parent[v]);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

UniformityCertificate verify_sigma_uniform(const std::vector<std::uint32_t>& curve,
                                           const SigmaField& field,
                                           const MetricGraph& g,
                                           const std::vector<double>* icost) {
  if (curve.size() < 2)
    throw std::invalid_argument("verify_sigma_uniform: curve needs two vertices");
  if (curve.front() == curve.back())
    throw std::invalid_argument("verify_sigma_uniform: endpoints coincide");
  std::vector<double> own;
  if (!icost) {
    own = intrinsic_costs(g);
    icost = &own;
  }
  // adjacency + per-edge lengths (throws when the curve leaves the graph)
  const GeodesicPath walk = path_from_vertices(g, *icost, curve);

  UniformityCertificate cert;
  cert.curve = curve;
  cert.len_intrinsic = walk.len_intrinsic;
  cert.dist_intrinsic = pair_distance(g, *icost, curve.front(), curve.back());
  cert.quasigeodesic_ratio = cert.len_intrinsic / cert.dist_intrinsic;

  if (curve.size() == 2) {
    const double dmin = std::min(field.delta[curve[0]], field.delta[curve[1]]);
    cert.cone_ratio = is_unbounded(dmin) ? 0.0 : walk.len_intrinsic / (2.0 * dmin);
    cert.cone_witness =
        field.delta[curve[0]] <= field.delta[curve[1]] ? curve[0] : curve[1];
  } else {
    double before = 0;
    for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
      before += walk.seg_intrinsic[i - 1];
      const double lmin = std::min(before, walk.len_intrinsic - before);
      const double dlt = field.delta[curve[i]];
      const double ratio = is_unbounded(dlt) ? 0.0 : lmin / dlt;
      if (ratio > cert.cone_ratio) {
        cert.cone_ratio = ratio;
        cert.cone_witness = curve[i];
      }
    }
  }
  cert.c_hat = std::max(cert.quasigeodesic_ratio, cert.cone_ratio);
  return cert;
}

PipelineResult build_pipeline(const MetricGraph& g, const SigmaField& field,
                              std::uint32_t p, std::uint32_t q,
                              const PipelineParams& params) {
  if (p == q) throw std::invalid_argument("build_pipeline: endpoints coincide");
  if (p >= g.n() || q >= g.n())
    throw std::invalid_argument("build_pipeline: vertex out of range");
  if (!(params.t > 0) || !(params.tau > 0))
    throw std::invalid_argument("build_pipeline: params must be positive");
  if (!(params.tau < params.t))
    throw std::invalid_argument("build_pipeline: tau must stay below t");

  PipelineResult out;
  if (find_edge(g, p, q) != std::numeric_limits<std::uint32_t>::max()) {
    out.curve = {p, q};
    out.hub = p;
    out.degenerate = true;
    out.u = (2.0 / 3.0) * ambient_dist(g, p, q);
    return out;
  }

  const std::size_t n = g.n();
  const double u = (2.0 / 3.0) * ambient_dist(g, p, q);
  out.u = u;

  // hub: the deepest vertex of the lens around both endpoints
  std::uint32_t hub = std::numeric_limits<std::uint32_t>::max();
  double hub_delta = -1;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (field.delta[v] < 0.5 * params.t * u) continue;
    if (ambient_dist(g, v, p) > u || ambient_dist(g, v, q) > u) continue;
    if (field.delta[v] > hub_delta) {
      hub_delta = field.delta[v];
      hub = v;
    }
  }
  if (hub == std::numeric_limits<std::uint32_t>::max()) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "build_pipeline: hub region empty at scale u=%.6g "
                  "(no vertex with delta >= %.6g inside both balls)",
                  u, 0.5 * params.t * u);
    throw std::runtime_error(msg);
  }
  out.hub = hub;

  const std::vector<double> icost = intrinsic_costs(g);
  std::vector<std::uint8_t> allowed(n, 0);

  // One endpoint side: waypoints down the dyadic annuli, segments through
  // progressively shallower corridors; returns the hub -> endpoint chain.
  const auto build_side = [&](std::uint32_t endpoint,
                              std::vector<std::uint32_t>& waypoints) {
    double h_local = 0;
    for (std::uint32_t s = g.offsets[endpoint]; s < g.offsets[endpoint + 1]; ++s)
      h_local = std::max(h_local, g.edge_length(g.inc_edge[s]));

    std::vector<std::uint32_t> chain{hub};
    std::vector<std::vector<std::uint32_t>> segments;
    std::uint32_t prev = hub;
    int k = 1;
    for (; std::ldexp(u, -k) >= 4.0 * h_local; ++k) {
      const double rin = std::ldexp(u, -k), rout = 2.0 * rin;
      const double depth = rin * params.t;
      std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
      double best_delta = -1;
      for (std::uint32_t v = 0; v < n; ++v) {
        if (field.delta[v] < depth) continue;
        const double ad = ambient_dist(g, v, endpoint);
        if (ad < rin || ad >= rout) continue;
        if (field.delta[v] > best_delta) {
          best_delta = field.delta[v];
          best = v;
        }
      }
      if (best == std::numeric_limits<std::uint32_t>::max()) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "build_pipeline: empty annulus at k=%d (scale %.6g; "
                      "graph too coarse at that scale)",
                      k, rin);
        throw std::runtime_error(msg);
      }
      if (best == prev) continue;  // annulus re-selected the current point
      const double corridor = std::ldexp(u, -k) * params.tau;
      for (std::uint32_t v = 0; v < n; ++v)
        allowed[v] = field.delta[v] >= corridor ? 1 : 0;
      auto seg = masked_shortest_path(g, icost, allowed, prev, best);
      if (seg.empty()) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "build_pipeline: corridor depth %.6g at k=%d disconnects "
                      "the waypoints (lower tau)",
                      corridor, k);
        throw std::runtime_error(msg);
      }
      segments.push_back(std::move(seg));
      waypoints.push_back(best);
      prev = best;
    }
    // final unconstrained hop into the endpoint's grid neighborhood
    if (prev != endpoint) {
      std::fill(allowed.begin(), allowed.end(), 1);
      auto seg = masked_shortest_path(g, icost, allowed, prev, endpoint);
      segments.push_back(std::move(seg));
    }
    // realized growth certificate: segment k spans the 2^-k annulus
    for (std::size_t i = 0; i < segments.size(); ++i) {
      double len = 0;
      for (std::size_t j = 0; j + 1 < segments[i].size(); ++j)
        len += icost[find_edge(g, segments[i][j], segments[i][j + 1])];
      out.realized_pi =
          std::max(out.realized_pi, std::ldexp(len / u, static_cast<int>(i) + 1));
    }
    for (const auto& seg : segments)
      chain.insert(chain.end(), seg.begin() + 1, seg.end());
    return chain;
  };

  const auto chain_p = build_side(p, out.waypoints_p);
  const auto chain_q = build_side(q, out.waypoints_q);
  out.curve.assign(chain_p.rbegin(), chain_p.rend());  // p .. hub
  out.curve.insert(out.curve.end(), chain_q.begin() + 1, chain_q.end());
  return out;
}

UniformityEstimate estimate_uniformity_constant(const MetricGraph& g,
                                                const SigmaField& field,
                                                std::size_t n_samples,
                                                std::uint64_t seed) {
  if (n_samples < 1)
    throw std::invalid_argument("estimate_uniformity_constant: need n >= 1");
  if (field.trivial)
    throw std::invalid_argument("totally geodesic — uniformity trivial");
  const std::size_t n = g.n();
  if (n < 2)
    throw std::invalid_argument("estimate_uniformity_constant: graph too small");

  UniformityEstimate est;
  est.seed = seed;
  DetRng rng(seed);
  est.sampled_pairs.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    std::uint32_t x, y;
    do {
      x = static_cast<std::uint32_t>(rng.bounded(n));
      y = static_cast<std::uint32_t>(rng.bounded(n));
    } while (x == y);
    est.sampled_pairs.emplace_back(x, y);
  }

  const std::vector<double> icost = intrinsic_costs(g);
  const std::vector<double> scost =
      edge_costs(g, make_weight(g, WeightKind::sigma, &field));
  est.c_values.assign(n_samples, 0.0);
  parallel_for(n_samples, [&](std::size_t i, std::size_t) {
    const auto [x, y] = est.sampled_pairs[i];
    const GeodesicPath geo = shortest_path(g, scost, x, y);
    est.c_values[i] =
        verify_sigma_uniform(geo.vertices, field, g, &icost).c_hat;
  });

  std::vector<double> sorted = est.c_values;
  std::sort(sorted.begin(), sorted.end());
  est.a_hat = sorted.back();
  est.q50 = sorted[(sorted.size() - 1) / 2];
  est.q90 = sorted[((sorted.size() - 1) * 9) / 10];
  return est;
}

}  // namespace unfold
