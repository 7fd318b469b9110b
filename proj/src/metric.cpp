#include "unfold/metric.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <stdexcept>

#include "unfold/dijkstra.hpp"
#include "unfold/parallel.hpp"
#include "unfold/rng.hpp"
#include "unfold/sentinel.hpp"

namespace unfold {

const char* weight_name(WeightKind k) {
  switch (k) {
    case WeightKind::intrinsic: return "intrinsic";
    case WeightKind::quasi_hyperbolic: return "quasi_hyperbolic";
    case WeightKind::sigma: return "sigma";
    case WeightKind::sigma_smoothed: return "sigma_smoothed";
  }
  return "?";
}

WeightField make_weight(const MetricGraph& g, WeightKind kind,
                        const SigmaField* field) {
  WeightField wf;
  wf.kind = kind;
  wf.name = weight_name(kind);
  const std::size_t n = g.n();
  switch (kind) {
    case WeightKind::intrinsic:
      wf.w.assign(n, 1.0);
      break;
    case WeightKind::quasi_hyperbolic: {
      if (!g.has_sigma)
        throw std::invalid_argument(
            "make_weight: quasi-hyperbolic weight needs a singular set");
      wf.w.resize(n);
      for (std::size_t v = 0; v < n; ++v) {
        const double d = g.dist_sigma(v);
        if (!(d > 0) || is_unbounded(d))
          throw std::invalid_argument("make_weight: dist_sigma must be finite positive");
        wf.w[v] = 1.0 / d;
      }
      break;
    }
    case WeightKind::sigma: {
      if (field == nullptr)
        throw std::invalid_argument("make_weight: sigma weight needs a field");
      if (field->trivial)
        throw std::invalid_argument(
            "make_weight: field trivial (totally geodesic input)");
      wf.w = field->b;
      break;
    }
    case WeightKind::sigma_smoothed: {
      if (field == nullptr)
        throw std::invalid_argument("make_weight: smoothed weight needs a field");
      if (field->trivial)
        throw std::invalid_argument(
            "make_weight: field trivial (totally geodesic input)");
      wf.w = field->b;
      wf.name = "sigma_smoothed";
      break;
    }
  }
  return wf;
}

std::vector<double> edge_costs(const MetricGraph& g, const WeightField& wf) {
  if (wf.w.size() != g.n())
    throw std::invalid_argument("edge_costs: weight/graph size mismatch");
  std::vector<double> c(g.m());
  for (std::size_t e = 0; e < g.m(); ++e) {
    const double cost =
        g.edge_length(e) * (wf.w[g.eu[e]] + wf.w[g.ev[e]]) / 2.0;
    if (!(cost > 0))
      throw std::invalid_argument("edge_costs: nonpositive edge cost");
    c[e] = cost;
  }
  return c;
}

double GeodesicPath::l_min(std::size_t i) const {
  double before = 0, after = 0;
  for (std::size_t k = 0; k < i; ++k) before += seg_intrinsic[k];
  for (std::size_t k = i; k < seg_intrinsic.size(); ++k) after += seg_intrinsic[k];
  return std::min(before, after);
}

GeodesicPath path_from_vertices(const MetricGraph& g, const std::vector<double>& ecost,
                                const std::vector<std::uint32_t>& vertices) {
  if (vertices.size() < 2)
    throw std::invalid_argument("path_from_vertices: need at least two vertices");
  GeodesicPath path;
  path.vertices = vertices;
  path.seg_intrinsic.resize(vertices.size() - 1);
  path.seg_cost.resize(vertices.size() - 1);
  for (std::size_t k = 0; k + 1 < vertices.size(); ++k) {
    if (vertices[k] >= g.n() || vertices[k + 1] >= g.n())
      throw std::invalid_argument("path_from_vertices: vertex out of range");
    const std::uint32_t e = find_edge(g, vertices[k], vertices[k + 1]);
    if (e == std::numeric_limits<std::uint32_t>::max())
      throw std::invalid_argument("path_from_vertices: consecutive vertices not adjacent");
    path.seg_intrinsic[k] = g.edge_length(e);
    path.seg_cost[k] = ecost[e];
    path.len_intrinsic += path.seg_intrinsic[k];
    path.cost += path.seg_cost[k];
  }
  return path;
}

GeodesicPath shortest_path(const MetricGraph& g, const std::vector<double>& ecost,
                           std::uint32_t p, std::uint32_t q) {
  if (p == q) throw std::invalid_argument("shortest_path: endpoints coincide");
  if (p >= g.n() || q >= g.n())
    throw std::invalid_argument("shortest_path: vertex out of range");
  std::vector<double> dist_q;
  sssp(g, ecost.data(), {{q, 0.0}}, kUnbounded, dist_q);
  auto path = path_from_vertices(g, ecost, extract_path(g, ecost.data(), dist_q, p, q));
  // quote the solver's distance (single rounding chain), not the re-sum
  path.cost = dist_q[p];
  return path;
}

double pair_distance(const MetricGraph& g, const std::vector<double>& ecost,
                     std::uint32_t x, std::uint32_t y) {
  if (x == y) return 0.0;
  const std::uint32_t s = std::min(x, y), t = std::max(x, y);
  double out = kUnbounded;
  Sweeper sw(g.n());
  Source src{s, 0.0};
  sw.run(g, ecost.data(), &src, 1, kUnbounded, [&](std::uint32_t v, double d) {
    if (v == t) {
      out = d;
      return false;
    }
    return true;
  });
  if (is_unbounded(out)) throw std::runtime_error("pair_distance: unreachable pair");
  return out;
}

std::vector<std::vector<double>> distance_matrix(
    const MetricGraph& g, const std::vector<double>& ecost,
    const std::vector<std::uint32_t>& sources) {
  std::vector<std::vector<double>> rows(sources.size());
  parallel_for(sources.size(), [&](std::size_t i, unsigned) {
    sssp(g, ecost.data(), {{sources[i], 0.0}}, kUnbounded, rows[i]);
  });
  return rows;
}

namespace {

// Dijkstra over the allowed-vertex subgraph (the source itself is always
// expanded); unreachable vertices stay at the unbounded sentinel.
void masked_sssp(const MetricGraph& g, const double* ecost, std::uint32_t src,
                 const std::vector<std::uint8_t>& allowed, std::vector<double>& out) {
  out.assign(g.n(), kUnbounded);
  using Item = std::pair<double, std::uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  out[src] = 0.0;
  pq.emplace(0.0, src);
  while (!pq.empty()) {
    const auto [d, v] = pq.top();
    pq.pop();
    if (d > out[v]) continue;
    for (std::uint32_t s = g.offsets[v]; s < g.offsets[v + 1]; ++s) {
      const std::uint32_t w = g.nbr[s];
      if (!allowed[w]) continue;
      const double nd = d + ecost[g.inc_edge[s]];
      if (nd < out[w]) {
        out[w] = nd;
        pq.emplace(nd, w);
      }
    }
  }
}

}  // namespace

SuiteReport check_inequality_suite(const MetricGraph& g, const SigmaField& f,
                                   std::size_t n_pairs, std::uint64_t seed,
                                   double tolerance, double a_hat) {
  if (f.trivial)
    throw std::invalid_argument("check_inequality_suite: field trivial");
  if (g.has_sigma && !(f.l_hat > 0))
    throw std::invalid_argument(
        "check_inequality_suite: the rescaled lower bound needs l_hat > 0");
  if (!(a_hat > 0))
    throw std::invalid_argument("check_inequality_suite: a_hat required");

  SuiteReport rep;
  rep.n_pairs = 0;
  rep.tolerance = tolerance;
  rep.a_hat = a_hat;
  rep.l_hat = f.l_hat;
  rep.seed = seed;
  rep.normalization_note =
      "rescaled-distance lower bound uses the 1/l_hat normalization; the "
      "alternative reading multiplies by l_hat instead (they agree at "
      "l_hat = 1)";

  const bool with_sigma = g.has_sigma;
  rep.clauses.assign(4, ClauseStats{});
  rep.clauses[0].name = "rescaled_distance_lower";
  rep.clauses[1].name = "log_lower";
  rep.clauses[2].name = "log_delta_lipschitz";
  rep.clauses[3].name = "upper_bound";
  if (!with_sigma) {
    rep.clauses[0].skipped = true;
    rep.clauses[0].note = "skipped: empty singular set, k undefined";
  }

  WeightField wb = make_weight(g, WeightKind::sigma, &f);
  const auto cost_b = edge_costs(g, wb);
  const auto cost_d = intrinsic_costs(g);
  std::vector<double> cost_k;
  if (with_sigma) {
    WeightField wk = make_weight(g, WeightKind::quasi_hyperbolic);
    cost_k = edge_costs(g, wk);
  }

  // The defining sup of b(x) draws witnesses from the closed intrinsic ball
  // of radius alpha * delta(x); where that ball pokes past a truncation ring
  // the discrete value is clipped below the untruncated one, and the first
  // clause is exactly tight on cones, so clipped vertices can neither serve
  // as sample endpoints nor carry the geodesics (clipped costs are cheaper,
  // so unrestricted paths would detour through them). Both the sampling and
  // the distance sweeps stay on the reliable subgraph.
  std::vector<std::uint32_t> eligible;
  std::vector<std::uint8_t> allowed(g.n(), 1);
  {
    std::vector<Source> marked;
    for (std::uint32_t v = 0; v < g.n(); ++v)
      if (g.near_sigma_ring[v] || g.outer_truncation[v]) marked.push_back({v, 0.0});
    if (!marked.empty()) {
      std::vector<double> to_ring;
      sssp(g, cost_d.data(), marked, kUnbounded, to_ring);
      for (std::uint32_t v = 0; v < g.n(); ++v)
        if (to_ring[v] >= f.alpha * f.delta[v]) eligible.push_back(v);
    }
    if (eligible.size() < 2) {
      if (!marked.empty())
        rep.normalization_note += "; reliability band empty, sampling every vertex";
      eligible.resize(g.n());
      for (std::uint32_t v = 0; v < g.n(); ++v) eligible[v] = v;
    } else if (eligible.size() < g.n()) {
      allowed.assign(g.n(), 0);
      for (std::uint32_t v : eligible) allowed[v] = 1;
      rep.normalization_note +=
          "; sampling and sweeps restricted to the reliable subgraph (witness "
          "ball inside the graph)";
    }
  }

  rep.n_eligible = eligible.size();

  // sample sources and fan-out targets; distances via parallel sweeps
  DetRng rng(seed);
  const std::size_t fan = 5;
  const std::size_t n_src = (n_pairs + fan - 1) / fan;
  struct PairRow {
    std::uint32_t x, y;
    double d, db, k;
  };
  std::vector<std::uint32_t> srcs(n_src);
  std::vector<std::vector<std::uint32_t>> tgts(n_src);
  std::size_t remaining = n_pairs;
  for (std::size_t i = 0; i < n_src; ++i) {
    srcs[i] = eligible[rng.bounded(static_cast<std::uint32_t>(eligible.size()))];
    const std::size_t want = std::min(fan, remaining);
    while (tgts[i].size() < want) {
      auto t = eligible[rng.bounded(static_cast<std::uint32_t>(eligible.size()))];
      if (t != srcs[i]) tgts[i].push_back(t);
    }
    remaining -= want;
  }
  std::vector<std::vector<PairRow>> rows(n_src);
  parallel_for(n_src, [&](std::size_t i, unsigned) {
    std::vector<double> dd, db, dk;
    masked_sssp(g, cost_d.data(), srcs[i], allowed, dd);
    masked_sssp(g, cost_b.data(), srcs[i], allowed, db);
    if (with_sigma) masked_sssp(g, cost_k.data(), srcs[i], allowed, dk);
    for (auto t : tgts[i]) {
      if (is_unbounded(dd[t])) continue;  // the mask disconnected this pair
      PairRow pr{srcs[i], t, dd[t], db[t], with_sigma ? dk[t] : 0.0};
      rows[i].push_back(pr);
    }
  });

  auto clause_update = [&](ClauseStats& cs, double lhs, double rhs) {
    ++cs.checked;
    const double margin = rhs - lhs;
    cs.min_margin = std::min(cs.min_margin, margin);
    cs.mean_margin += margin;
    // float guard: sums round independently, so demand failure beyond ulps
    if (lhs > rhs + 1e-12 * std::max(std::abs(lhs), std::abs(rhs))) ++cs.violations;
  };

  const double eps = tolerance;
  for (std::size_t i = 0; i < n_src; ++i) {
    for (const auto& pr : rows[i]) {
      ++rep.n_pairs;
      const double bx = f.b[pr.x], by = f.b[pr.y];
      const double bmax = std::max(bx, by);
      if (with_sigma) {
        // (1) d_b >= (1/l_hat) k  and  k >= (1/2) log((1+d/sx)(1+d/sy))
        clause_update(rep.clauses[0], pr.k / f.l_hat, pr.db);
        const double sx = g.dist_sigma(pr.x), sy = g.dist_sigma(pr.y);
        const double lower =
            0.5 * (std::log1p(pr.d / sx) + std::log1p(pr.d / sy));
        clause_update(rep.clauses[0], lower, pr.k);
      }
      // (2) log(1 + d max b) <= d_b (1+eps)
      clause_update(rep.clauses[1], std::log1p(pr.d * bmax), pr.db * (1 + eps));
      // (3) |log dx - log dy| <= d_b (1+eps)
      clause_update(rep.clauses[2], std::abs(std::log(f.delta[pr.x] / f.delta[pr.y])),
                    pr.db * (1 + eps));
      // (4) d_b <= 4 a_hat^2 log(1 + d max b) (1+eps)
      clause_update(rep.clauses[3], pr.db,
                    4.0 * a_hat * a_hat * std::log1p(pr.d * bmax) * (1 + eps));
    }
  }
  for (auto& cs : rep.clauses) {
    if (cs.checked > 0) cs.mean_margin /= static_cast<double>(cs.checked);
    if (is_unbounded(cs.min_margin)) cs.min_margin = 0;
  }
  return rep;
}

MetricSanity check_metric_axioms(const MetricGraph& g,
                                 const std::vector<double>& ecost,
                                 std::size_t n_triples, std::uint64_t seed) {
  MetricSanity ms;
  DetRng rng(seed);
  // symmetry: canonical orientation makes d(x,y) and d(y,x) the same sweep
  ms.symmetry_exact = true;
  for (int i = 0; i < 32; ++i) {
    auto x = static_cast<std::uint32_t>(rng.bounded(g.n()));
    auto y = static_cast<std::uint32_t>(rng.bounded(g.n()));
    if (pair_distance(g, ecost, x, y) != pair_distance(g, ecost, y, x))
      ms.symmetry_exact = false;
  }
  // triangle inequality: exact in real arithmetic for shortest-path metrics;
  // float sums round independently, so defects beyond a few ulps count
  struct Triple {
    std::uint32_t x, y, z;
  };
  std::vector<Triple> triples(n_triples);
  for (auto& t : triples) {
    t.x = static_cast<std::uint32_t>(rng.bounded(g.n()));
    t.y = static_cast<std::uint32_t>(rng.bounded(g.n()));
    t.z = static_cast<std::uint32_t>(rng.bounded(g.n()));
  }
  // gather distinct sources to reuse sweeps
  std::vector<std::uint32_t> srcs;
  for (const auto& t : triples) {
    srcs.push_back(t.x);
    srcs.push_back(t.y);
  }
  std::sort(srcs.begin(), srcs.end());
  srcs.erase(std::unique(srcs.begin(), srcs.end()), srcs.end());
  auto rows = distance_matrix(g, ecost, srcs);
  auto row_of = [&](std::uint32_t v) {
    return static_cast<std::size_t>(
        std::lower_bound(srcs.begin(), srcs.end(), v) - srcs.begin());
  };
  for (const auto& t : triples) {
    const double dxy = rows[row_of(t.x)][t.y];
    const double dyz = rows[row_of(t.y)][t.z];
    const double dxz = rows[row_of(t.x)][t.z];
    ++ms.triangle_checked;
    const double defect = dxy + dyz - dxz;
    ms.worst_triangle_defect = std::min(ms.worst_triangle_defect, defect);
    if (defect < -8e-15 * std::max(dxz, dxy + dyz)) ++ms.triangle_violations;
  }
  return ms;
}

std::vector<BallVolumeRow> ball_volume_report(
    const MetricGraph& g, const std::vector<double>& ecost,
    const std::vector<std::uint32_t>& centers, double rho) {
  std::vector<BallVolumeRow> out(centers.size());
  constexpr double kPi = 3.1415926535897932384626433832795;
  parallel_for(centers.size(), [&](std::size_t i, unsigned) {
    Sweeper sw(g.n());
    double vol = 0;
    Source src{centers[i], 0.0};
    sw.run(g, ecost.data(), &src, 1, rho, [&](std::uint32_t v, double) {
      vol += g.measure(v);
      return true;
    });
    out[i] = {centers[i], vol, vol / (kPi * rho * rho)};
  });
  return out;
}

void dump_geodesics_csv(const MetricGraph& g, const std::vector<GeodesicPath>& paths,
                        const std::string& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("dump_geodesics_csv: cannot write " + file);
  out << "path_id,seq,vertex";
  for (int k = 0; k < g.ambient_dim; ++k) out << ",x" << k;
  out << ",cum_intrinsic,cum_cost\n";
  for (std::size_t p = 0; p < paths.size(); ++p) {
    double ci = 0, cc = 0;
    for (std::size_t s = 0; s < paths[p].vertices.size(); ++s) {
      if (s > 0) {
        ci += paths[p].seg_intrinsic[s - 1];
        cc += paths[p].seg_cost[s - 1];
      }
      out << p << ',' << s << ',' << paths[p].vertices[s];
      for (int k = 0; k < g.ambient_dim; ++k)
        out << ',' << format_double(g.pos(paths[p].vertices[s], k));
      out << ',' << format_double(ci) << ',' << format_double(cc) << '\n';
    }
  }
}

}  // namespace unfold
