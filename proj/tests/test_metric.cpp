#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "support/fixtures.hpp"
#include "unfold/graph.hpp"
#include "unfold/metric.hpp"
#include "unfold/model.hpp"
#include "unfold/sentinel.hpp"
#include "unfold/sigma.hpp"
#include "unfold/uniformity.hpp"

using namespace unfold;

namespace {

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

struct ConeWindow {
  MetricGraph g;
  SigmaField f;
};

const ConeWindow& cone_window() {
  static ConeWindow cw = [] {
    auto m = make_model("cone_sphere_products[p=3,q=3]");
    ConeWindow out;
    out.g = build_graph(m, 0.05, {{0.4, 2.5}});
    out.f = compute_sigma_field(out.g);
    return out;
  }();
  return cw;
}

// vertex on the theta = const ray (column 0) whose radius is closest to r
std::uint32_t ray_vertex(const MetricGraph& g, std::size_t res, double r) {
  std::uint32_t best = 0;
  double err = kUnbounded;
  for (std::size_t i = 0; i * res < g.n(); ++i) {
    const double rr = g.chart[(i * res) * 2];
    if (std::abs(rr - r) < err) {
      err = std::abs(rr - r);
      best = static_cast<std::uint32_t>(i * res);
    }
  }
  return best;
}

std::size_t angular_count(const MetricGraph& g) {
  const double r0 = g.chart[0];
  std::size_t res = 0;
  for (std::size_t v = 0; v < g.n(); ++v)
    if (g.chart[v * 2] == r0) ++res;
  return res;
}

}  // namespace

TEST_CASE("conformal weights: definitions, trapezoid costs, monotone scaling") {
  const auto& [g, f] = cone_window();

  auto wi = make_weight(g, WeightKind::intrinsic);
  for (double w : wi.w) CHECK(w == 1.0);
  auto ci = edge_costs(g, wi);
  for (std::size_t e = 0; e < g.m(); ++e) CHECK(ci[e] == g.edge_length(e));

  auto wq = make_weight(g, WeightKind::quasi_hyperbolic);
  for (std::size_t v = 0; v < g.n(); ++v) CHECK(wq.w[v] == 1.0 / g.dist_sigma(v));

  auto wb = make_weight(g, WeightKind::sigma, &f);
  CHECK(wb.w == f.b);
  auto cb = edge_costs(g, wb);
  for (std::size_t e : {std::size_t(0), g.m() / 2, g.m() - 1})
    CHECK(cb[e] == g.edge_length(e) * (f.b[g.eu[e]] + f.b[g.ev[e]]) / 2.0);

  // doubling the weights doubles every cost bit-for-bit
  SigmaField doubled = f;
  for (auto& b : doubled.b) b *= 2.0;
  auto cb2 = edge_costs(g, make_weight(g, WeightKind::sigma, &doubled));
  for (std::size_t e = 0; e < g.m(); ++e) CHECK(cb2[e] == 2.0 * cb[e]);

  auto plane = support::path_graph(8);
  CHECK_THROWS_AS(make_weight(plane, WeightKind::quasi_hyperbolic), std::invalid_argument);
  CHECK_THROWS_AS(make_weight(g, WeightKind::sigma, nullptr), std::invalid_argument);
  auto trivial = compute_sigma_field(plane);
  CHECK_THROWS_AS(make_weight(plane, WeightKind::sigma, &trivial), std::invalid_argument);
  CHECK_THROWS_AS(make_weight(g, WeightKind::sigma_smoothed, nullptr), std::invalid_argument);

  WeightField wrong;
  wrong.w.assign(3, 1.0);
  CHECK_THROWS_AS(edge_costs(g, wrong), std::invalid_argument);
}

TEST_CASE("same-ray distances follow the logarithmic closed forms") {
  const auto& [g, f] = cone_window();
  const std::size_t res = angular_count(g);
  const auto v1 = ray_vertex(g, res, 0.7);
  const auto v2 = ray_vertex(g, res, 2.0);
  const double r1 = g.chart[v1 * 2], r2 = g.chart[v2 * 2];
  const double a0 = std::sqrt(6.0);

  auto cost_b = edge_costs(g, make_weight(g, WeightKind::sigma, &f));
  const double db = pair_distance(g, cost_b, v1, v2);
  CHECK(rel_err(db, (a0 + 1.0) * std::log(r2 / r1)) < 0.05);

  auto cost_k = edge_costs(g, make_weight(g, WeightKind::quasi_hyperbolic));
  const double k = pair_distance(g, cost_k, v1, v2);
  CHECK(rel_err(k, std::log(r2 / r1)) < 0.05);

  // adjacent vertices: the single edge is the geodesic and carries its
  // trapezoid cost exactly
  const auto e = find_edge(g, v1, static_cast<std::uint32_t>(v1 + res));
  REQUIRE(e != UINT32_MAX);
  const double direct = pair_distance(g, cost_b, v1, static_cast<std::uint32_t>(v1 + res));
  CHECK(rel_err(direct, cost_b[e]) < 1e-12);

  CHECK_THROWS_AS(shortest_path(g, cost_b, v1, v1), std::invalid_argument);
  CHECK_THROWS_AS(shortest_path(g, cost_b, v1, static_cast<std::uint32_t>(g.n())),
                  std::invalid_argument);
}

TEST_CASE("shortest paths break cost ties lexicographically") {
  auto g = support::flat_grid(3, 3, 1.0);
  auto ci = edge_costs(g, make_weight(g, WeightKind::intrinsic));

  // (0,0) -> (1,2): straight-then-diagonal and diagonal-then-straight tie at
  // cost 1 + sqrt(2); the smaller vertex sequence wins
  auto p = shortest_path(g, ci, 0, 5);
  REQUIRE(p.vertices.size() == 3);
  CHECK(p.vertices == std::vector<std::uint32_t>{0, 1, 5});
  CHECK(rel_err(p.cost, 1.0 + std::sqrt(2.0)) < 1e-12);
  CHECK(p.cost == p.len_intrinsic);  // unit weights
  CHECK(p.seg_intrinsic.size() == 2);
  CHECK(rel_err(p.l_min(1), 1.0) < 1e-15);

  auto w = path_from_vertices(g, ci, {0, 4, 5});
  CHECK(rel_err(w.cost, std::sqrt(2.0) + 1.0) < 1e-12);
  CHECK_THROWS_AS(path_from_vertices(g, ci, {0, 5}), std::invalid_argument);
  CHECK_THROWS_AS(path_from_vertices(g, ci, {0}), std::invalid_argument);
}

TEST_CASE("pair distances are exactly symmetric and satisfy the triangle law") {
  const auto& [g, f] = cone_window();
  auto cost_b = edge_costs(g, make_weight(g, WeightKind::sigma, &f));

  auto ms = check_metric_axioms(g, cost_b, 1000, 99);
  CHECK(ms.symmetry_exact);
  CHECK(ms.triangle_checked == 1000);
  CHECK(ms.triangle_violations == 0);

  const std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs = {
      {0, 500}, {17, 2000}, {42, 1234}};
  for (auto [x, y] : pairs)
    CHECK(pair_distance(g, cost_b, x, y) == pair_distance(g, cost_b, y, x));
}

TEST_CASE("distance matrix rows equal independent single-source scans") {
  const auto& [g, f] = cone_window();
  auto ci = edge_costs(g, make_weight(g, WeightKind::intrinsic));

  const std::vector<std::uint32_t> sources = {0, 100, 1000};
  auto rows = distance_matrix(g, ci, sources);
  REQUIRE(rows.size() == 3);

  // independent oracle scan
  for (std::size_t s = 0; s < sources.size(); ++s) {
    std::vector<double> dist(g.n(), kUnbounded);
    using Item = std::pair<double, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[sources[s]] = 0;
    pq.emplace(0.0, sources[s]);
    while (!pq.empty()) {
      auto [d, v] = pq.top();
      pq.pop();
      if (d > dist[v]) continue;
      for (std::uint32_t t = g.offsets[v]; t < g.offsets[v + 1]; ++t) {
        const double nd = d + ci[g.inc_edge[t]];
        if (nd < dist[g.nbr[t]]) {
          dist[g.nbr[t]] = nd;
          pq.emplace(nd, g.nbr[t]);
        }
      }
    }
    for (std::size_t v = 0; v < g.n(); ++v) CHECK(rel_err(rows[s][v], dist[v]) < 1e-12);
  }

  // intrinsic distance from the inner ring grows exactly radially on a ray
  const std::size_t res = angular_count(g);
  auto ring0 = static_cast<std::uint32_t>(0);
  auto deep = static_cast<std::uint32_t>((g.n() / res - 1) * res);
  auto row = distance_matrix(g, ci, {ring0});
  CHECK(rel_err(row[0][deep], g.chart[deep * 2] - g.chart[0]) < 1e-9);

  // deterministic across repeated parallel runs
  auto rows2 = distance_matrix(g, ci, sources);
  CHECK(rows2 == rows);
}

TEST_CASE("inequality suite holds on a healthy window with honest inputs") {
  const auto& [g, f] = cone_window();

  auto ue = estimate_uniformity_constant(g, f, 60, 7);
  REQUIRE(ue.a_hat >= 1.0);

  auto rep = check_inequality_suite(g, f, 300, 7, 0.09, ue.a_hat);
  CHECK(rep.n_pairs >= 290);  // masked sweeps may drop a few disconnected pairs
  CHECK(rep.n_eligible > g.n() / 2);
  CHECK(rep.n_eligible < g.n());
  CHECK(rep.a_hat == ue.a_hat);
  CHECK(rep.seed == 7);
  REQUIRE(rep.clauses.size() == 4);
  CHECK(rep.clauses[0].name == "rescaled_distance_lower");
  CHECK(rep.clauses[1].name == "log_lower");
  CHECK(rep.clauses[2].name == "log_delta_lipschitz");
  CHECK(rep.clauses[3].name == "upper_bound");
  for (const auto& cs : rep.clauses) {
    CHECK_FALSE(cs.skipped);
    CHECK(cs.checked > 0);
    CHECK(cs.violations == 0);
    CHECK(cs.min_margin >= -1e-12);
  }

  // rejected inputs
  auto plane = support::path_graph(8);
  auto trivial = compute_sigma_field(plane);
  CHECK_THROWS_AS(check_inequality_suite(plane, trivial, 10, 1, 0.1, 2.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(check_inequality_suite(g, f, 10, 1, 0.1, 0.0), std::invalid_argument);
}

TEST_CASE("weighted ball volumes track the flat disc on a flat grid") {
  auto m = make_model("hyperplane");
  auto g = build_graph(m, 0.05, {{0, 2}, {0, 2}});
  auto ci = edge_costs(g, make_weight(g, WeightKind::intrinsic));

  std::vector<std::uint32_t> band;
  for (std::size_t v = 0; v < g.n(); ++v) {
    const double x = g.chart[v * 2], y = g.chart[v * 2 + 1];
    if (x >= 0.5 && x <= 1.5 && y >= 0.5 && y <= 1.5)
      band.push_back(static_cast<std::uint32_t>(v));
  }
  std::vector<std::uint32_t> centers;
  for (std::size_t k = 0; k < band.size() && centers.size() < 12; k += band.size() / 12)
    centers.push_back(band[k]);
  REQUIRE(centers.size() >= 5);

  auto rows = ball_volume_report(g, ci, centers, 0.4);
  REQUIRE(rows.size() == centers.size());
  for (const auto& row : rows) {
    CHECK(row.ratio > 0.75);  // stencil stretch shrinks balls slightly
    CHECK(row.ratio < 1.05);
    CHECK(row.volume > 0);
  }
}
