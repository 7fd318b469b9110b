#include "unfold/whitney.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "unfold/dijkstra.hpp"
#include "unfold/parallel.hpp"
#include "unfold/sentinel.hpp"

namespace unfold {

double bump_phi(double s) {
  if (s <= 1.0) return 1.0;
  if (s >= 2.0) return 0.0;
  const double u = s - 1.0;
  const double u3 = u * u * u;
  return 1.0 - u3 * (6.0 * u * u - 15.0 * u + 10.0);
}

SigmaCover build_cover(const MetricGraph& g, const SigmaField& field, double xi) {
  if (field.trivial)
    throw std::invalid_argument("build_cover: field is trivial (totally geodesic)");
  if (!(xi > 0)) throw std::invalid_argument("build_cover: xi must be positive");
  if (field.l_hat > 0 && xi > 1.0 / (1000.0 * field.l_hat))
    throw std::invalid_argument("build_cover: xi exceeds 1/(1000 L)");
  const std::size_t n = g.n();
  if (field.b.size() != n)
    throw std::invalid_argument("build_cover: field/graph size mismatch");
  for (std::size_t v = 0; v < n; ++v)
    if (is_unbounded(field.delta[v]))
      throw std::invalid_argument("build_cover: delta unbounded at a vertex");

  SigmaCover cover;
  cover.xi = xi;

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) {
                     return field.delta[a] > field.delta[b];
                   });

  const std::vector<double> icost = intrinsic_costs(g);
  Sweeper sweep(n);
  std::vector<std::uint8_t> covered(n, 0);
  for (const std::uint32_t v : order) {
    if (covered[v]) continue;
    const double th = xi * field.delta[v];
    cover.centers.push_back(v);
    cover.theta.push_back(th);
    const Source src{v, 0.0};
    sweep.run(g, icost.data(), &src, 1, th, [&](std::uint32_t w, double) {
      covered[w] = 1;
      return true;
    });
  }

  // exact covering counts and 10-Theta membership (with distances), one
  // truncated sweep per center
  const std::size_t nc = cover.centers.size();
  cover.aleph1.assign(n, 0);
  cover.aleph10.assign(n, 0);
  cover.members10.assign(n, {});
  std::vector<int> center_of(n, -1);
  for (std::size_t i = 0; i < nc; ++i) center_of[cover.centers[i]] = static_cast<int>(i);
  cover.separation_ok = true;
  for (std::size_t i = 0; i < nc; ++i) {
    const double th = cover.theta[i];
    const Source src{cover.centers[i], 0.0};
    sweep.run(g, icost.data(), &src, 1, 10.0 * th, [&](std::uint32_t w, double d) {
      if (d <= th) {
        ++cover.aleph1[w];
        if (center_of[w] >= 0 && static_cast<std::size_t>(center_of[w]) != i)
          cover.separation_ok = false;
      }
      ++cover.aleph10[w];
      cover.members10[w].emplace_back(static_cast<std::uint32_t>(i), d);
      return true;
    });
  }
  cover.cover_ok = true;
  for (std::size_t v = 0; v < n; ++v) {
    cover.cover_ok = cover.cover_ok && cover.aleph1[v] >= 1;
    cover.c_hat = std::max<int>(cover.c_hat, static_cast<int>(cover.aleph1[v]));
  }

  // family assignment: greedy coloring of the 10-Theta ball intersection
  // graph in selection order; two centers sharing any vertex must differ
  std::vector<std::vector<std::uint32_t>> adjacency(nc);
  for (std::size_t v = 0; v < n; ++v) {
    const auto& lst = cover.members10[v];
    for (std::size_t a = 0; a < lst.size(); ++a)
      for (std::size_t b = a + 1; b < lst.size(); ++b) {
        adjacency[lst[a].first].push_back(lst[b].first);
        adjacency[lst[b].first].push_back(lst[a].first);
      }
  }
  cover.family.assign(nc, -1);
  std::vector<std::uint8_t> used;
  for (std::size_t i = 0; i < nc; ++i) {
    auto& adj = adjacency[i];
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    used.assign(adj.size() + 1, 0);
    for (const std::uint32_t nb : adj) {
      const int f = cover.family[nb];
      if (f >= 0 && static_cast<std::size_t>(f) < used.size()) used[f] = 1;
    }
    int f = 0;
    while (used[f]) ++f;
    cover.family[i] = f;
    cover.n_families = std::max(cover.n_families, f + 1);
  }
  cover.family_ok = true;
  for (std::size_t v = 0; v < n && cover.family_ok; ++v) {
    const auto& lst = cover.members10[v];
    for (std::size_t a = 0; a < lst.size() && cover.family_ok; ++a)
      for (std::size_t b = a + 1; b < lst.size(); ++b)
        if (cover.family[lst[a].first] == cover.family[lst[b].first]) {
          cover.family_ok = false;
          break;
        }
  }
  return cover;
}

SmoothedField smooth_sigma(const SigmaField& field, const SigmaCover& cover,
                           const MetricGraph& g) {
  const std::size_t n = g.n();
  SmoothedField sm;
  if (field.trivial) {
    sm.trivial = true;
    sm.delta_star.assign(n, kUnbounded);
    sm.b_star.assign(n, 0.0);
    return sm;
  }
  if (cover.members10.size() != n)
    throw std::invalid_argument("smooth_sigma: cover does not match the graph");
  sm.delta_star.assign(n, 0.0);
  sm.b_star.assign(n, 0.0);
  parallel_for(n, [&](std::size_t v, std::size_t) {
    double num = 0, den = 0;
    for (const auto& [ci, d] : cover.members10[v]) {
      const double w = bump_phi(d / (2.0 * cover.theta[ci]));
      if (w <= 0) continue;
      num += field.delta[cover.centers[ci]] * w;
      den += w;
    }
    if (den <= 0)
      throw std::runtime_error("smooth_sigma: vertex outside every bump support "
                               "(cover invariant broken)");
    sm.delta_star[v] = num / den;
    sm.b_star[v] = 1.0 / sm.delta_star[v];
  });
  return sm;
}

SmoothingCheck verify_smoothing(const SigmaField& field, const SmoothedField& sm,
                                const MetricGraph& g) {
  const std::size_t n = g.n();
  if (sm.delta_star.size() != n || field.delta.size() != n)
    throw std::invalid_argument("verify_smoothing: size mismatch");
  SmoothingCheck chk;
  chk.c1 = kUnbounded;
  chk.c2 = 0;
  for (std::size_t v = 0; v < n; ++v) {
    const double ratio = sm.delta_star[v] / field.delta[v];
    if (ratio < chk.c1) {
      chk.c1 = ratio;
      chk.argmin = static_cast<std::uint32_t>(v);
    }
    if (ratio > chk.c2) {
      chk.c2 = ratio;
      chk.argmax = static_cast<std::uint32_t>(v);
    }
  }
  for (std::size_t e = 0; e < g.m(); ++e) {
    const double diff =
        std::abs(sm.delta_star[g.eu[e]] - sm.delta_star[g.ev[e]]);
    chk.c3 = std::max(chk.c3, diff / g.edge_length(e));
  }
  chk.pass = chk.c1 > 0 && !is_unbounded(chk.c2) && !is_unbounded(chk.c3);
  return chk;
}

void dump_cover_csv(const SigmaCover& cover, const std::string& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("dump_cover_csv: cannot write " + file);
  out << "center,theta,family\n";
  for (std::size_t i = 0; i < cover.centers.size(); ++i)
    out << cover.centers[i] << ',' << format_double(cover.theta[i]) << ','
        << cover.family[i] << '\n';
}

void dump_smoothed_csv(const SmoothedField& sm, const std::string& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("dump_smoothed_csv: cannot write " + file);
  out << "vertex,b,delta\n";
  for (std::size_t v = 0; v < sm.delta_star.size(); ++v)
    out << v << ',' << format_double(sm.b_star[v]) << ','
        << format_double(sm.delta_star[v]) << '\n';
}

}  // namespace unfold
