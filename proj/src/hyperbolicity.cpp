#include "unfold/hyperbolicity.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "unfold/dijkstra.hpp"
#include "unfold/parallel.hpp"
#include "unfold/rng.hpp"
#include "unfold/sentinel.hpp"

namespace unfold {

namespace {

// n distinct vertex tuples of width w, one deterministic stream: prefixes of
// a longer run coincide with shorter runs (nested-sample monotonicity).
std::vector<std::uint32_t> sample_tuples(std::size_t n_vertices, std::size_t n,
                                         int w, std::uint64_t seed) {
  DetRng rng(seed);
  std::vector<std::uint32_t> out;
  out.reserve(n * w);
  std::vector<std::uint32_t> tup(w);
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < w; ++k) {
      bool fresh = false;
      while (!fresh) {
        tup[k] = static_cast<std::uint32_t>(rng.bounded(n_vertices));
        fresh = true;
        for (int j = 0; j < k; ++j) fresh = fresh && tup[j] != tup[k];
      }
    }
    out.insert(out.end(), tup.begin(), tup.end());
  }
  return out;
}

}  // namespace

double estimate_thinness(const MetricGraph& g, const std::vector<double>& ecost,
                         std::size_t n_triangles, std::uint64_t seed) {
  if (n_triangles < 1) throw std::invalid_argument("estimate_thinness: need n >= 1");
  const std::size_t n = g.n();
  if (n < 3) throw std::invalid_argument("estimate_thinness: graph too small");
  const auto triples = sample_tuples(n, n_triangles, 3, seed);

  std::vector<double> defect(n_triangles, 0.0);
  struct Scratch {
    std::unique_ptr<Sweeper> sw;
    std::vector<double> d[3];
    std::vector<Source> sources;
    std::vector<std::uint32_t> side[3];
  };
  std::vector<Scratch> scratch(worker_count());

  parallel_for(n_triangles, [&](std::size_t i, std::size_t wid) {
    Scratch& s = scratch[wid];
    if (!s.sw) s.sw = std::make_unique<Sweeper>(n);
    const std::uint32_t* t = &triples[i * 3];
    for (int k = 0; k < 3; ++k)
      sssp(g, ecost.data(), {{t[k], 0.0}}, kUnbounded, s.d[k]);
    // side[k] joins t[k] and t[(k+1)%3], walked toward the latter
    for (int k = 0; k < 3; ++k)
      s.side[k] = extract_path(g, ecost.data(), s.d[(k + 1) % 3], t[k], t[(k + 1) % 3]);
    double worst = 0;
    for (int k = 0; k < 3; ++k) {
      s.sources.clear();
      for (const std::uint32_t v : s.side[(k + 1) % 3]) s.sources.push_back({v, 0.0});
      for (const std::uint32_t v : s.side[(k + 2) % 3]) s.sources.push_back({v, 0.0});
      s.sw->run(g, ecost.data(), s.sources.data(), s.sources.size(), kUnbounded,
                [](std::uint32_t, double) { return true; });
      for (const std::uint32_t v : s.side[k])
        worst = std::max(worst, s.sw->dist(v));
    }
    defect[i] = worst;
  });
  double best = 0;
  for (const double d : defect) best = std::max(best, d);
  return best;
}

double four_point_delta(const MetricGraph& g, const std::vector<double>& ecost,
                        std::size_t n_quadruples, std::uint64_t seed) {
  if (n_quadruples < 1) throw std::invalid_argument("four_point_delta: need n >= 1");
  const std::size_t n = g.n();
  if (n < 4) throw std::invalid_argument("four_point_delta: graph too small");
  const auto quads = sample_tuples(n, n_quadruples, 4, seed);

  std::vector<double> defect(n_quadruples, 0.0);
  struct Scratch {
    std::vector<double> d[3];
  };
  std::vector<Scratch> scratch(worker_count());
  parallel_for(n_quadruples, [&](std::size_t i, std::size_t wid) {
    Scratch& s = scratch[wid];
    const std::uint32_t* t = &quads[i * 4];
    for (int k = 0; k < 3; ++k)
      sssp(g, ecost.data(), {{t[k], 0.0}}, kUnbounded, s.d[k]);
    double sums[3] = {
        s.d[0][t[1]] + s.d[2][t[3]],  // (xy) + (zw)
        s.d[0][t[2]] + s.d[1][t[3]],  // (xz) + (yw)
        s.d[0][t[3]] + s.d[1][t[2]],  // (xw) + (yz)
    };
    std::sort(sums, sums + 3);
    defect[i] = 0.5 * (sums[2] - sums[1]);
  });
  double best = 0;
  for (const double d : defect) best = std::max(best, d);
  return best;
}

double delta_formula(double a) {
  if (!(a >= 1.0)) throw std::invalid_argument("delta_formula: requires a >= 1");
  const double a2 = a * a;
  const double a4 = a2 * a2;
  const double logb = std::log(64.0) + 4.0 * std::log(a) + 32.0 * a4;
  // L1 = log(1 + 4b); beyond double range the +1 is far below resolution
  const double L1 = logb < 700.0 ? std::log1p(4.0 * std::exp(logb))
                                 : std::log(4.0) + logb;
  const double E = 4.0 * a2 * L1;  // log(1 + b*)
  if (E < 345.0) {
    const double bstar = std::expm1(E);
    const double c = 1.0 + bstar * (4.0 * a2 + 1.0) + 8.0 * a2;
    return 4.0 * a2 * std::log1p(c * (2.0 * c + 3.0));
  }
  // log c = E + log(4a^2+1) and log(c(2c+3)) = log 2 + 2 log c, with
  // corrections below exp(-345), invisible at double precision
  const double logc = E + std::log(4.0 * a2 + 1.0);
  return 4.0 * a2 * (std::log(2.0) + 2.0 * logc);
}

double check_rough_starlike(const MetricGraph& g, const std::vector<double>& ecost,
                            std::uint32_t base, std::size_t n_targets,
                            std::uint64_t seed) {
  const std::size_t n = g.n();
  if (base >= n) throw std::invalid_argument("check_rough_starlike: base out of range");
  std::vector<std::uint32_t> family[2];
  for (std::uint32_t v = 0; v < n; ++v) {
    if (v == base) continue;
    if (g.near_sigma_ring[v]) family[0].push_back(v);
    if (g.outer_truncation[v]) family[1].push_back(v);
  }
  DetRng rng(seed);
  std::vector<std::uint32_t> targets;
  for (auto& fam : family) {
    if (fam.size() <= n_targets) {
      targets.insert(targets.end(), fam.begin(), fam.end());
    } else {
      for (const std::size_t i : rng.sample_distinct(fam.size(), n_targets))
        targets.push_back(fam[i]);
    }
  }
  if (targets.empty())
    throw std::invalid_argument("check_rough_starlike: no ray surrogates "
                                "(graph has no marked rings)");

  std::vector<double> dist_base;
  sssp(g, ecost.data(), {{base, 0.0}}, kUnbounded, dist_base);
  std::vector<std::uint8_t> on_ray(n, 0);
  on_ray[base] = 1;
  for (const std::uint32_t t : targets) {
    // walk target -> base along tight edges; same union either direction
    for (const std::uint32_t v : extract_path(g, ecost.data(), dist_base, t, base))
      on_ray[v] = 1;
  }
  std::vector<Source> sources;
  for (std::uint32_t v = 0; v < n; ++v)
    if (on_ray[v]) sources.push_back({v, 0.0});
  std::vector<double> dist_rays;
  sssp(g, ecost.data(), sources, kUnbounded, dist_rays);
  double beta = 0;
  for (std::uint32_t v = 0; v < n; ++v) beta = std::max(beta, dist_rays[v]);
  return beta;
}

}  // namespace unfold
