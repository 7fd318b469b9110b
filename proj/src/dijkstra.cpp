#include "unfold/dijkstra.hpp"

#include <stdexcept>

namespace unfold {

void sssp(const MetricGraph& g, const double* ecost,
          const std::vector<Source>& sources, double cutoff,
          std::vector<double>& out) {
  out.assign(g.n(), kUnbounded);
  Sweeper sw(g.n());
  sw.run(g, ecost, sources.data(), sources.size(), cutoff,
         [&](std::uint32_t v, double d) {
           out[v] = d;
           return true;
         });
}

std::vector<double> intrinsic_costs(const MetricGraph& g) {
  std::vector<double> c(g.m());
  for (std::size_t e = 0; e < g.m(); ++e) c[e] = g.elen_base[e] * g.scale;
  return c;
}

std::vector<std::uint32_t> extract_path(const MetricGraph& g, const double* ecost,
                                        const std::vector<double>& dist_to_q,
                                        std::uint32_t p, std::uint32_t q) {
  if (is_unbounded(dist_to_q[p]))
    throw std::runtime_error("extract_path: target unreachable from source");
  std::vector<std::uint32_t> path{p};
  std::uint32_t x = p;
  // Walk down the exact distance field: neighbors are scanned in ascending
  // index order, so the first tight edge gives the lexicographically
  // smallest shortest path. Distances strictly decrease, so this terminates.
  std::size_t guard = 0;
  while (x != q) {
    if (++guard > g.n() + 1)
      throw std::runtime_error("extract_path: no tight edge found (corrupt distances)");
    std::uint32_t next = UINT32_MAX;
    for (std::uint32_t s = g.offsets[x]; s < g.offsets[x + 1]; ++s) {
      const std::uint32_t w = g.nbr[s];
      if (ecost[g.inc_edge[s]] + dist_to_q[w] == dist_to_q[x]) {
        next = w;
        break;  // neighbors ascend, first hit is smallest
      }
    }
    if (next == UINT32_MAX)
      throw std::runtime_error("extract_path: no tight edge found (corrupt distances)");
    path.push_back(next);
    x = next;
  }
  return path;
}

}  // namespace unfold
