#pragma once

#include <cstdint>
#include <queue>
#include <vector>

#include "unfold/graph.hpp"
#include "unfold/sentinel.hpp"

namespace unfold {

struct Source {
  std::uint32_t v;
  double init = 0.0;
};

// Reusable Dijkstra scratch with version stamps: resetting costs O(touched),
// which keeps tens of thousands of truncated sweeps on one graph cheap.
// Costs are per unique edge (same array layout as MetricGraph::elen_base);
// callers choose base or physical units by what they pass.
class Sweeper {
 public:
  explicit Sweeper(std::size_t n)
      : dist_(n, 0.0), stamp_(n, 0), settled_(n, 0), cur_(0) {}

  // on_settle(v, d) runs once per settled vertex in nondecreasing d order;
  // return false to stop early. Vertices whose tentative distance exceeds
  // cutoff are never relaxed.
  template <class OnSettle>
  void run(const MetricGraph& g, const double* ecost, const Source* src,
           std::size_t nsrc, double cutoff, OnSettle&& on_settle) {
    ++cur_;
    heap_ = {};
    for (std::size_t i = 0; i < nsrc; ++i) {
      const auto [v, init] = src[i];
      if (init > cutoff) continue;
      if (stamp_[v] != cur_ || init < dist_[v]) {
        dist_[v] = init;
        stamp_[v] = cur_;
        heap_.emplace(init, v);
      }
    }
    while (!heap_.empty()) {
      auto [d, v] = heap_.top();
      heap_.pop();
      if (settled_[v] == cur_ || d > dist_[v]) continue;
      settled_[v] = cur_;
      if (!on_settle(v, d)) return;
      for (std::uint32_t s = g.offsets[v]; s < g.offsets[v + 1]; ++s) {
        const std::uint32_t w = g.nbr[s];
        if (settled_[w] == cur_) continue;
        const double nd = d + ecost[g.inc_edge[s]];
        if (nd > cutoff) continue;
        if (stamp_[w] != cur_ || nd < dist_[w]) {
          dist_[w] = nd;
          stamp_[w] = cur_;
          heap_.emplace(nd, w);
        }
      }
    }
  }

  // Distance of v in the current run; unbounded if untouched.
  double dist(std::uint32_t v) const {
    return stamp_[v] == cur_ ? dist_[v] : kUnbounded;
  }
  bool touched(std::uint32_t v) const { return stamp_[v] == cur_; }
  bool settled(std::uint32_t v) const { return settled_[v] == cur_; }

 private:
  using Item = std::pair<double, std::uint32_t>;
  std::vector<double> dist_;
  std::vector<std::uint32_t> stamp_;
  std::vector<std::uint32_t> settled_;
  std::uint32_t cur_;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap_;
};

// Full distances from sources into out (unbounded where unreached).
void sssp(const MetricGraph& g, const double* ecost,
          const std::vector<Source>& sources, double cutoff,
          std::vector<double>& out);

// Physical intrinsic edge costs (base length * scale).
std::vector<double> intrinsic_costs(const MetricGraph& g);

// Lexicographically smallest shortest p->q vertex sequence, given exact
// distances-to-q. At each step the smallest-index neighbor whose distance is
// tight (cost + dist == dist, exact float equality as produced by the same
// relaxations) is taken.
std::vector<std::uint32_t> extract_path(const MetricGraph& g, const double* ecost,
                                        const std::vector<double>& dist_to_q,
                                        std::uint32_t p, std::uint32_t q);

}  // namespace unfold
