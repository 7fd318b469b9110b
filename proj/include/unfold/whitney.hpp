#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "unfold/graph.hpp"
#include "unfold/sigma.hpp"

namespace unfold {

// Scale-adapted ball cover: centers carry radii Theta = xi * delta, chosen
// greedily by descending delta so that no center lies in an earlier ball.
// Families split the centers so that same-family 10-Theta balls stay
// pairwise disjoint.
struct SigmaCover {
  double xi = 0;
  std::vector<std::uint32_t> centers;  // selection order (descending delta)
  std::vector<double> theta;           // per center
  std::vector<int> family;             // per center
  int n_families = 0;

  // per graph vertex: how many centers' rho*Theta balls contain it, and the
  // membership lists at rho = 10 with the distance to that center
  std::vector<std::uint32_t> aleph1, aleph10;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> members10;

  int c_hat = 0;  // max aleph1: the empirical covering multiplicity
  bool cover_ok = false;       // every vertex inside some Theta ball
  bool separation_ok = false;  // no center inside another center's Theta ball
  bool family_ok = false;      // same-family 10-Theta balls disjoint
};

// Greedy cover at scale xi; requires 0 < xi <= 1/(1000 * L) for the field's
// Lipschitz estimate L (any positive xi when L = 0). All invariants are
// verified by full scan before returning.
SigmaCover build_cover(const MetricGraph& g, const SigmaField& field, double xi);

struct SmoothedField {
  std::vector<double> delta_star;
  std::vector<double> b_star;
  bool trivial = false;  // totally geodesic passthrough (b* = 0)
};

// Quintic partition-average of delta over the cover: each center spreads its
// delta through the bump phi(dist / (2 Theta)) — full weight inside 2 Theta,
// vanishing beyond 4 Theta — and every vertex takes the weighted average of
// the centers reaching it (the covering ball guarantees total weight >= 1).
SmoothedField smooth_sigma(const SigmaField& field, const SigmaCover& cover,
                           const MetricGraph& g);

// The bump: 1 on [0,1], 1 - 6u^5 + 15u^4 - 10u^3 with u = s-1 on (1,2), 0 after.
double bump_phi(double s);

struct SmoothingCheck {
  double c1 = 0;  // min delta*/delta
  double c2 = 0;  // max delta*/delta
  double c3 = 0;  // max first difference |delta*(u)-delta*(v)| / len
  std::uint32_t argmin = 0, argmax = 0;
  bool pass = false;  // c1 > 0 and c2, c3 finite
};

SmoothingCheck verify_smoothing(const SigmaField& field, const SmoothedField& sm,
                                const MetricGraph& g);

// cover.csv: center,theta,family rows in selection order.
void dump_cover_csv(const SigmaCover& cover, const std::string& file);
// smoothed.csv: vertex,b,delta rows (same shape as the field dump).
void dump_smoothed_csv(const SmoothedField& sm, const std::string& file);

}  // namespace unfold
