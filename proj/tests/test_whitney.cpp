#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "support/fixtures.hpp"
#include "support/proc.hpp"
#include "unfold/graph.hpp"
#include "unfold/metric.hpp"
#include "unfold/sentinel.hpp"
#include "unfold/sigma.hpp"
#include "unfold/whitney.hpp"

using namespace unfold;

namespace {

const support::WedgeFixture& wedge() {
  static support::WedgeFixture w = support::graded_wedge(1.0, 1.02, std::sqrt(6.0));
  return w;
}

SigmaField as_field(const MetricGraph& g, const SmoothedField& sm, double alpha) {
  SigmaField f;
  f.alpha = alpha;
  f.b = sm.b_star;
  f.delta = sm.delta_star;
  f.refined = true;
  f.trivial = false;
  f.l_hat = rescaled_slope(g, f);
  f.graph_id = g.id;
  return f;
}

}  // namespace

TEST_CASE("the quintic bump is a monotone shelf between one and two") {
  CHECK(bump_phi(0.0) == 1.0);
  CHECK(bump_phi(1.0) == 1.0);
  CHECK(bump_phi(1.5) == 0.5);  // odd symmetry of the quintic about 3/2
  CHECK(bump_phi(2.0) == 0.0);
  CHECK(bump_phi(7.0) == 0.0);
  double prev = 1.0;
  for (double s = 1.05; s < 2.0; s += 0.05) {
    const double v = bump_phi(s);
    CHECK(v < prev);
    CHECK(v > 0.0);
    prev = v;
  }
  // flat to third order at both shelf edges
  CHECK(1.0 - bump_phi(1.001) < 1.1e-8);
  CHECK(bump_phi(1.999) < 1.1e-8);
}

TEST_CASE("greedy cover on a graded wedge: all invariants by independent scan") {
  const auto& w = wedge();
  auto cover = build_cover(w.graph, w.field, w.xi);

  CHECK(cover.cover_ok);
  CHECK(cover.separation_ok);
  CHECK(cover.family_ok);
  CHECK(cover.xi == w.xi);
  REQUIRE(cover.centers.size() > 100);
  CHECK(cover.centers.size() < 2000);
  REQUIRE(cover.theta.size() == cover.centers.size());
  REQUIRE(cover.family.size() == cover.centers.size());

  // radii are the advertised multiples, in descending field order
  for (std::size_t i = 0; i < cover.centers.size(); ++i) {
    CHECK(cover.theta[i] == w.xi * w.field.delta[cover.centers[i]]);
    if (i + 1 < cover.centers.size())
      CHECK(w.field.delta[cover.centers[i]] >= w.field.delta[cover.centers[i + 1]]);
  }

  // full independent rescan of covering and separation from scratch
  const auto icost = edge_costs(w.graph, make_weight(w.graph, WeightKind::intrinsic));
  auto rows = distance_matrix(w.graph, icost, cover.centers);
  for (std::size_t v = 0; v < w.graph.n(); ++v) {
    std::uint32_t strict = 0, loose = 0;
    for (std::size_t i = 0; i < cover.centers.size(); ++i) {
      if (rows[i][v] <= cover.theta[i] * (1.0 - 1e-12)) ++strict;
      if (rows[i][v] <= cover.theta[i] * (1.0 + 1e-12)) ++loose;
    }
    CHECK(strict <= cover.aleph1[v]);
    CHECK(cover.aleph1[v] <= loose);
    CHECK(loose >= 1);  // covering
    CHECK(cover.aleph10[v] >= cover.aleph1[v]);
  }
  for (std::size_t i = 0; i < cover.centers.size(); ++i)
    for (std::size_t j = i + 1; j < cover.centers.size(); ++j)
      CHECK(rows[i][cover.centers[j]] > cover.theta[i] * (1.0 - 1e-12));

  // the empirical multiplicity stays in single digits
  CHECK(cover.c_hat >= 1);
  CHECK(cover.c_hat <= 4);

  // same-family centers never share a 10-Theta ball member (independent scan)
  for (std::size_t v = 0; v < w.graph.n(); ++v) {
    const auto& lst = cover.members10[v];
    for (std::size_t a = 0; a < lst.size(); ++a)
      for (std::size_t b = a + 1; b < lst.size(); ++b)
        CHECK(cover.family[lst[a].first] != cover.family[lst[b].first]);
  }

  // deterministic rebuild
  auto cover2 = build_cover(w.graph, w.field, w.xi);
  CHECK(cover2.centers == cover.centers);
  CHECK(cover2.theta == cover.theta);
  CHECK(cover2.family == cover.family);
}

TEST_CASE("consecutive cover radii grow geometrically on the graded gauge") {
  const auto& w = wedge();
  auto cover = build_cover(w.graph, w.field, w.xi);
  const double a0 = std::sqrt(6.0);
  const double lo = 1.0 + w.xi / (2.0 * (a0 + 1.0));
  const double hi = 1.0 + 4.0 * w.xi / (a0 + 1.0);
  for (std::size_t i = 0; i + 1 < cover.centers.size(); ++i) {
    const double ratio =
        w.radius[cover.centers[i]] / w.radius[cover.centers[i + 1]];
    CHECK(ratio >= lo);
    CHECK(ratio <= hi);
  }
}

TEST_CASE("partition smoothing stays within a vanishing band of the field") {
  const auto& w = wedge();
  auto cover = build_cover(w.graph, w.field, w.xi);
  auto sm = smooth_sigma(w.field, cover, w.graph);
  REQUIRE_FALSE(sm.trivial);
  for (std::size_t v = 0; v < w.graph.n(); ++v) {
    CHECK(sm.delta_star[v] > 0);
    CHECK(sm.b_star[v] == 1.0 / sm.delta_star[v]);
  }

  auto chk = verify_smoothing(w.field, sm, w.graph);
  CHECK(chk.pass);
  CHECK(chk.c1 <= 1.0);
  CHECK(chk.c2 >= 1.0);
  // averaged centers sit within 4 Theta, so the ratio drift is a few xi
  CHECK(chk.c1 > 1.0 - 5.0 * w.xi);
  CHECK(chk.c2 < 1.0 + 5.0 * w.xi);
  // the smoothed gauge keeps the slope of the underlying one
  CHECK(chk.c3 > 0.5 * w.field.l_hat);
  CHECK(chk.c3 < 1.5 * w.field.l_hat);

  // the smoothed field is itself smoothable with the same guarantees
  auto f2 = as_field(w.graph, sm, w.field.alpha);
  CHECK(f2.l_hat < 1.5 * w.field.l_hat);
  auto cover2 = build_cover(w.graph, f2, w.xi);
  CHECK(cover2.cover_ok);
  CHECK(cover2.separation_ok);
  CHECK(cover2.family_ok);
  auto sm2 = smooth_sigma(f2, cover2, w.graph);
  auto chk2 = verify_smoothing(f2, sm2, w.graph);
  CHECK(chk2.pass);
  CHECK(chk2.c1 > 1.0 - 5.0 * w.xi);
  CHECK(chk2.c2 < 1.0 + 5.0 * w.xi);

  // smoothed values feed the dedicated conformal weight
  auto wf = make_weight(w.graph, WeightKind::sigma_smoothed, &f2);
  CHECK(wf.w == f2.b);
  auto costs = edge_costs(w.graph, wf);
  for (double c : costs) CHECK(c > 0);
}

TEST_CASE("a constant gauge is a fixed point of the smoothing") {
  auto g = support::flat_grid(40, 8, 0.1);
  // delta = 1/2 is a power of two, so the weighted average reproduces it
  // exactly in floating point
  auto f = support::constant_field(g, 2.0);
  REQUIRE(f.l_hat == 0.0);

  auto cover = build_cover(g, f, 0.3);
  CHECK(cover.cover_ok);
  CHECK(cover.separation_ok);
  CHECK(cover.family_ok);
  CHECK(cover.c_hat <= 9);

  auto sm = smooth_sigma(f, cover, g);
  auto chk = verify_smoothing(f, sm, g);
  CHECK(chk.c1 == 1.0);
  CHECK(chk.c2 == 1.0);
  CHECK(chk.c3 == 0.0);
  CHECK(chk.pass);
}

TEST_CASE("cover construction rejects unusable scales and fields") {
  const auto& w = wedge();
  // the Lipschitz gate: xi beyond 1/(1000 L)
  CHECK(w.field.l_hat > 0);
  CHECK_THROWS_AS(build_cover(w.graph, w.field, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(build_cover(w.graph, w.field, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_cover(w.graph, w.field, -1e-3), std::invalid_argument);

  auto flat = support::flat_grid(4, 4, 1.0);
  auto trivial = compute_sigma_field(flat);
  CHECK_THROWS_AS(build_cover(flat, trivial, 1e-4), std::invalid_argument);

  auto holed = w.field;
  holed.delta[5] = kUnbounded;
  CHECK_THROWS_AS(build_cover(w.graph, holed, w.xi), std::invalid_argument);

  // a cover built for another graph cannot smooth this field
  auto cf = support::constant_field(flat, 2.0);
  auto small_cover = build_cover(flat, cf, 0.3);
  CHECK_THROWS_AS(smooth_sigma(w.field, small_cover, w.graph), std::invalid_argument);
}

TEST_CASE("totally geodesic fields pass through the smoother untouched") {
  auto g = support::flat_grid(4, 4, 1.0);
  auto trivial = compute_sigma_field(g);
  REQUIRE(trivial.trivial);
  auto sm = smooth_sigma(trivial, SigmaCover{}, g);
  CHECK(sm.trivial);
  REQUIRE(sm.b_star.size() == g.n());
  for (std::size_t v = 0; v < g.n(); ++v) {
    CHECK(sm.b_star[v] == 0.0);
    CHECK(is_unbounded(sm.delta_star[v]));
  }
}

TEST_CASE("cover and smoothed-field exports are byte-stable") {
  const auto& w = wedge();
  auto cover = build_cover(w.graph, w.field, w.xi);
  auto sm = smooth_sigma(w.field, cover, w.graph);

  support::TempDir tmp("whitney-csv");
  dump_cover_csv(cover, tmp.sub("c1.csv"));
  dump_cover_csv(cover, tmp.sub("c2.csv"));
  const auto c1 = support::slurp(tmp.sub("c1.csv"));
  CHECK(c1 == support::slurp(tmp.sub("c2.csv")));
  CHECK(c1.rfind("center,theta,family\n", 0) == 0);
  CHECK(std::count(c1.begin(), c1.end(), '\n') ==
        static_cast<long>(cover.centers.size()) + 1);

  dump_smoothed_csv(sm, tmp.sub("s1.csv"));
  dump_smoothed_csv(sm, tmp.sub("s2.csv"));
  const auto s1 = support::slurp(tmp.sub("s1.csv"));
  CHECK(s1 == support::slurp(tmp.sub("s2.csv")));
  CHECK(s1.rfind("vertex,b,delta\n", 0) == 0);

  CHECK_THROWS_AS(dump_cover_csv(cover, tmp.sub("no/dir/x.csv")), std::runtime_error);
}
