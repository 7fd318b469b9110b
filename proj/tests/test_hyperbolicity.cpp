#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "support/fixtures.hpp"
#include "support/mpfr_delta.hpp"
#include "unfold/graph.hpp"
#include "unfold/hyperbolicity.hpp"
#include "unfold/metric.hpp"
#include "unfold/model.hpp"
#include "unfold/sigma.hpp"

using namespace unfold;

namespace {

std::vector<double> intrinsic(const MetricGraph& g) {
  return edge_costs(g, make_weight(g, WeightKind::intrinsic));
}

}  // namespace

TEST_CASE("tree metrics have exactly zero hyperbolicity defect") {
  auto path = support::path_graph(60);
  auto pc = intrinsic(path);
  CHECK(four_point_delta(path, pc, 200, 3) == 0.0);
  CHECK(estimate_thinness(path, pc, 60, 3) == 0.0);

  auto star = support::star_tree(4, 15);
  auto sc = intrinsic(star);
  CHECK(four_point_delta(star, sc, 300, 3) == 0.0);
  CHECK(estimate_thinness(star, sc, 80, 3) == 0.0);
}

TEST_CASE("flat grids are not hyperbolic: the defect grows with the side") {
  auto g12 = support::flat_grid(12, 12, 1.0);
  auto g24 = support::flat_grid(24, 24, 1.0);
  auto c12 = intrinsic(g12);
  auto c24 = intrinsic(g24);

  const double d12 = four_point_delta(g12, c12, 300, 5);
  const double d24 = four_point_delta(g24, c24, 300, 5);
  CHECK(d12 > 1.0);
  CHECK(d24 > 1.5 * d12);

  const double t12 = estimate_thinness(g12, c12, 100, 5);
  const double t24 = estimate_thinness(g24, c24, 100, 5);
  CHECK(t12 > 2.0);
  CHECK(t24 > 1.5 * t12);
}

TEST_CASE("a thin tube is hyperbolic at the scale of its circumference") {
  auto tube = support::tube_graph(1.0, 12.0, 48);
  auto tc = intrinsic(tube);

  // quasi-isometric to a segment with error ~ half the circumference
  const double thin = estimate_thinness(tube, tc, 100, 5);
  CHECK(thin < 3.141592653589793 + 0.5);
  CHECK(thin > 0.5);
  const double fourpt = four_point_delta(tube, tc, 300, 5);
  CHECK(fourpt < 2.5);
  CHECK(fourpt > 0.25);

  // a flat square of comparable vertex count is measurably worse
  auto g24 = support::flat_grid(24, 24, 1.0);
  CHECK(four_point_delta(g24, intrinsic(g24), 300, 5) > 2.0 * fourpt);
}

TEST_CASE("sample streams nest: more tuples can only raise the maximum") {
  auto g = support::flat_grid(12, 12, 1.0);
  auto c = intrinsic(g);
  const double d100 = four_point_delta(g, c, 100, 9);
  const double d400 = four_point_delta(g, c, 400, 9);
  CHECK(d400 >= d100);
  const double t30 = estimate_thinness(g, c, 30, 9);
  const double t90 = estimate_thinness(g, c, 90, 9);
  CHECK(t90 >= t30);

  // identical reruns
  CHECK(four_point_delta(g, c, 100, 9) == d100);
  CHECK(estimate_thinness(g, c, 30, 9) == t30);

  CHECK_THROWS_AS(four_point_delta(g, c, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(estimate_thinness(g, c, 0, 1), std::invalid_argument);
  auto tiny = support::path_graph(3);
  CHECK_THROWS_AS(four_point_delta(tiny, intrinsic(tiny), 5, 1), std::invalid_argument);
}

TEST_CASE("explicit constant matches a 256-bit reference on both branches") {
  // the implementation leaves double range near a = 1.2; straddle it
  for (double a : {1.0, 1.15, 1.26, 1.5, 2.0, 3.0}) {
    const double got = delta_formula(a);
    const double want = support::mpfr_delta_reference(a);
    CHECK(std::abs(got - want) <= 1e-12 * want);
  }
  CHECK(delta_formula(1.0) == doctest::Approx(1217.09377024506).epsilon(1e-12));

  double prev = 0;
  for (double a : {1.0, 1.1, 1.5, 2.0, 4.0}) {
    const double v = delta_formula(a);
    CHECK(v > prev);
    CHECK(std::isfinite(v));
    prev = v;
  }
  CHECK_THROWS_AS(delta_formula(0.999), std::invalid_argument);
  CHECK_THROWS_AS(delta_formula(0.0), std::invalid_argument);
  CHECK_THROWS_AS(delta_formula(-2.0), std::invalid_argument);
}

TEST_CASE("ray unions leave small gaps: rough starlikeness radii") {
  auto m = make_model("cone_sphere_products[p=3,q=3]");
  auto g = build_graph(m, 0.05, {{0.4, 2.5}});
  auto f = compute_sigma_field(g);
  auto ci = intrinsic(g);

  // intrinsic rays from an inner-ring base fan out to every marked vertex;
  // the farthest stray is a few grid steps off the fan
  const double beta_i = check_rough_starlike(g, ci, 0, 200, 2);
  CHECK(beta_i > 0.0);
  CHECK(beta_i < 10.0 * g.h());

  auto cb = edge_costs(g, make_weight(g, WeightKind::sigma, &f));
  const double beta_b = check_rough_starlike(g, cb, 0, 200, 2);
  CHECK(beta_b > 0.0);
  CHECK(beta_b < 5.0);
  CHECK(check_rough_starlike(g, cb, 0, 200, 2) == beta_b);

  // sparse target sampling still certifies a finite radius
  const double beta_few = check_rough_starlike(g, cb, 0, 10, 2);
  CHECK(beta_few > 0.0);
  CHECK(beta_few < 8.0);

  // a tube is starlike from a mid vertex about its end rings
  auto tube = support::tube_graph(1.0, 12.0, 48);
  const auto base = static_cast<std::uint32_t>((tube.n() / 2 / 48) * 48);
  const double beta_t = check_rough_starlike(tube, intrinsic(tube), base, 100, 2);
  CHECK(beta_t > 0.5);
  CHECK(beta_t < 3.5);

  CHECK_THROWS_AS(
      check_rough_starlike(g, ci, static_cast<std::uint32_t>(g.n()), 5, 1),
      std::invalid_argument);
  // no marked rings anywhere: there are no ray surrogates to aim at
  auto path = support::path_graph(30);
  CHECK_THROWS_AS(check_rough_starlike(path, intrinsic(path), 0, 5, 1),
                  std::invalid_argument);
}
