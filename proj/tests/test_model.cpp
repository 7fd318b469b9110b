#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "support/fd_shape.hpp"
#include "unfold/model.hpp"
#include "unfold/sentinel.hpp"

using namespace unfold;

namespace {

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace

TEST_CASE("shape norm matches a finite-difference oracle on every family") {
  SUBCASE("hyperplane is flat") {
    auto m = make_model("hyperplane");
    const double c[2] = {0.3, -0.4};
    CHECK(m.shape_norm(c) == 0.0);
    CHECK(std::abs(support::fd_shape_norm(support::plane_map(), vec({0.3, -0.4}))) < 1e-9);
  }

  SUBCASE("round sphere") {
    auto m = make_model("sphere[r=2]");
    CHECK(m.radius == 2.0);
    const double c[2] = {1.1, 2.0};
    const double want = std::sqrt(2.0) / 2.0;  // sqrt(2)/R
    CHECK(rel_err(m.shape_norm(c), want) < 1e-14);
    const double fd = support::fd_shape_norm(support::sphere_map(2.0), vec({1.1, 2.0}));
    CHECK(rel_err(fd, m.shape_norm(c)) < 1e-6);
  }

  SUBCASE("catenoid, waist and off-waist") {
    auto m = make_model("catenoid[c=1]");
    const double waist[2] = {0.0, 0.3};
    CHECK(rel_err(m.shape_norm(waist), std::sqrt(2.0)) < 1e-14);
    const double fd0 = support::fd_shape_norm(support::catenoid_map(1.0), vec({0.0, 0.3}));
    CHECK(rel_err(fd0, std::sqrt(2.0)) < 1e-6);

    const double off[2] = {0.8, 1.7};
    const double want = std::sqrt(2.0) / (std::cosh(0.8) * std::cosh(0.8));
    CHECK(rel_err(m.shape_norm(off), want) < 1e-14);
    const double fd1 = support::fd_shape_norm(support::catenoid_map(1.0), vec({0.8, 1.7}));
    CHECK(rel_err(fd1, m.shape_norm(off)) < 1e-6);

    auto m2 = make_model("catenoid[c=1.5]");
    const double neck2[2] = {0.0, 0.0};
    CHECK(rel_err(m2.shape_norm(neck2), std::sqrt(2.0) / 1.5) < 1e-14);
    const double fd2 = support::fd_shape_norm(support::catenoid_map(1.5), vec({0.0, 0.0}));
    CHECK(rel_err(fd2, m2.shape_norm(neck2)) < 1e-6);
  }

  SUBCASE("cone over a product of 3-spheres, full-dimensional oracle") {
    auto m = make_model("cone_sphere_products[p=3,q=3]");
    const double c[2] = {1.0, 0.4};
    CHECK(rel_err(m.shape_norm(c), std::sqrt(6.0)) < 1e-14);
    // the oracle differentiates the genuine 7-dimensional hypersurface in R^8
    const double fd =
        support::fd_shape_norm(support::sphere_product_cone_map(), vec({1.0, 0.9, 0.8, 0.7, 1.1, 0.6, 1.3}));
    CHECK(rel_err(fd, std::sqrt(6.0)) < 1e-5);

    const double far[2] = {2.5, 0.4};
    const double fd_far =
        support::fd_shape_norm(support::sphere_product_cone_map(), vec({2.5, 0.9, 0.8, 0.7, 1.1, 0.6, 1.3}));
    CHECK(rel_err(fd_far, m.shape_norm(far)) < 1e-5);
  }

  SUBCASE("cone over a product of circles") {
    auto m = make_model("clifford_cone");
    const double c[3] = {1.0, 0.9, 2.1};
    CHECK(rel_err(m.shape_norm(c), std::sqrt(2.0)) < 1e-14);
    const double fd = support::fd_shape_norm(support::torus_cone_map(), vec({1.0, 0.9, 2.1}));
    CHECK(rel_err(fd, std::sqrt(2.0)) < 1e-6);

    const double near_tip[3] = {0.6, 0.9, 2.1};
    const double fd2 = support::fd_shape_norm(support::torus_cone_map(), vec({0.6, 0.9, 2.1}));
    CHECK(rel_err(fd2, m.shape_norm(near_tip)) < 1e-6);
  }
}

TEST_CASE("cone shape norm is the coefficient over the radius across the chart") {
  for (const char* desc : {"cone_sphere_products[p=3,q=3]", "clifford_cone"}) {
    auto m = make_model(desc);
    const double a0 = cone_shape_coefficient(m);
    std::vector<double> radii = {0.1, 0.33, 1.0, 2.7, 10.0};
    for (double r : radii) {
      std::vector<double> c(static_cast<size_t>(m.chart_dim()), 0.77);
      c[0] = r;
      CHECK(std::abs(m.shape_norm(c.data()) * r - a0) < 1e-6 * a0);
    }
  }
  auto simons41 = make_model("cone_sphere_products[p=4,q=1]");
  const double c[2] = {2.0, 0.1};
  CHECK(rel_err(simons41.shape_norm(c) * 2.0, std::sqrt(5.0)) < 1e-14);
}

TEST_CASE("conformal scaling laws: metric, curvature, distances, round trip") {
  auto m = make_model("cone_sphere_products[p=3,q=3]");
  const double c[2] = {1.0, 0.9};

  auto doubled = scale_model(m, 2.0);
  CHECK(rel_err(doubled.shape_norm(c), std::sqrt(6.0) / 2.0) < 1e-14);
  CHECK(rel_err(doubled.dist_sigma(c), 2.0) < 1e-14);

  double g1[2], g2[2];
  m.metric_diag(c, g1);
  doubled.metric_diag(c, g2);
  CHECK(rel_err(g2[0], 4.0 * g1[0]) < 1e-14);
  CHECK(rel_err(g2[1], 4.0 * g1[1]) < 1e-14);

  std::vector<double> x1(static_cast<size_t>(m.ambient_dim));
  std::vector<double> x2(static_cast<size_t>(m.ambient_dim));
  m.position(c, x1.data());
  doubled.position(c, x2.data());
  for (int i = 0; i < m.ambient_dim; ++i) CHECK(rel_err(x2[static_cast<size_t>(i)], 2.0 * x1[static_cast<size_t>(i)]) < 1e-14);

  auto round = scale_model(scale_model(m, 7.5), 1.0 / 7.5);
  CHECK(rel_err(round.shape_norm(c), m.shape_norm(c)) < 1e-12);
  CHECK(rel_err(round.dist_sigma(c), m.dist_sigma(c)) < 1e-12);

  auto plane = scale_model(make_model("hyperplane"), 3.0);
  const double pc[2] = {0.1, 0.2};
  CHECK(plane.shape_norm(pc) == 0.0);
  CHECK(plane.totally_geodesic);

  CHECK_THROWS_AS(scale_model(m, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(scale_model(m, -2.0), std::invalid_argument);
}

TEST_CASE("distance to the singular set: radius on cones, unbounded elsewhere") {
  auto simons = make_model("simons");
  auto clifford = make_model("clifford");
  const double c2[2] = {0.37, 1.0};
  const double c3[3] = {0.37, 1.0, 2.0};
  CHECK(rel_err(simons.dist_sigma(c2), 0.37) < 1e-15);
  CHECK(rel_err(clifford.dist_sigma(c3), 0.37) < 1e-15);

  for (const char* desc : {"hyperplane", "sphere[r=2]", "catenoid[c=1]"}) {
    auto m = make_model(desc);
    const double c[2] = {0.8, 0.8};
    CHECK(is_unbounded(m.dist_sigma(c)));
    CHECK_FALSE(m.has_sigma);
  }
  CHECK(simons.has_sigma);
  CHECK(clifford.has_sigma);
}

TEST_CASE("chart metric agrees with the embedding's first fundamental form") {
  auto m = make_model("catenoid[c=1.5]");
  const double c[2] = {0.6, 1.1};
  double g[2];
  m.metric_diag(c, g);
  const double ch = std::cosh(0.6 / 1.5);
  CHECK(rel_err(g[0], ch * ch) < 1e-14);
  CHECK(rel_err(g[1], 1.5 * 1.5 * ch * ch) < 1e-14);

  // independent finite-difference check of the same coefficients
  auto f = support::catenoid_map(1.5);
  const double h = 1e-5;
  auto at = [&](double t, double th) { return f(vec({t, th})); };
  Eigen::VectorXd dt = (at(0.6 + h, 1.1) - at(0.6 - h, 1.1)) / (2 * h);
  Eigen::VectorXd dth = (at(0.6, 1.1 + h) - at(0.6, 1.1 - h)) / (2 * h);
  CHECK(rel_err(dt.squaredNorm(), g[0]) < 1e-8);
  CHECK(rel_err(dth.squaredNorm(), g[1]) < 1e-8);
  CHECK(std::abs(dt.dot(dth)) < 1e-10);  // orthogonal chart

  auto cone = make_model("cone_sphere_products[p=3,q=3]");
  const double cc[2] = {2.0, 0.3};
  double gc[2];
  cone.metric_diag(cc, gc);
  CHECK(rel_err(gc[0], 1.0) < 1e-15);
  const double link_r = cone_link_radius(cone);
  CHECK(rel_err(link_r, 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(rel_err(gc[1], 4.0 * link_r * link_r) < 1e-14);

  auto sph = make_model("sphere[r=2]");
  const double sc[2] = {1.1, 2.0};
  double gs[2];
  sph.metric_diag(sc, gs);
  CHECK(rel_err(gs[0], 4.0) < 1e-15);
  CHECK(rel_err(gs[1], 4.0 * std::sin(1.1) * std::sin(1.1)) < 1e-14);
}

TEST_CASE("ambient positions lie on the model surface") {
  auto cat = make_model("catenoid[c=2]");
  const double c[2] = {1.3, 0.7};
  double x[3];
  cat.position(c, x);
  const double rho = 2.0 * std::cosh(1.3 / 2.0);
  CHECK(rel_err(std::hypot(x[0], x[1]), rho) < 1e-14);
  CHECK(rel_err(x[2], 1.3) < 1e-15);

  // cones: ambient norm equals the cone radius (times the scale)
  for (const char* desc : {"simons", "clifford"}) {
    auto m = scale_model(make_model(desc), 1.75);
    std::vector<double> cc(static_cast<size_t>(m.chart_dim()), 0.52);
    cc[0] = 3.1;
    std::vector<double> xx(static_cast<size_t>(m.ambient_dim));
    m.position(cc.data(), xx.data());
    double norm2 = 0;
    for (double xi : xx) norm2 += xi * xi;
    CHECK(rel_err(std::sqrt(norm2), 3.1 * 1.75) < 1e-14);
  }

  auto sph = make_model("sphere[r=2]");
  const double sc[2] = {0.9, 4.0};
  double sx[3];
  sph.position(sc, sx);
  CHECK(rel_err(std::sqrt(sx[0] * sx[0] + sx[1] * sx[1] + sx[2] * sx[2]), 2.0) < 1e-14);
}

TEST_CASE("segment lengths are exact on constant-coefficient paths") {
  auto plane = make_model("hyperplane");
  const double a[2] = {0.0, 0.0}, b[2] = {0.3, 0.4};
  CHECK(rel_err(plane.segment_length(a, b), 0.5) < 1e-14);

  auto cat = make_model("catenoid[c=1]");
  const double n0[2] = {0.0, 0.0}, n1[2] = {0.0, 0.25};
  CHECK(rel_err(cat.segment_length(n0, n1), 0.25) < 1e-14);

  auto sph = make_model("sphere[r=2]");
  const double m0[2] = {0.7, 1.0}, m1[2] = {1.3, 1.0};
  CHECK(rel_err(sph.segment_length(m0, m1), 1.2) < 1e-12);

  auto cone = make_model("simons");
  const double r0[2] = {1.0, 0.3}, r1[2] = {2.71828, 0.3};
  CHECK(rel_err(cone.segment_length(r0, r1), 1.71828) < 1e-14);

  auto scaled = scale_model(cone, 3.0);
  CHECK(rel_err(scaled.segment_length(r0, r1), 3.0 * 1.71828) < 1e-14);
}

TEST_CASE("descriptor parsing: canonical names, defaults, rejected input") {
  auto simons = make_model("simons");
  CHECK(simons.name == "cone_sphere_products[p=3,q=3]");
  CHECK(simons.p == 3);
  CHECK(simons.q == 3);
  CHECK(simons.ambient_dim == 8);
  CHECK(simons.chart_dim() == 2);

  auto cliff = make_model("clifford");
  CHECK(cliff.name == "clifford_cone");
  CHECK(cliff.ambient_dim == 4);
  CHECK(cliff.chart_dim() == 3);

  CHECK(make_model("sphere").radius == 1.0);
  CHECK(make_model("catenoid[c=0.5]").neck == 0.5);
  CHECK(make_model("cone_sphere_products[p=4,q=1]").name == "cone_sphere_products[p=4,q=1]");

  CHECK_THROWS_AS(make_model("sphere[r=0]"), std::invalid_argument);
  CHECK_THROWS_AS(make_model("sphere[r=-1]"), std::invalid_argument);
  CHECK_THROWS_AS(make_model("catenoid[c=0]"), std::invalid_argument);
  CHECK_THROWS_AS(make_model("catenoid[c=-2]"), std::invalid_argument);
  CHECK_THROWS_AS(make_model("cone_sphere_products[p=0,q=3]"), std::invalid_argument);
  CHECK_THROWS_AS(make_model("moebius"), std::invalid_argument);
  CHECK_THROWS_AS(make_model("sphere[r=2"), std::invalid_argument);   // missing bracket
  CHECK_THROWS_AS(make_model("sphere[r2]"), std::invalid_argument);   // not k=v
  CHECK_THROWS_AS(make_model("sphere[R=2]"), std::invalid_argument);  // unknown key
  CHECK_THROWS_AS(make_model("hyperplane[x=1]"), std::invalid_argument);

  CHECK(make_model("hyperplane").totally_geodesic);
  CHECK_FALSE(make_model("sphere").totally_geodesic);
}
