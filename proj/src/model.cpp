#include "unfold/model.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>

#include "unfold/sentinel.hpp"

namespace unfold {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Parses "name" or "name[k=v,k=v]" into name + parameter map.
void split_descriptor(const std::string& s, std::string& name,
                      std::map<std::string, double>& params) {
  auto lb = s.find('[');
  if (lb == std::string::npos) {
    name = s;
    return;
  }
  if (s.back() != ']') throw std::invalid_argument("model descriptor: missing ']' in " + s);
  name = s.substr(0, lb);
  std::string body = s.substr(lb + 1, s.size() - lb - 2);
  size_t pos = 0;
  while (pos < body.size()) {
    size_t comma = body.find(',', pos);
    if (comma == std::string::npos) comma = body.size();
    std::string item = body.substr(pos, comma - pos);
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("model descriptor: expected k=v, got '" + item + "'");
    params[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    pos = comma + 1;
  }
}

}  // namespace

ModelSurface make_model(const std::string& descriptor) {
  std::string name;
  std::map<std::string, double> prm;
  split_descriptor(descriptor, name, prm);
  std::set<std::string> used;
  auto get = [&](const char* key, double dflt) {
    used.insert(key);
    auto it = prm.find(key);
    return it == prm.end() ? dflt : it->second;
  };
  auto reject_unused = [&] {
    for (const auto& kv : prm)
      if (!used.count(kv.first))
        throw std::invalid_argument("unknown parameter '" + kv.first + "' for model " + name);
  };

  ModelSurface m;
  if (name == "hyperplane") {
    m.kind = ModelKind::hyperplane;
    m.name = "hyperplane";
    m.axes = {{-1, 1, false, false}, {-1, 1, false, false}};
    m.ambient_dim = 3;
    m.totally_geodesic = true;
    m.has_sigma = false;
  } else if (name == "sphere") {
    m.kind = ModelKind::sphere;
    m.radius = get("r", 1.0);
    if (m.radius <= 0) throw std::invalid_argument("sphere: r must be positive");
    char buf[64];
    std::snprintf(buf, sizeof(buf), "sphere[r=%g]", m.radius);
    m.name = buf;
    // polar band away from the poles of the (theta, phi) chart
    m.axes = {{0.6, 2.5415926535897931, false, false}, {0, kTwoPi, true, false}};
    m.ambient_dim = 3;
    m.has_sigma = false;
  } else if (name == "catenoid") {
    m.kind = ModelKind::catenoid;
    m.neck = get("c", 1.0);
    if (m.neck <= 0) throw std::invalid_argument("catenoid: c must be positive");
    char buf[64];
    std::snprintf(buf, sizeof(buf), "catenoid[c=%g]", m.neck);
    m.name = buf;
    m.axes = {{-5, 5, false, false}, {0, kTwoPi, true, false}};
    m.ambient_dim = 3;
    m.has_sigma = false;
  } else if (name == "cone_sphere_products" || name == "simons") {
    m.kind = ModelKind::cone_over_sphere_products;
    m.p = static_cast<int>(get("p", 3));
    m.q = static_cast<int>(get("q", 3));
    if (m.p < 1 || m.q < 1)
      throw std::invalid_argument("cone_sphere_products: p,q must be >= 1");
    char buf[64];
    std::snprintf(buf, sizeof(buf), "cone_sphere_products[p=%d,q=%d]", m.p, m.q);
    m.name = buf;
    m.axes = {{0.1, 10, false, true}, {0, kTwoPi, true, false}};
    m.ambient_dim = m.p + m.q + 2;
    m.has_sigma = true;
  } else if (name == "clifford_cone" || name == "clifford") {
    m.kind = ModelKind::clifford_cone;
    m.name = "clifford_cone";
    m.axes = {{0.25, 4, false, true},
              {0, kTwoPi, true, false},
              {0, kTwoPi, true, false}};
    m.ambient_dim = 4;
    m.has_sigma = true;
  } else {
    throw std::invalid_argument("unknown model kind: " + name);
  }
  reject_unused();
  return m;
}

ModelSurface scale_model(const ModelSurface& m, double lambda) {
  if (!(lambda > 0)) throw std::invalid_argument("scale_model: lambda must be positive");
  ModelSurface out = m;
  out.scale = m.scale * lambda;
  return out;
}

double cone_link_radius(const ModelSurface& m) {
  switch (m.kind) {
    case ModelKind::cone_over_sphere_products:
      return std::sqrt(static_cast<double>(m.p) / (m.p + m.q));
    case ModelKind::clifford_cone:
      return 1.0 / std::sqrt(2.0);
    default:
      throw std::invalid_argument("cone_link_radius: not a cone model");
  }
}

double cone_shape_coefficient(const ModelSurface& m) {
  switch (m.kind) {
    case ModelKind::cone_over_sphere_products:
      return std::sqrt(static_cast<double>(m.p + m.q));
    case ModelKind::clifford_cone:
      return std::sqrt(2.0);
    default:
      throw std::invalid_argument("cone_shape_coefficient: not a cone model");
  }
}

void ModelSurface::metric_diag(const double* c, double* g) const {
  const double s2 = scale * scale;
  switch (kind) {
    case ModelKind::hyperplane:
      g[0] = s2;
      g[1] = s2;
      break;
    case ModelKind::sphere: {
      const double st = std::sin(c[0]);
      g[0] = s2 * radius * radius;
      g[1] = s2 * radius * radius * st * st;
      break;
    }
    case ModelKind::catenoid: {
      const double ch = std::cosh(c[0] / neck);
      g[0] = s2 * ch * ch;
      g[1] = s2 * neck * neck * ch * ch;
      break;
    }
    case ModelKind::cone_over_sphere_products: {
      const double rho = std::sqrt(static_cast<double>(p) / (p + q));
      g[0] = s2;
      g[1] = s2 * rho * rho * c[0] * c[0];
      break;
    }
    case ModelKind::clifford_cone: {
      g[0] = s2;
      g[1] = s2 * 0.5 * c[0] * c[0];
      g[2] = s2 * 0.5 * c[0] * c[0];
      break;
    }
  }
}

void ModelSurface::position(const double* c, double* x) const {
  switch (kind) {
    case ModelKind::hyperplane:
      x[0] = scale * c[0];
      x[1] = scale * c[1];
      x[2] = 0;
      break;
    case ModelKind::sphere: {
      const double st = std::sin(c[0]), ct = std::cos(c[0]);
      x[0] = scale * radius * st * std::cos(c[1]);
      x[1] = scale * radius * st * std::sin(c[1]);
      x[2] = scale * radius * ct;
      break;
    }
    case ModelKind::catenoid: {
      const double w = neck * std::cosh(c[0] / neck);
      x[0] = scale * w * std::cos(c[1]);
      x[1] = scale * w * std::sin(c[1]);
      x[2] = scale * c[0];
      break;
    }
    case ModelKind::cone_over_sphere_products: {
      // slice through a closed geodesic circle in the first sphere factor
      const int n = p + q;
      const double rp = c[0] * std::sqrt(static_cast<double>(p) / n);
      const double rq = c[0] * std::sqrt(static_cast<double>(q) / n);
      for (int i = 0; i < ambient_dim; ++i) x[i] = 0;
      x[0] = scale * rp * std::cos(c[1]);
      x[1] = scale * rp * std::sin(c[1]);
      x[p + 1] = scale * rq;
      break;
    }
    case ModelKind::clifford_cone: {
      const double w = c[0] / std::sqrt(2.0);
      x[0] = scale * w * std::cos(c[1]);
      x[1] = scale * w * std::sin(c[1]);
      x[2] = scale * w * std::cos(c[2]);
      x[3] = scale * w * std::sin(c[2]);
      break;
    }
  }
}

double ModelSurface::shape_norm(const double* c) const {
  switch (kind) {
    case ModelKind::hyperplane:
      return 0.0;
    case ModelKind::sphere:
      return std::sqrt(2.0) / (radius * scale);
    case ModelKind::catenoid: {
      const double ch = std::cosh(c[0] / neck);
      return std::sqrt(2.0) / (neck * ch * ch * scale);
    }
    case ModelKind::cone_over_sphere_products:
      return std::sqrt(static_cast<double>(p + q)) / (c[0] * scale);
    case ModelKind::clifford_cone:
      return std::sqrt(2.0) / (c[0] * scale);
  }
  return 0.0;
}

double ModelSurface::dist_sigma(const double* c) const {
  if (!has_sigma) return kUnbounded;
  return c[0] * scale;
}

double ModelSurface::segment_length(const double* c0, const double* c1) const {
  // 4-point Gauss-Legendre quadrature of sqrt(d^T G d) along the chart
  // segment; exact for the constant and near-constant integrands of radial
  // and angular grid edges, ~1e-10 relative on diagonals.
  static const double nodes[4] = {0.069431844202973712, 0.33000947820757187,
                                  0.66999052179242813, 0.93056815579702629};
  static const double weights[4] = {0.17392742256872693, 0.32607257743127307,
                                    0.32607257743127307, 0.17392742256872693};
  const int d = chart_dim();
  double delta[3], point[3], g[3];
  for (int i = 0; i < d; ++i) delta[i] = c1[i] - c0[i];
  double total = 0;
  for (int k = 0; k < 4; ++k) {
    for (int i = 0; i < d; ++i) point[i] = c0[i] + nodes[k] * delta[i];
    metric_diag(point, g);
    double q2 = 0;
    for (int i = 0; i < d; ++i) q2 += g[i] * delta[i] * delta[i];
    total += weights[k] * std::sqrt(q2);
  }
  return total;
}

double dist_to_sigma(const ModelSurface& m, const double* chart) {
  return m.dist_sigma(chart);
}

}  // namespace unfold
