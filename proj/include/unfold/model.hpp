#pragma once

#include <array>
#include <string>
#include <vector>

namespace unfold {

// Analytic hypersurface models. Each model exposes a chart (product of
// intervals/circles), the induced metric in that chart, an ambient embedding
// of the charted slice, the analytic shape-operator norm |A|, and the
// distance to the singular set. Cone families are charted as
// (r, link angles) with metric dr^2 + r^2 g_link; the link metric is
// hard-coded per family. For cones over products of round spheres the chart
// is the 2d totally geodesic slice spanned by the radial direction and a
// closed geodesic circle of the link; |A| is that of the full hypersurface
// (constant along the link, so nothing is lost in the slice).
enum class ModelKind {
  hyperplane,
  sphere,
  catenoid,
  cone_over_sphere_products,
  clifford_cone,
};

struct ChartAxis {
  double lo = 0;
  double hi = 0;
  bool periodic = false;
  bool graded = false;  // geometric node spacing (cone radial axis)
};

struct ModelSurface {
  ModelKind kind = ModelKind::hyperplane;
  std::string name;       // canonical descriptor, e.g. "cone_sphere_products(3,3)"
  double scale = 1.0;     // conformal scale applied to the whole geometry
  // family parameters
  int p = 0, q = 0;       // sphere-product cone factors
  double radius = 1.0;    // sphere radius
  double neck = 1.0;      // catenoid neck parameter
  std::vector<ChartAxis> axes;
  int ambient_dim = 3;
  bool totally_geodesic = false;
  bool has_sigma = false;  // singular set present (cone tip)

  int chart_dim() const { return static_cast<int>(axes.size()); }

  // Diagonal induced metric coefficients at a chart point (all charts here
  // are orthogonal), including the scale factor.
  void metric_diag(const double* c, double* g) const;
  // Ambient position of the charted point (scaled).
  void position(const double* c, double* x) const;
  // Shape operator norm |A| (scales as 1/lambda).
  double shape_norm(const double* c) const;
  // Distance to the singular set; unbounded sentinel when there is none.
  double dist_sigma(const double* c) const;
  // Length element along a straight chart segment, 4-point Gauss-Legendre.
  double segment_length(const double* c0, const double* c1) const;
};

// Descriptor grammar: "hyperplane", "sphere[r=2]", "catenoid[c=1]",
// "cone_sphere_products[p=3,q=3]" (alias "simons"), "clifford_cone"
// (alias "clifford"). Parameters optional, defaults in brackets above.
ModelSurface make_model(const std::string& descriptor);

// Conformal scaling lambda * M: metric scales by lambda^2, |A| by 1/lambda,
// distances by lambda. Round-trips compose multiplicatively.
ModelSurface scale_model(const ModelSurface& m, double lambda);

// Convenience: distance to the singular set at a chart point.
double dist_to_sigma(const ModelSurface& m, const double* chart);

// Link circle radius of the slice chart for cone models (per unit cone
// radius): sqrt(p/(p+q)) for sphere-product cones, 1/sqrt(2) per torus
// factor for the clifford cone.
double cone_link_radius(const ModelSurface& m);

// Shape norm coefficient a0 with |A| = a0 / r on cone models.
double cone_shape_coefficient(const ModelSurface& m);

}  // namespace unfold
