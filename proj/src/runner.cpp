#include "unfold/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <utility>

#include "unfold/boundary.hpp"
#include "unfold/dijkstra.hpp"
#include "unfold/hyperbolicity.hpp"
#include "unfold/mesh.hpp"
#include "unfold/metric.hpp"
#include "unfold/sentinel.hpp"
#include "unfold/uniformity.hpp"
#include "unfold/whitney.hpp"

namespace unfold {

namespace {

namespace fs = std::filesystem;

bool is_cone(const ModelSurface& m) {
  return m.kind == ModelKind::cone_over_sphere_products ||
         m.kind == ModelKind::clifford_cone;
}

MetricGraph build_from_model(const ModelSurface& m, const VerifyConfig& cfg,
                             int res, double h) {
  double lo = m.axes.empty() ? 0 : m.axes[0].lo;
  double hi = m.axes.empty() ? 0 : m.axes[0].hi;
  const bool override_range = cfg.rmin < cfg.rmax;
  if (override_range) {
    lo = cfg.rmin;
    hi = cfg.rmax;
  }
  if (is_cone(m) && res > 0) return build_cone_graph(m, lo, hi, res);
  std::vector<std::pair<double, double>> bounds;
  if (override_range) bounds.push_back({lo, hi});
  return build_graph(m, h, bounds);
}

std::string two_sided(const char* what, double value) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s: %.17g", what, value);
  return buf;
}

ojson trivial_section(const char* what) {
  ojson j;
  j["status"] = "trivial gauge";
  j["note"] = std::string("the gauge vanishes on a totally geodesic input; ") +
              what + " is undefined";
  return j;
}

// Measured profile plus (for cone charts) the analytic curve, thinned for
// the plot.
std::vector<Series> profile_series(const MetricGraph& g, const SigmaField& f,
                                   const ModelSurface* model) {
  std::vector<std::pair<double, double>> rows;
  rows.reserve(g.n());
  for (std::uint32_t v = 0; v < g.n(); ++v) {
    const double r = g.chart_dim > 0 ? g.chart[static_cast<std::size_t>(v) * g.chart_dim] * g.scale
                                     : g.dist_sigma(v);
    if (!std::isfinite(r)) continue;
    rows.push_back({r, f.b[v]});
  }
  std::sort(rows.begin(), rows.end());
  const std::size_t stride = std::max<std::size_t>(1, rows.size() / 1200);
  Series meas;
  meas.name = "measured";
  for (std::size_t i = 0; i < rows.size(); i += stride) {
    meas.x.push_back(rows[i].first);
    meas.y.push_back(rows[i].second);
  }
  std::vector<Series> out;
  out.push_back(std::move(meas));
  if (model && is_cone(*model) && !out[0].x.empty()) {
    const double a0 = cone_shape_coefficient(*model);
    Series exact;
    exact.name = "closed form";
    for (double r : out[0].x) {
      if (r <= 0) continue;
      exact.x.push_back(r);
      exact.y.push_back((a0 + f.alpha) / r);
    }
    out.push_back(std::move(exact));
  }
  return out;
}

std::vector<std::uint32_t> interpolation_band(const MetricGraph& g) {
  std::vector<std::pair<double, std::uint32_t>> cand;
  for (std::uint32_t v = 0; v < g.n(); ++v) {
    if (g.near_sigma_ring[v] || g.outer_truncation[v]) continue;
    const double d = g.dist_sigma(v);
    if (!std::isfinite(d) || is_unbounded(d)) continue;
    cand.push_back({d, v});
  }
  if (cand.empty()) return {};
  std::sort(cand.begin(), cand.end());
  const double lo = cand[(cand.size() - 1) * 2 / 5].first;
  const double hi = cand[(cand.size() - 1) * 3 / 5].first;
  std::vector<std::uint32_t> band;
  for (const auto& [d, v] : cand)
    if (d >= lo && d <= hi) band.push_back(v);
  std::sort(band.begin(), band.end());
  return band;
}

}  // namespace

MetricGraph make_verify_graph(const VerifyConfig& cfg, ModelSurface* model_out,
                              bool* from_model) {
  const int modes = static_cast<int>(!cfg.model.empty()) +
                    static_cast<int>(!cfg.graph_dir.empty()) +
                    static_cast<int>(!cfg.mesh.empty());
  if (modes != 1)
    throw std::invalid_argument(
        "exactly one input among a model descriptor, a graph directory and a "
        "mesh file must be given");
  if (from_model) *from_model = false;
  if (!cfg.model.empty()) {
    ModelSurface m = make_model(cfg.model);
    if (model_out) *model_out = m;
    if (from_model) *from_model = true;
    return build_from_model(m, cfg, cfg.res, cfg.h);
  }
  if (!cfg.graph_dir.empty()) return load_graph_csv(cfg.graph_dir);
  return ingest_mesh(cfg.mesh, cfg.sidecar);
}

std::uint32_t pick_interior_base(const MetricGraph& g) {
  std::vector<Source> marked;
  for (std::uint32_t v = 0; v < g.n(); ++v)
    if (g.near_sigma_ring[v] || g.outer_truncation[v]) marked.push_back({v, 0.0});
  if (marked.empty()) return 0;
  const std::vector<double> icost = intrinsic_costs(g);
  std::vector<double> dist;
  sssp(g, icost.data(), marked, kUnbounded, dist);
  std::uint32_t best = 0;
  double best_d = -1;
  for (std::uint32_t v = 0; v < g.n(); ++v) {
    const double d = is_unbounded(dist[v]) ? -1 : dist[v];
    if (d > best_d) {
      best_d = d;
      best = v;
    }
  }
  return best;
}

VerifyOutcome run_verify(const VerifyConfig& cfg) {
  if (cfg.out_dir.empty())
    throw std::invalid_argument("verification needs an output directory");
  fs::create_directories(cfg.out_dir);
  const std::string dir = cfg.out_dir;
  VerifyOutcome out;
  auto violate = [&out](const std::string& msg) { out.violations.push_back(msg); };

  ModelSurface model;
  bool from_model = false;
  MetricGraph g = make_verify_graph(cfg, &model, &from_model);

  SigmaOptions sopt;
  sopt.alpha = cfg.alpha;
  if (cfg.ladder_q > 0) sopt.ladder_q = cfg.ladder_q;
  sopt.refine = cfg.refine;

  SigmaField f;
  if (cfg.field_dir.empty()) {
    f = compute_sigma_field(g, sopt);
  } else {
    f = load_sigma_csv(cfg.field_dir);
    if (f.b.size() != g.n())
      throw std::invalid_argument("stored gauge has " + std::to_string(f.b.size()) +
                                  " vertices, graph has " + std::to_string(g.n()));
    out.notes.push_back("validating the stored gauge from " + cfg.field_dir);
    const double stored = f.l_hat;
    f.l_hat = rescaled_slope(g, f);  // never trust cached metadata for bounds
    if (stored > 0 && std::abs(stored - f.l_hat) > 1e-12 * std::max(stored, f.l_hat))
      out.notes.push_back(two_sided("stored slope metadata disagrees with the data; recomputed",
                                    f.l_hat));
  }

  {
    ojson rc;
    rc["input"] = !cfg.model.empty() ? cfg.model
                  : !cfg.graph_dir.empty() ? cfg.graph_dir
                                           : cfg.mesh;
    rc["mode"] = from_model ? "model" : (!cfg.graph_dir.empty() ? "graph" : "mesh");
    rc["graph_id"] = g.id;
    rc["n_vertices"] = g.n();
    rc["n_edges"] = g.m();
    rc["resolution"] = json_num(g.h());
    rc["scale"] = json_num(g.scale);
    rc["alpha"] = json_num(f.alpha);
    rc["ladder_q"] = json_num(f.ladder_q);
    rc["refine"] = cfg.refine;
    rc["field"] = cfg.field_dir.empty() ? "computed" : cfg.field_dir;
    rc["pairs"] = cfg.pairs;
    rc["samples"] = cfg.samples;
    rc["triangles"] = cfg.triangles;
    rc["quads"] = cfg.quads;
    rc["ray_targets"] = cfg.ray_targets;
    rc["tolerance"] = json_num(cfg.tolerance);
    rc["seed"] = cfg.seed;
    rc["strict"] = cfg.strict;
    rc["refinement_evidence_requested"] = cfg.with_refinement;
    write_json(dir + "/run_config.json", rc);
  }

  // --- gauge axioms ------------------------------------------------------
  AxiomOptions aopt;
  if (from_model) aopt.model = &model;
  const AxiomReport ax = verify_axioms(g, f, aopt);
  write_json(dir + "/axioms.json", axiom_json(ax));
  for (const auto& v : ax.violations) violate("gauge axioms: " + v);

  {
    ojson lj;
    const double bound = (1.0 + aopt.s3_slack) / f.alpha;
    lj["alpha"] = json_num(f.alpha);
    lj["l_hat"] = json_num(f.l_hat);
    lj["bound"] = json_num(bound);
    lj["pass"] = f.trivial || f.l_hat <= bound;
    write_json(dir + "/lipschitz.json", lj);
  }

  // --- interpolation between the field and the singular distance ---------
  if (g.has_sigma && !f.trivial) {
    const std::vector<std::uint32_t> band = interpolation_band(g);
    if (band.empty()) {
      out.notes.push_back("interpolation skipped: no interior band clear of the rings");
    } else {
      SigmaOptions iopt = sopt;
      const InterpolationReport ir =
          interpolation_sweep(g, {0.5, 1.0, 2.0}, band, iopt);
      write_json(dir + "/interpolation.json", interpolation_json(ir));
      if (!ir.monotone)
        violate("interpolation: the field is not monotone in alpha (" +
                two_sided("worst drop", ir.worst_monotonicity_violation) + ")");
    }
  }

  // --- uniformity --------------------------------------------------------
  UniformityEstimate ue;
  bool have_a = false;
  if (f.trivial) {
    write_json(dir + "/uniformity.json", trivial_section("uniformity"));
  } else {
    ue = estimate_uniformity_constant(g, f, cfg.samples, cfg.seed);
    have_a = true;
    write_json(dir + "/uniformity.json", uniformity_json(ue));
  }

  // --- inequality suite ---------------------------------------------------
  if (f.trivial) {
    write_json(dir + "/suite.json", trivial_section("the inequality suite"));
  } else {
    const double a_for_suite = have_a ? std::max(1.0, ue.a_hat) : 1.0;
    const SuiteReport sr =
        check_inequality_suite(g, f, cfg.pairs, cfg.seed, cfg.tolerance, a_for_suite);
    write_json(dir + "/suite.json", suite_json(sr));
    for (const auto& cl : sr.clauses) {
      if (cl.skipped || cl.violations == 0) continue;
      violate("inequality suite: " + cl.name + ": " + std::to_string(cl.violations) +
              " of " + std::to_string(cl.checked) + " pairs out of bounds (" +
              two_sided("worst margin", cl.min_margin) + ")");
    }
  }

  // --- metric sanity ------------------------------------------------------
  {
    const WeightField w =
        make_weight(g, f.trivial ? WeightKind::intrinsic : WeightKind::sigma, &f);
    const std::vector<double> ecost = edge_costs(g, w);
    const MetricSanity ms = check_metric_axioms(g, ecost, 32, cfg.seed + 11);
    ojson sj = sanity_json(ms);
    sj["weight"] = w.name;
    write_json(dir + "/sanity.json", sj);
    if (!ms.symmetry_exact) violate("metric sanity: distance symmetry broken");
    if (ms.triangle_violations > 0)
      violate("metric sanity: " + std::to_string(ms.triangle_violations) +
              " triangle inequalities failed (" +
              two_sided("worst defect", ms.worst_triangle_defect) + ")");
  }

  // --- hyperbolicity ------------------------------------------------------
  HyperbolicityReport hr;
  const std::uint32_t base = pick_interior_base(g);
  {
    const WeightField w =
        make_weight(g, f.trivial ? WeightKind::intrinsic : WeightKind::sigma, &f);
    const std::vector<double> ecost = edge_costs(g, w);
    hr.weight = f.trivial ? "intrinsic (trivial gauge)" : w.name;
    hr.n_triangles = cfg.triangles;
    hr.n_quadruples = cfg.quads;
    hr.seed = cfg.seed;
    hr.delta_thin = estimate_thinness(g, ecost, cfg.triangles, cfg.seed + 21);
    hr.delta_4pt = four_point_delta(g, ecost, cfg.quads, cfg.seed + 22);
    try {
      hr.beta = check_rough_starlike(g, ecost, base, 2 * cfg.ray_targets, cfg.seed + 23);
    } catch (const std::invalid_argument& e) {
      out.notes.push_back(std::string("rough starlikeness skipped: ") + e.what());
    }
    if (have_a) {
      hr.formula_bound = delta_formula(std::max(1.0, ue.a_hat));
      if (hr.delta_thin > hr.formula_bound)
        violate("hyperbolicity: measured thinness " +
                std::to_string(hr.delta_thin) + " exceeds the formula bound");
    }
    write_json(dir + "/hyperbolicity.json", hyperbolicity_json(hr));
  }

  // --- cover and smoothing -------------------------------------------------
  if (f.trivial) {
    write_json(dir + "/whitney.json", trivial_section("the cover"));
  } else {
    const double auto_xi =
        f.l_hat > 0 ? std::min(1e-3, 0.999 / (1000.0 * f.l_hat)) : 1e-3;
    const double xi = cfg.xi > 0 ? cfg.xi : auto_xi;
    const SigmaCover cover = build_cover(g, f, xi);
    const SmoothedField sm = smooth_sigma(f, cover, g);
    const SmoothingCheck sc = verify_smoothing(f, sm, g);
    write_json(dir + "/whitney.json", whitney_json(cover, sc));
    if (!cover.cover_ok) violate("cover: some vertex is not covered");
    if (!cover.separation_ok) violate("cover: center separation violated");
    if (!cover.family_ok) violate("cover: families are not overlap-free");
    if (!sc.pass) violate("smoothing: degenerate smoothed field");
    if (sc.c1 > 1.0 + 1e-12 || sc.c2 < 1.0 - 1e-12)
      violate("smoothing: the smoothed field does not bracket the input (" +
              two_sided("c1", sc.c1) + ", " + two_sided("c2", sc.c2) + ")");
  }

  // --- boundary map --------------------------------------------------------
  if (f.trivial) {
    write_json(dir + "/boundary.json", trivial_section("the boundary map"));
  } else {
    const double threshold =
        cfg.threshold > 0
            ? cfg.threshold
            : 8.0 * (have_a ? ue.a_hat * ue.a_hat : 1.0) + 2.0 * hr.delta_thin;
    TargetSpec ts;
    ts.max_per_family = cfg.ray_targets;
    const RayBundle rb = trace_rays(g, f, base, ts, threshold);
    const BoundaryReport br = verify_boundary_map(rb, g);
    write_json(dir + "/boundary.json", boundary_json(br));
    if (!br.surjective)
      violate("boundary: some singular component is unreachable from the ray classes");
    if (!br.injective)
      violate("boundary: one ray class touches several singular components");
    if (br.ambiguous)
      violate("boundary: ray clustering is ambiguous at the chosen threshold");
    for (const auto& n : br.notes) out.notes.push_back("boundary: " + n);
  }

  // --- refinement evidence --------------------------------------------------
  bool evidence = false;
  if (cfg.with_refinement && from_model) {
    const int coarse_res = cfg.res > 0 ? std::max(8, cfg.res / 2) : 0;
    const MetricGraph cg = build_from_model(model, cfg, coarse_res, cfg.h * 2);
    const SigmaField cf = compute_sigma_field(cg, sopt);
    ojson rows = ojson::array();
    double max_drift = 0;
    auto row = [&](const char* name, double coarse, double fine) {
      const double drift =
          std::fabs(coarse - fine) / std::max(std::fabs(fine), 1e-300);
      max_drift = std::max(max_drift, drift);
      ojson r;
      r["quantity"] = name;
      r["coarse"] = json_num(coarse);
      r["fine"] = json_num(fine);
      r["rel_drift"] = json_num(drift);
      rows.push_back(r);
    };
    if (!f.trivial && !cf.trivial) {
      row("l_hat", cf.l_hat, f.l_hat);
      const std::size_t us = std::min<std::size_t>(cfg.samples, 64);
      const UniformityEstimate cu = estimate_uniformity_constant(cg, cf, us, cfg.seed);
      if (have_a) row("a_hat", cu.a_hat, ue.a_hat);
      const WeightField cw = make_weight(cg, WeightKind::sigma, &cf);
      const WeightField fw = make_weight(g, WeightKind::sigma, &f);
      const std::size_t qs = std::min<std::size_t>(cfg.quads, 64);
      row("delta_4pt", four_point_delta(cg, edge_costs(cg, cw), qs, cfg.seed + 22),
          four_point_delta(g, edge_costs(g, fw), qs, cfg.seed + 22));
    } else {
      row("l_hat", cf.l_hat, f.l_hat);
    }
    ojson rj;
    rj["coarse_vertices"] = cg.n();
    rj["fine_vertices"] = g.n();
    rj["coarse_resolution"] = json_num(cg.h());
    rj["fine_resolution"] = json_num(g.h());
    rj["rows"] = rows;
    rj["max_rel_drift"] = json_num(max_drift);
    write_json(dir + "/refinement.json", rj);
    evidence = true;
  } else if (cfg.with_refinement) {
    out.notes.push_back(
        "refinement evidence skipped: only model inputs can be rebuilt coarser");
  }

  {
    ojson tj;
    tj["eps_h"] = json_num(cfg.tolerance);
    tj["source"] = evidence ? "h-refinement" : "assumed";
    write_json(dir + "/tolerances.json", tj);
    if (cfg.strict && !evidence)
      violate("strict: tolerances are assumed; refinement evidence requires a "
              "model input with refinement enabled");
  }

  write_profile_csv(g, f, dir + "/profile.csv");
  write_svg_curve(dir + "/profile.svg", profile_series(g, f, from_model ? &model : nullptr),
                  "gauge profile", "r", "b");

  out.report = emit_report(dir);
  out.report["violations"] = out.violations;
  out.report["notes"] = out.notes;
  out.report["exit_code"] = out.violations.empty() ? 0 : 2;
  write_json(dir + "/report.json", out.report);
  out.exit_code = out.violations.empty() ? 0 : 2;
  return out;
}

}  // namespace unfold
