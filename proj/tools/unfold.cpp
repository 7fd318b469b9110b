#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "unfold/boundary.hpp"
#include "unfold/dijkstra.hpp"
#include "unfold/hyperbolicity.hpp"
#include "unfold/metric.hpp"
#include "unfold/rng.hpp"
#include "unfold/runner.hpp"
#include "unfold/sentinel.hpp"
#include "unfold/uniformity.hpp"
#include "unfold/whitney.hpp"

namespace {

using namespace unfold;

std::pair<std::uint32_t, std::uint32_t> parse_vertex_pair(const std::string& s) {
  const auto c = s.find(',');
  if (c == std::string::npos)
    throw std::invalid_argument("expected a vertex pair \"p,q\", got: " + s);
  return {static_cast<std::uint32_t>(std::stoul(s.substr(0, c))),
          static_cast<std::uint32_t>(std::stoul(s.substr(c + 1)))};
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    auto c = s.find(',', pos);
    if (c == std::string::npos) c = s.size();
    out.push_back(std::stod(s.substr(pos, c - pos)));
    pos = c + 1;
  }
  if (out.empty()) throw std::invalid_argument("empty list: " + s);
  return out;
}

std::vector<std::uint32_t> parse_vertex_list(const std::string& s) {
  std::vector<std::uint32_t> out;
  for (double v : parse_double_list(s)) out.push_back(static_cast<std::uint32_t>(v));
  return out;
}

// Per-subcommand option bag; VerifyConfig already carries every input /
// discretization / field knob, so the other commands reuse it.
struct CliState {
  VerifyConfig cfg;
  std::string weight = "sigma";
  std::string pair;        // "p,q"
  std::string pipeline;    // "p,q"
  std::string range;       // rmax sweep list
  std::string targets;     // explicit vertex list
  double t = 0.25;
  double tau = 1.0 / 16.0;
  double a_hat = 0;
  int source = -1;
  int base = -1;
  bool all = false;
  bool suite = false;
  std::string report_dir;
};

void add_input_flags(CLI::App* sub, CliState& st) {
  sub->set_help_flag("--help", "print this help and exit");
  sub->add_option("--model", st.cfg.model,
                  "model descriptor (hyperplane | sphere[r=..] | catenoid[c=..] | "
                  "cone_sphere_products[p=..,q=..] | clifford_cone; aliases simons, clifford)");
  sub->add_option("--graph", st.cfg.graph_dir, "directory with vertices.csv / edges.csv");
  sub->add_option("--mesh", st.cfg.mesh, "OFF triangle mesh");
  sub->add_option("--sidecar", st.cfg.sidecar, "singular-vertex list for --mesh");
  sub->add_option("--h", st.cfg.h, "target edge length (relative on graded charts)");
  sub->add_option("--res", st.cfg.res, "cone charts: angular resolution instead of --h");
  sub->add_option("--rmin", st.cfg.rmin, "first chart axis lower bound");
  sub->add_option("--rmax", st.cfg.rmax, "first chart axis upper bound");
}

void add_field_flags(CLI::App* sub, CliState& st) {
  sub->add_option("--alpha", st.cfg.alpha, "gauge parameter alpha");
  sub->add_option("--ladder-q", st.cfg.ladder_q, "ladder ratio (0 = default 2^(1/8))");
  sub->add_flag_callback("--no-refine", [&st] { st.cfg.refine = false; },
                         "skip the exact per-vertex refinement pass");
  sub->add_option("--field", st.cfg.field_dir, "load a stored gauge instead of computing");
}

void add_seed_out(CLI::App* sub, CliState& st, bool out_required = true) {
  sub->add_option("--seed", st.cfg.seed, "deterministic sampling seed");
  auto* o = sub->add_option("--out", st.cfg.out_dir, "output directory");
  if (out_required) o->required();
}

MetricGraph graph_from(const CliState& st, ModelSurface* m = nullptr,
                       bool* from_model = nullptr) {
  return make_verify_graph(st.cfg, m, from_model);
}

SigmaField field_from(const CliState& st, const MetricGraph& g) {
  if (!st.cfg.field_dir.empty()) {
    SigmaField f = load_sigma_csv(st.cfg.field_dir);
    if (f.b.size() != g.n())
      throw std::invalid_argument("stored gauge size does not match the graph");
    f.l_hat = rescaled_slope(g, f);  // stored metadata is only a cache
    return f;
  }
  SigmaOptions opt;
  opt.alpha = st.cfg.alpha;
  if (st.cfg.ladder_q > 0) opt.ladder_q = st.cfg.ladder_q;
  opt.refine = st.cfg.refine;
  return compute_sigma_field(g, opt);
}

WeightKind weight_kind(const std::string& name) {
  if (name == "intrinsic") return WeightKind::intrinsic;
  if (name == "quasi") return WeightKind::quasi_hyperbolic;
  if (name == "sigma") return WeightKind::sigma;
  if (name == "smoothed") return WeightKind::sigma_smoothed;
  throw std::invalid_argument("unknown weight: " + name +
                              " (intrinsic | quasi | sigma | smoothed)");
}

// Weighted edge costs for the requested kind; `smoothed` builds the cover
// and smoothing on the fly.
std::vector<double> costs_for(const CliState& st, const MetricGraph& g,
                              const SigmaField& f, std::string* label) {
  const WeightKind k = weight_kind(st.weight);
  if (k == WeightKind::sigma_smoothed) {
    const double xi =
        st.cfg.xi > 0 ? st.cfg.xi
                      : (f.l_hat > 0 ? std::min(1e-3, 0.999 / (1000.0 * f.l_hat)) : 1e-3);
    const SigmaCover cover = build_cover(g, f, xi);
    const SmoothedField sm = smooth_sigma(f, cover, g);
    SigmaField star = f;
    star.b = sm.b_star;
    star.delta = sm.delta_star;
    const WeightField w = make_weight(g, WeightKind::sigma_smoothed, &star);
    if (label) *label = w.name;
    return edge_costs(g, w);
  }
  const WeightField w = make_weight(g, k, &f);
  if (label) *label = w.name;
  return edge_costs(g, w);
}

void write_manifest(const CliState& st, const MetricGraph& g, const char* command) {
  ojson j;
  j["command"] = command;
  j["input"] = !st.cfg.model.empty() ? st.cfg.model
               : !st.cfg.graph_dir.empty() ? st.cfg.graph_dir
                                           : st.cfg.mesh;
  j["graph_id"] = g.id;
  j["n_vertices"] = g.n();
  j["n_edges"] = g.m();
  j["resolution"] = json_num(g.h());
  j["h"] = json_num(st.cfg.h);
  j["res"] = st.cfg.res;
  j["rmin"] = json_num(st.cfg.rmin);
  j["rmax"] = json_num(st.cfg.rmax);
  j["alpha"] = json_num(st.cfg.alpha);
  j["seed"] = st.cfg.seed;
  write_json(st.cfg.out_dir + "/manifest.json", j);
}

int run_gen(const CliState& st) {
  std::filesystem::create_directories(st.cfg.out_dir);
  MetricGraph g = graph_from(st);
  dump_graph_csv(g, st.cfg.out_dir);
  write_manifest(st, g, "gen");
  std::printf("gen: %zu vertices, %zu edges, resolution %s -> %s\n", g.n(), g.m(),
              format_double(g.h()).c_str(), st.cfg.out_dir.c_str());
  return 0;
}

int run_sigma(const CliState& st) {
  std::filesystem::create_directories(st.cfg.out_dir);
  MetricGraph g = graph_from(st);
  const SigmaField f = field_from(st, g);
  dump_sigma_csv(f, st.cfg.out_dir);
  write_profile_csv(g, f, st.cfg.out_dir + "/profile.csv");
  write_manifest(st, g, "sigma");
  std::printf("sigma: alpha %s, l_hat %s%s -> %s\n", format_double(f.alpha).c_str(),
              format_double(f.l_hat).c_str(), f.trivial ? " (trivial gauge)" : "",
              st.cfg.out_dir.c_str());
  return 0;
}

int run_metric(const CliState& st) {
  std::filesystem::create_directories(st.cfg.out_dir);
  MetricGraph g = graph_from(st);
  const SigmaField f = field_from(st, g);
  std::string label;
  const std::vector<double> ecost = costs_for(st, g, f, &label);
  std::vector<GeodesicPath> paths;
  if (st.source >= 0) {
    if (st.targets.empty())
      throw std::invalid_argument("--source needs --targets");
    for (std::uint32_t t : parse_vertex_list(st.targets))
      paths.push_back(shortest_path(g, ecost, static_cast<std::uint32_t>(st.source), t));
  } else {
    DetRng rng(st.cfg.seed);
    const std::size_t n_dumped = 8;
    for (std::size_t i = 0; i < n_dumped; ++i) {
      const std::uint32_t p = rng.bounded(g.n());
      std::uint32_t q = rng.bounded(g.n());
      while (q == p) q = rng.bounded(g.n());
      paths.push_back(shortest_path(g, ecost, p, q));
    }
  }
  dump_geodesics_csv(g, paths, st.cfg.out_dir + "/geodesics.csv");
  std::printf("metric: %zu %s geodesics -> %s/geodesics.csv\n", paths.size(),
              label.c_str(), st.cfg.out_dir.c_str());
  int rc = 0;
  if (st.suite) {
    double a = st.a_hat;
    if (a <= 0) a = estimate_uniformity_constant(g, f, 64, st.cfg.seed).a_hat;
    const SuiteReport sr = check_inequality_suite(g, f, st.cfg.pairs, st.cfg.seed,
                                                  st.cfg.tolerance, std::max(1.0, a));
    write_json(st.cfg.out_dir + "/suite.json", suite_json(sr));
    for (const auto& cl : sr.clauses) {
      if (cl.skipped || cl.violations == 0) continue;
      std::printf("violation: %s: %zu of %zu pairs out of bounds\n", cl.name.c_str(),
                  cl.violations, cl.checked);
      rc = 2;
    }
    std::printf("suite: %zu pairs, a_hat %s -> %s/suite.json\n", sr.n_pairs,
                format_double(sr.a_hat).c_str(), st.cfg.out_dir.c_str());
  }
  return rc;
}

int run_uniform(const CliState& st) {
  std::filesystem::create_directories(st.cfg.out_dir);
  MetricGraph g = graph_from(st);
  const SigmaField f = field_from(st, g);
  if (!st.pipeline.empty()) {
    const auto [p, q] = parse_vertex_pair(st.pipeline);
    PipelineParams params;
    params.t = st.t;
    params.tau = st.tau;
    const PipelineResult pr = build_pipeline(g, f, p, q, params);
    write_json(st.cfg.out_dir + "/pipeline.json", pipeline_json(pr));
    const std::vector<double> icost = intrinsic_costs(g);
    const UniformityCertificate cert = verify_sigma_uniform(pr.curve, f, g, &icost);
    write_json(st.cfg.out_dir + "/certificate.json", certificate_json(cert));
    dump_geodesics_csv(g, {path_from_vertices(g, icost, pr.curve)},
                       st.cfg.out_dir + "/pipeline.csv");
    std::printf("pipeline %u,%u: %zu vertices, realized pi %s, c_hat %s -> %s\n", p, q,
                pr.curve.size(), format_double(pr.realized_pi).c_str(),
                format_double(cert.c_hat).c_str(), st.cfg.out_dir.c_str());
    return 0;
  }
  if (!st.pair.empty()) {
    const auto [p, q] = parse_vertex_pair(st.pair);
    const WeightField w = make_weight(g, WeightKind::sigma, &f);
    const std::vector<double> scost = edge_costs(g, w);
    const GeodesicPath path = shortest_path(g, scost, p, q);
    const UniformityCertificate cert = verify_sigma_uniform(path.vertices, f, g);
    write_json(st.cfg.out_dir + "/certificate.json", certificate_json(cert));
    std::printf("certified %u,%u: c_hat %s -> %s/certificate.json\n", p, q,
                format_double(cert.c_hat).c_str(), st.cfg.out_dir.c_str());
    return 0;
  }
  const UniformityEstimate ue =
      estimate_uniformity_constant(g, f, st.cfg.samples, st.cfg.seed);
  write_json(st.cfg.out_dir + "/uniformity.json", uniformity_json(ue));
  std::printf("uniformity: a_hat %s (q50 %s, q90 %s, %zu geodesics) -> %s\n",
              format_double(ue.a_hat).c_str(), format_double(ue.q50).c_str(),
              format_double(ue.q90).c_str(), ue.c_values.size(), st.cfg.out_dir.c_str());
  return 0;
}

int run_hyper(const CliState& st) {
  std::filesystem::create_directories(st.cfg.out_dir);
  MetricGraph g = graph_from(st);
  const SigmaField f = field_from(st, g);
  std::string label;
  const std::vector<double> ecost = costs_for(st, g, f, &label);
  HyperbolicityReport hr;
  hr.weight = label;
  hr.n_triangles = st.cfg.triangles;
  hr.n_quadruples = st.cfg.quads;
  hr.seed = st.cfg.seed;
  hr.delta_thin = estimate_thinness(g, ecost, st.cfg.triangles, st.cfg.seed + 21);
  hr.delta_4pt = four_point_delta(g, ecost, st.cfg.quads, st.cfg.seed + 22);
  const std::uint32_t base =
      st.base >= 0 ? static_cast<std::uint32_t>(st.base) : pick_interior_base(g);
  try {
    hr.beta = check_rough_starlike(g, ecost, base, 2 * st.cfg.ray_targets,
                                   st.cfg.seed + 23);
  } catch (const std::invalid_argument& e) {
    std::printf("note: %s\n", e.what());
  }
  double a = st.a_hat;
  if (a <= 0 && !f.trivial)
    a = estimate_uniformity_constant(g, f, 64, st.cfg.seed).a_hat;
  if (a > 0) hr.formula_bound = delta_formula(std::max(1.0, a));
  write_json(st.cfg.out_dir + "/hyperbolicity.json", hyperbolicity_json(hr));
  std::printf("hyper: %s delta_thin %s, delta_4pt %s, beta %s -> %s\n", label.c_str(),
              format_double(hr.delta_thin).c_str(), format_double(hr.delta_4pt).c_str(),
              format_double(hr.beta).c_str(), st.cfg.out_dir.c_str());

  if (!st.range.empty()) {
    if (st.cfg.model.empty())
      throw std::invalid_argument("--range sweeps need --model");
    const ModelSurface m = make_model(st.cfg.model);
    Series s;
    s.name = "delta_4pt";
    for (double R : parse_double_list(st.range)) {
      CliState tmp = st;
      tmp.cfg.rmin = st.cfg.rmin < st.cfg.rmax ? st.cfg.rmin : m.axes[0].lo;
      tmp.cfg.rmax = R;
      MetricGraph gr = graph_from(tmp);
      const SigmaField fr = field_from(tmp, gr);
      const std::vector<double> cr = costs_for(tmp, gr, fr, nullptr);
      s.x.push_back(R);
      s.y.push_back(four_point_delta(gr, cr, st.cfg.quads, st.cfg.seed + 22));
    }
    write_curve_csv(st.cfg.out_dir + "/delta_vs_range.csv", "rmax", "delta_4pt", s);
    write_svg_curve(st.cfg.out_dir + "/delta_vs_range.svg", {s},
                    "four-point delta vs chart range", "rmax", "delta_4pt");
    std::printf("range sweep: %zu points -> %s/delta_vs_range.csv\n", s.x.size(),
                st.cfg.out_dir.c_str());
  }
  return 0;
}

int run_cover(const CliState& st) {
  std::filesystem::create_directories(st.cfg.out_dir);
  MetricGraph g = graph_from(st);
  const SigmaField f = field_from(st, g);
  const double xi =
      st.cfg.xi > 0 ? st.cfg.xi
                    : (f.l_hat > 0 ? std::min(1e-3, 0.999 / (1000.0 * f.l_hat)) : 1e-3);
  const SigmaCover cover = build_cover(g, f, xi);
  const SmoothedField sm = smooth_sigma(f, cover, g);
  const SmoothingCheck sc = verify_smoothing(f, sm, g);
  dump_cover_csv(cover, st.cfg.out_dir + "/cover.csv");
  dump_smoothed_csv(sm, st.cfg.out_dir + "/smoothed.csv");
  write_json(st.cfg.out_dir + "/whitney.json", whitney_json(cover, sc));
  int rc = 0;
  auto fail = [&rc](const char* what) {
    std::printf("violation: %s\n", what);
    rc = 2;
  };
  if (!cover.cover_ok) fail("cover: some vertex is not covered");
  if (!cover.separation_ok) fail("cover: center separation violated");
  if (!cover.family_ok) fail("cover: families are not overlap-free");
  if (!sc.pass) fail("smoothing: degenerate smoothed field");
  std::printf("cover: %zu centers, %d families, c_hat %d, c1 %s, c2 %s -> %s\n",
              cover.centers.size(), cover.n_families, cover.c_hat,
              format_double(sc.c1).c_str(), format_double(sc.c2).c_str(),
              st.cfg.out_dir.c_str());
  return rc;
}

int run_boundary(const CliState& st) {
  std::filesystem::create_directories(st.cfg.out_dir);
  MetricGraph g = graph_from(st);
  const SigmaField f = field_from(st, g);
  const std::uint32_t base =
      st.base >= 0 ? static_cast<std::uint32_t>(st.base) : pick_interior_base(g);
  double threshold = st.cfg.threshold;
  if (threshold <= 0) {
    const WeightField w = make_weight(g, WeightKind::sigma, &f);
    const std::vector<double> ecost = edge_costs(g, w);
    const double dthin = estimate_thinness(g, ecost, 24, st.cfg.seed + 21);
    const double a = estimate_uniformity_constant(g, f, 64, st.cfg.seed).a_hat;
    threshold = 8.0 * a * a + 2.0 * dthin;
  }
  TargetSpec ts;
  ts.max_per_family = st.cfg.ray_targets;
  const RayBundle rb = trace_rays(g, f, base, ts, threshold);
  const BoundaryReport br = verify_boundary_map(rb, g);
  std::vector<GeodesicPath> paths;
  for (const auto& r : rb.rays) paths.push_back(r.path);
  dump_geodesics_csv(g, paths, st.cfg.out_dir + "/rays.csv");
  write_json(st.cfg.out_dir + "/boundary.json", boundary_json(br));
  for (const auto& n : br.notes) std::printf("note: %s\n", n.c_str());
  std::printf("boundary: %d classes (%d singular, %d infinity, %d mixed) at "
              "threshold %s -> %s\n",
              br.n_classes, br.sigma_classes, br.infinity_classes, br.mixed_classes,
              format_double(br.threshold).c_str(), st.cfg.out_dir.c_str());
  return br.pass ? 0 : 2;
}

int run_verify_cmd(const CliState& st) {
  const VerifyOutcome out = run_verify(st.cfg);
  for (const auto& n : out.notes) std::printf("note: %s\n", n.c_str());
  for (const auto& v : out.violations) std::printf("violation: %s\n", v.c_str());
  std::printf("verify: %s (%zu violations) -> %s/report.json\n",
              out.violations.empty() ? "PASS" : "FAIL", out.violations.size(),
              st.cfg.out_dir.c_str());
  return out.exit_code;
}

int run_report(const CliState& st) {
  const ojson j = emit_report(st.report_dir);
  std::printf("%s\n", j.dump(2).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sigma-gauge unfolding toolkit: discretized hypersurfaces, "
               "conformal gauges, and their certified invariants"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);
  CliState st;
  int rc = 0;

  auto* gen = app.add_subcommand("gen", "discretize a model or mesh into graph CSVs");
  add_input_flags(gen, st);
  add_seed_out(gen, st);
  gen->callback([&] { rc = run_gen(st); });

  auto* sigma = app.add_subcommand("sigma", "compute the gauge field and profile");
  add_input_flags(sigma, st);
  add_field_flags(sigma, st);
  add_seed_out(sigma, st);
  sigma->callback([&] { rc = run_sigma(st); });

  auto* metric = app.add_subcommand("metric", "weighted geodesics and the inequality suite");
  add_input_flags(metric, st);
  add_field_flags(metric, st);
  add_seed_out(metric, st);
  metric->add_option("--weight", st.weight, "intrinsic | quasi | sigma | smoothed");
  metric->add_option("--source", st.source, "dump geodesics from this vertex");
  metric->add_option("--targets", st.targets, "comma-separated target vertices");
  metric->add_option("--pairs", st.cfg.pairs, "suite sample pairs");
  metric->add_option("--tolerance", st.cfg.tolerance, "suite slack");
  metric->add_option("--a-hat", st.a_hat, "uniformity constant for the upper bound");
  metric->add_flag("--suite", st.suite, "run the four-clause inequality suite");
  metric->callback([&] { rc = run_metric(st); });

  auto* uniform = app.add_subcommand("uniform", "uniformity certificates and pipelines");
  add_input_flags(uniform, st);
  add_field_flags(uniform, st);
  add_seed_out(uniform, st);
  uniform->add_option("--samples", st.cfg.samples, "sampled geodesics for the estimate");
  uniform->add_option("--pair", st.pair, "certify the geodesic between \"p,q\"");
  uniform->add_option("--pipeline", st.pipeline, "build the hub pipeline between \"p,q\"");
  uniform->add_option("--t", st.t, "pipeline hub/waypoint depth parameter");
  uniform->add_option("--tau", st.tau, "pipeline corridor depth parameter");
  uniform->callback([&] { rc = run_uniform(st); });

  auto* hyper = app.add_subcommand("hyper", "hyperbolicity estimates and range sweeps");
  add_input_flags(hyper, st);
  add_field_flags(hyper, st);
  add_seed_out(hyper, st);
  hyper->add_option("--weight", st.weight, "intrinsic | quasi | sigma | smoothed");
  hyper->add_option("--triangles", st.cfg.triangles, "thin-triangle triples");
  hyper->add_option("--quads", st.cfg.quads, "four-point quadruples");
  hyper->add_option("--base", st.base, "starlikeness base vertex (default: auto)");
  hyper->add_option("--ray-targets", st.cfg.ray_targets, "ray surrogates for beta");
  hyper->add_option("--a-hat", st.a_hat, "uniformity constant for the formula bound");
  hyper->add_option("--range", st.range, "comma-separated rmax sweep (model inputs)");
  hyper->callback([&] { rc = run_hyper(st); });

  auto* cover = app.add_subcommand("cover", "gauge-adapted cover and smoothing");
  add_input_flags(cover, st);
  add_field_flags(cover, st);
  add_seed_out(cover, st);
  cover->add_option("--xi", st.cfg.xi, "cover scale (0 = auto from the Lipschitz bound)");
  cover->callback([&] { rc = run_cover(st); });

  auto* boundary = app.add_subcommand("boundary", "ray classes and the boundary map");
  add_input_flags(boundary, st);
  add_field_flags(boundary, st);
  add_seed_out(boundary, st);
  boundary->add_option("--base", st.base, "ray base vertex (default: auto)");
  boundary->add_option("--ray-targets", st.cfg.ray_targets, "rays per target family");
  boundary->add_option("--threshold", st.cfg.threshold,
                       "clustering threshold (0 = 8 a^2 + 2 delta_thin)");
  boundary->callback([&] { rc = run_boundary(st); });

  auto* verify = app.add_subcommand("verify", "run every suite and consolidate a report");
  add_input_flags(verify, st);
  add_field_flags(verify, st);
  add_seed_out(verify, st);
  verify->add_flag("--all", st.all, "run the full pipeline (the default)");
  verify->add_option("--pairs", st.cfg.pairs, "inequality-suite pairs");
  verify->add_option("--samples", st.cfg.samples, "uniformity geodesics");
  verify->add_option("--triangles", st.cfg.triangles, "thin-triangle triples");
  verify->add_option("--quads", st.cfg.quads, "four-point quadruples");
  verify->add_option("--ray-targets", st.cfg.ray_targets, "boundary rays per family");
  verify->add_option("--xi", st.cfg.xi, "cover scale override");
  verify->add_option("--threshold", st.cfg.threshold, "boundary threshold override");
  verify->add_option("--tolerance", st.cfg.tolerance, "discretization slack eps_h");
  verify->add_flag("--strict", st.cfg.strict, "assumed tolerances become a failure");
  verify->add_flag_callback("--no-evidence", [&st] { st.cfg.with_refinement = false; },
                            "skip the coarse-rebuild refinement evidence");
  verify->callback([&] { rc = run_verify_cmd(st); });

  auto* report = app.add_subcommand("report", "consolidate artifacts into report.json");
  report->add_option("--dir", st.report_dir, "artifact directory")->required();
  report->callback([&] { rc = run_report(st); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return rc;
}
