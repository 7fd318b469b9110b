#include "unfold/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "unfold/sentinel.hpp"

namespace unfold {

ojson json_num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

ojson axiom_json(const AxiomReport& r) {
  ojson j;
  j["S1"] = r.s1;
  j["S2"] = r.s2;
  j["S3"] = r.s3;
  j["S4"] = r.s4;
  j["pass"] = r.pass;
  j["alpha"] = json_num(r.alpha);
  j["l_hat"] = json_num(r.l_hat);
  j["s2_min_gap"] = json_num(r.s2_min_gap);
  j["s4_max_rel_dev"] = json_num(r.s4_max_rel_dev);
  j["s4_bitwise_mismatches"] = r.s4_bitwise_mismatches;
  j["violations"] = r.violations;
  j["notes"] = r.notes;
  return j;
}

ojson suite_json(const SuiteReport& r) {
  ojson j;
  j["n_pairs"] = r.n_pairs;
  j["n_eligible"] = r.n_eligible;
  j["tolerance"] = json_num(r.tolerance);
  j["a_hat"] = json_num(r.a_hat);
  j["l_hat"] = json_num(r.l_hat);
  j["seed"] = r.seed;
  ojson clauses = ojson::object();
  for (const ClauseStats& c : r.clauses) {
    ojson cj;
    cj["checked"] = c.checked;
    cj["violations"] = c.violations;
    cj["min_margin"] = json_num(c.min_margin);
    cj["mean_margin"] = json_num(c.mean_margin);
    cj["skipped"] = c.skipped;
    if (!c.note.empty()) cj["note"] = c.note;
    clauses[c.name] = cj;
  }
  j["clauses"] = clauses;
  if (!r.normalization_note.empty()) j["normalization_note"] = r.normalization_note;
  return j;
}

ojson sanity_json(const MetricSanity& r) {
  ojson j;
  j["symmetry_exact"] = r.symmetry_exact;
  j["triangle_checked"] = r.triangle_checked;
  j["triangle_violations"] = r.triangle_violations;
  j["worst_triangle_defect"] = json_num(r.worst_triangle_defect);
  return j;
}

ojson interpolation_json(const InterpolationReport& r) {
  ojson rows = ojson::array();
  for (const InterpolationRow& row : r.rows) {
    ojson rj;
    rj["alpha"] = json_num(row.alpha);
    rj["sup_dev_a"] = json_num(row.sup_dev_a);
    rj["sup_dev_inv_dist"] = json_num(row.sup_dev_inv_dist);
    rows.push_back(rj);
  }
  ojson j;
  j["rows"] = rows;
  j["monotone"] = r.monotone;
  j["worst_monotonicity_violation"] = json_num(r.worst_monotonicity_violation);
  return j;
}

ojson uniformity_json(const UniformityEstimate& r) {
  ojson j;
  j["a_hat"] = json_num(r.a_hat);
  j["q50"] = json_num(r.q50);
  j["q90"] = json_num(r.q90);
  j["n_samples"] = r.c_values.size();
  j["seed"] = r.seed;
  return j;
}

ojson certificate_json(const UniformityCertificate& c) {
  ojson j;
  j["endpoints"] = {c.curve.front(), c.curve.back()};
  j["n_vertices"] = c.curve.size();
  j["len_intrinsic"] = json_num(c.len_intrinsic);
  j["dist_intrinsic"] = json_num(c.dist_intrinsic);
  j["quasigeodesic_ratio"] = json_num(c.quasigeodesic_ratio);
  j["cone_ratio"] = json_num(c.cone_ratio);
  j["cone_witness"] = c.cone_witness;
  j["c_hat"] = json_num(c.c_hat);
  return j;
}

ojson pipeline_json(const PipelineResult& p) {
  ojson j;
  j["hub"] = p.hub;
  j["waypoints_p"] = p.waypoints_p;
  j["waypoints_q"] = p.waypoints_q;
  j["u"] = json_num(p.u);
  j["realized_pi"] = json_num(p.realized_pi);
  j["degenerate"] = p.degenerate;
  j["n_vertices"] = p.curve.size();
  return j;
}

ojson hyperbolicity_json(const HyperbolicityReport& r) {
  ojson j;
  j["weight"] = r.weight;
  j["n_triangles"] = r.n_triangles;
  j["n_quadruples"] = r.n_quadruples;
  j["delta_thin"] = json_num(r.delta_thin);
  j["delta_4pt"] = json_num(r.delta_4pt);
  j["beta"] = json_num(r.beta);
  j["formula_bound"] = json_num(r.formula_bound);
  j["seed"] = r.seed;
  return j;
}

ojson whitney_json(const SigmaCover& c, const SmoothingCheck& s) {
  ojson j;
  j["xi"] = json_num(c.xi);
  j["n_centers"] = c.centers.size();
  j["n_families"] = c.n_families;
  j["multiplicity"] = c.c_hat;
  j["cover_ok"] = c.cover_ok;
  j["separation_ok"] = c.separation_ok;
  j["family_ok"] = c.family_ok;
  ojson hist1 = ojson::object(), hist10 = ojson::object();
  {
    std::vector<std::size_t> h1, h10;
    for (const std::uint32_t k : c.aleph1) {
      if (k >= h1.size()) h1.resize(k + 1, 0);
      ++h1[k];
    }
    for (const std::uint32_t k : c.aleph10) {
      if (k >= h10.size()) h10.resize(k + 1, 0);
      ++h10[k];
    }
    for (std::size_t k = 0; k < h1.size(); ++k)
      if (h1[k]) hist1[std::to_string(k)] = h1[k];
    for (std::size_t k = 0; k < h10.size(); ++k)
      if (h10[k]) hist10[std::to_string(k)] = h10[k];
  }
  j["covering_histogram_r1"] = hist1;
  j["covering_histogram_r10"] = hist10;
  j["c1"] = json_num(s.c1);
  j["c2"] = json_num(s.c2);
  j["c3"] = json_num(s.c3);
  j["smoothing_pass"] = s.pass;
  return j;
}

ojson boundary_json(const BoundaryReport& r) {
  ojson j;
  j["classes"] = r.n_classes;
  j["sigma_classes"] = r.sigma_classes;
  j["infinity_classes"] = r.infinity_classes;
  j["mixed_classes"] = r.mixed_classes;
  j["sigma_components"] = r.sigma_components;
  j["surjective"] = r.surjective;
  j["injective"] = r.injective;
  j["infinity_unique"] = r.infinity_unique;
  j["ambiguous"] = r.ambiguous;
  j["pass"] = r.pass;
  j["threshold"] = json_num(r.threshold);
  j["class_to_component"] = r.class_to_component;
  j["notes"] = r.notes;
  return j;
}

void write_json(const std::string& file, const ojson& j) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("write_json: cannot write " + file);
  out << j.dump(2) << '\n';
}

ojson read_json(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("read_json: cannot read " + file);
  ojson j;
  in >> j;
  return j;
}

void write_profile_csv(const MetricGraph& g, const SigmaField& f,
                       const std::string& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("write_profile_csv: cannot write " + file);
  const std::size_t n = g.n();
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  const auto radial = [&](std::uint32_t v) {
    return g.chart_dim > 0 ? g.chart[v * g.chart_dim] * g.scale : g.dist_sigma(v);
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return radial(a) < radial(b); });
  out << "vertex,r,b,delta\n";
  for (const std::uint32_t v : order)
    out << v << ',' << format_double(radial(v)) << ',' << format_double(f.b[v])
        << ',' << format_double(f.delta[v]) << '\n';
}

namespace {

std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace

void write_svg_curve(const std::string& file, const std::vector<Series>& series,
                     const std::string& title, const std::string& xlabel,
                     const std::string& ylabel) {
  double xmin = kUnbounded, xmax = -kUnbounded, ymin = kUnbounded, ymax = -kUnbounded;
  for (const Series& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  if (!(xmin <= xmax)) {
    xmin = 0;
    xmax = 1;
    ymin = 0;
    ymax = 1;
  }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  const double W = 720, H = 440, L = 70, R = 20, T = 34, B = 50;
  const auto X = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
  const auto Y = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };
  static const char* palette[] = {"#1f6f8b", "#c0531f", "#3c8c46", "#7a4a9e"};

  std::ofstream out(file);
  if (!out) throw std::runtime_error("write_svg_curve: cannot write " + file);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
      << H << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
  out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
  out << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R
      << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\""
      << H - B << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = xmin + (xmax - xmin) * k / 4.0;
    const double yv = ymin + (ymax - ymin) * k / 4.0;
    out << "<text x=\"" << X(xv) << "\" y=\"" << H - B + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt_tick(xv) << "</text>\n";
    out << "<text x=\"" << L - 6 << "\" y=\"" << Y(yv) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt_tick(yv) << "</text>\n";
  }
  out << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
      << xlabel << "</text>\n";
  out << "<text x=\"16\" y=\"" << (T + H - B) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
      << "transform=\"rotate(-90 16 " << (T + H - B) / 2 << ")\">" << ylabel
      << "</text>\n";
  for (std::size_t si = 0; si < series.size(); ++si) {
    const Series& s = series[si];
    out << "<polyline fill=\"none\" stroke=\"" << palette[si % 4]
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      out << X(s.x[i]) << ',' << Y(s.y[i]) << ' ';
    }
    out << "\"/>\n";
    out << "<text x=\"" << W - R - 6 << "\" y=\"" << T + 16 + 16 * si
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" "
        << "fill=\"" << palette[si % 4] << "\">" << s.name << "</text>\n";
  }
  out << "</svg>\n";
}

void write_curve_csv(const std::string& file, const std::string& xname,
                     const std::string& yname, const Series& s) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("write_curve_csv: cannot write " + file);
  out << xname << ',' << yname << '\n';
  for (std::size_t i = 0; i < s.x.size(); ++i)
    out << format_double(s.x[i]) << ',' << format_double(s.y[i]) << '\n';
}

ojson emit_report(const std::string& dir) {
  namespace fs = std::filesystem;
  static const std::pair<const char*, const char*> sections[] = {
      {"run_config", "run_config.json"},
      {"axiom", "axioms.json"},
      {"lipschitz", "lipschitz.json"},
      {"interpolation", "interpolation.json"},
      {"inequalities", "suite.json"},
      {"metric_sanity", "sanity.json"},
      {"uniformity", "uniformity.json"},
      {"hyperbolicity", "hyperbolicity.json"},
      {"whitney", "whitney.json"},
      {"boundary", "boundary.json"},
      {"tolerances", "tolerances.json"},
      {"refinement_evidence", "refinement.json"},
  };
  ojson rep;
  bool any = false;
  for (const auto& [key, file] : sections) {
    const fs::path p = fs::path(dir) / file;
    if (fs::exists(p)) {
      rep[key] = read_json(p.string());
      any = true;
    } else {
      rep[key] = "absent";
    }
  }
  if (!any)
    throw std::runtime_error("emit_report: no suite artifacts found in " + dir);
  write_json((fs::path(dir) / "report.json").string(), rep);
  return rep;
}

}  // namespace unfold
