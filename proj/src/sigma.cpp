#include "unfold/sigma.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "unfold/dijkstra.hpp"
#include "unfold/parallel.hpp"
#include "unfold/sentinel.hpp"

namespace unfold {

using ordered_json = nlohmann::ordered_json;

namespace {

std::vector<double> default_ladder_base(const MetricGraph& g, double q) {
  double min_pos = kUnbounded, max_a = 0;
  for (double a : g.a_base) {
    if (a > 0) min_pos = std::min(min_pos, a);
    max_a = std::max(max_a, a);
  }
  const double lo = min_pos / 4.0;
  const double hi = 4.0 * max_a;
  std::vector<double> ladder{lo};
  while (ladder.back() < hi) ladder.push_back(ladder.back() * q);
  return ladder;
}

}  // namespace

SigmaField compute_sigma_field(const MetricGraph& g, const SigmaOptions& opt) {
  if (!(opt.alpha > 0))
    throw std::invalid_argument("compute_sigma_field: alpha must be positive");
  if (g.n() == 0) throw std::invalid_argument("compute_sigma_field: empty graph");

  SigmaField f;
  f.alpha = opt.alpha;
  f.ladder_q = opt.ladder_q;
  f.graph_id = g.id;

  if (g.totally_geodesic) {
    // no tubes: the transform of the zero field is zero
    f.trivial = true;
    f.b.assign(g.n(), 0.0);
    f.delta.assign(g.n(), kUnbounded);
    f.l_hat = 0.0;
    return f;
  }
  double max_a = 0;
  for (double a : g.a_base) max_a = std::max(max_a, a);
  if (!(max_a > 0))
    throw std::runtime_error(
        "compute_sigma_field: shape values vanish identically on a graph not "
        "flagged totally geodesic (inconsistent input)");

  const double alpha = opt.alpha;
  std::vector<double> ladder_base =
      opt.ladder_base.empty() ? default_ladder_base(g, opt.ladder_q)
                              : opt.ladder_base;
  if (!std::is_sorted(ladder_base.begin(), ladder_base.end()))
    throw std::invalid_argument("compute_sigma_field: ladder must ascend");

  const std::size_t n = g.n();
  const std::size_t levels = ladder_base.size();

  // Tube sweeps, one per ladder value, independent and run concurrently.
  // A vertex is a member of level i when dist(x, {a >= c_i}) <= alpha/c_i
  // in base units (the scale factor cancels from both sides).
  std::vector<std::vector<std::uint8_t>> member(levels);
  {
    const unsigned workers = std::max(1u, worker_count());
    std::vector<std::unique_ptr<Sweeper>> scratch(workers);
    parallel_for(levels, [&](std::size_t li, unsigned w) {
      if (!scratch[w]) scratch[w] = std::make_unique<Sweeper>(n);
      const double c = ladder_base[li];
      std::vector<Source> src;
      for (std::size_t v = 0; v < n; ++v)
        if (g.a_base[v] >= c) src.push_back({static_cast<std::uint32_t>(v), 0.0});
      auto& bits = member[li];
      bits.assign(n, 0);
      if (src.empty()) return;
      const double cutoff = alpha / c;
      scratch[w]->run(g, g.elen_base.data(), src.data(), src.size(), cutoff,
                      [&](std::uint32_t v, double) {
                        bits[v] = 1;
                        return true;
                      });
    });
  }

  std::vector<double> b_ladder_base(n, 0.0);
  for (std::size_t li = 0; li < levels; ++li)
    for (std::size_t v = 0; v < n; ++v)
      if (member[li][v]) b_ladder_base[v] = ladder_base[li];

  std::vector<double> b_base = b_ladder_base;
  if (opt.refine) {
    // Exact supremum via local truncated sweeps: future settles at distance
    // d' >= d can contribute at most alpha/d' <= current bound, so the walk
    // stops as soon as alpha/d drops below the best witness value.
    const unsigned workers = std::max(1u, worker_count());
    std::vector<std::unique_ptr<Sweeper>> scratch(workers);
    parallel_for(n, [&](std::size_t x, unsigned w) {
      if (!scratch[w]) scratch[w] = std::make_unique<Sweeper>(n);
      double best = std::max(g.a_base[x], b_ladder_base[x]);
      if (!(best > 0)) {
        // below the ladder floor: bound by the largest value reachable at all
        best = 0;
      }
      Source src{static_cast<std::uint32_t>(x), 0.0};
      const double cutoff = best > 0 ? alpha / best : kUnbounded;
      scratch[w]->run(g, g.elen_base.data(), &src, 1, cutoff,
                      [&](std::uint32_t v, double d) {
                        if (d > 0) {
                          if (alpha / d <= best) return false;
                          const double cand = std::min(g.a_base[v], alpha / d);
                          if (cand > best) best = cand;
                        } else if (g.a_base[v] > best) {
                          best = g.a_base[v];
                        }
                        return true;
                      });
      b_base[x] = best;
    });
    f.refined = true;
  }

  const double s = g.scale;
  f.b.resize(n);
  f.delta.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    f.b[v] = b_base[v] / s;
    f.delta[v] = f.b[v] > 0 ? 1.0 / f.b[v] : kUnbounded;
  }
  f.b_ladder.resize(n);
  for (std::size_t v = 0; v < n; ++v) f.b_ladder[v] = b_ladder_base[v] / s;
  f.ladder.resize(levels);
  for (std::size_t li = 0; li < levels; ++li) f.ladder[li] = ladder_base[li] / s;
  if (opt.keep_membership) f.membership = std::move(member);

  f.l_hat = rescaled_slope(g, f);
  return f;
}

double rescaled_slope(const MetricGraph& g, const SigmaField& f) {
  if (f.delta.size() != g.n())
    throw std::invalid_argument("rescaled_slope: field/graph size mismatch");
  double lh = 0;
  for (std::size_t e = 0; e < g.m(); ++e) {
    const double du = f.delta[g.eu[e]], dv = f.delta[g.ev[e]];
    if (is_unbounded(du) || is_unbounded(dv)) continue;
    lh = std::max(lh, std::abs(du - dv) / g.edge_length(e));
  }
  return lh;
}

void dump_sigma_csv(const SigmaField& f, const std::string& dir,
                    const std::string& stem) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir + "/" + stem + ".csv");
    if (!out) throw std::runtime_error("dump_sigma_csv: cannot write " + stem + ".csv");
    out << "vertex,b,delta\n";
    for (std::size_t v = 0; v < f.b.size(); ++v)
      out << v << ',' << format_double(f.b[v]) << ',' << format_double(f.delta[v])
          << '\n';
  }
  ordered_json meta;
  meta["alpha"] = f.alpha;
  meta["ladder_q"] = f.ladder_q;
  meta["ladder"] = f.ladder;
  meta["refined"] = f.refined;
  meta["trivial"] = f.trivial;
  meta["l_hat"] = f.l_hat;
  meta["graph_id"] = f.graph_id;
  std::ofstream mout(dir + "/" + stem + ".meta.json");
  mout << meta.dump(2) << '\n';
}

SigmaField load_sigma_csv(const std::string& dir, const std::string& stem) {
  SigmaField f;
  std::ifstream in(dir + "/" + stem + ".csv");
  if (!in) throw std::runtime_error("load_sigma_csv: missing " + stem + ".csv");
  std::string line;
  if (!std::getline(in, line) || line != "vertex,b,delta")
    throw std::runtime_error("load_sigma_csv: bad header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto c1 = line.find(',');
    auto c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw std::runtime_error("load_sigma_csv: bad row: " + line);
    f.b.push_back(parse_double(line.substr(c1 + 1, c2 - c1 - 1)));
    f.delta.push_back(parse_double(line.substr(c2 + 1)));
  }
  std::ifstream min(dir + "/" + stem + ".meta.json");
  if (min) {
    ordered_json meta = ordered_json::parse(min);
    f.alpha = meta.value("alpha", 1.0);
    f.ladder_q = meta.value("ladder_q", 0.0);
    f.refined = meta.value("refined", false);
    f.trivial = meta.value("trivial", false);
    f.l_hat = meta.value("l_hat", 0.0);
    f.graph_id = meta.value("graph_id", std::string());
    if (meta.contains("ladder"))
      f.ladder = meta["ladder"].get<std::vector<double>>();
  }
  return f;
}

AxiomReport verify_axioms(const MetricGraph& g, const SigmaField& f,
                          const AxiomOptions& opt) {
  AxiomReport r;
  r.alpha = f.alpha;
  r.l_hat = f.l_hat;
  const std::size_t n = g.n();
  if (f.b.size() != n)
    throw std::invalid_argument("verify_axioms: field/graph size mismatch");

  // S1: vanishing transform exactly on totally geodesic input
  if (g.totally_geodesic) {
    bool zero = f.trivial;
    for (std::size_t v = 0; v < n && zero; ++v)
      zero = f.b[v] == 0.0 && is_unbounded(f.delta[v]);
    r.s1 = zero;
    if (!zero) r.violations.push_back("S1: nonzero b on a totally geodesic graph");
  } else {
    bool positive = !f.trivial;
    for (std::size_t v = 0; v < n && positive; ++v) positive = f.b[v] > 0.0;
    r.s1 = positive;
    if (!positive)
      r.violations.push_back("S1: b vanishes somewhere on a curved graph");
  }

  // S2: domination b >= a (exact for refined fields, ladder slack otherwise)
  // plus the divergence trend toward the singular set.
  {
    const double slack_rel =
        f.refined || f.trivial ? 0.0 : std::max(0.0, f.ladder_q - 1.0);
    double min_gap = kUnbounded;
    bool ok = true;
    for (std::size_t v = 0; v < n; ++v) {
      if (g.a_unreliable[v]) continue;
      const double gap = f.b[v] - g.avalue(v);
      min_gap = std::min(min_gap, gap);
      if (gap < -slack_rel * std::max(f.b[v], g.avalue(v))) ok = false;
    }
    r.s2_min_gap = is_unbounded(min_gap) ? 0.0 : min_gap;
    if (!ok) r.violations.push_back("S2: b < a beyond ladder slack");
    bool trend_ok = true;
    if (g.has_sigma && !f.trivial) {
      // min b over dyadic distance bands must not decrease toward sigma
      double dmin = kUnbounded, dmax = 0;
      for (std::size_t v = 0; v < n; ++v) {
        dmin = std::min(dmin, g.dist_sigma(v));
        dmax = std::max(dmax, g.dist_sigma(v));
      }
      std::vector<double> band_min;
      for (double lo = dmin; lo < dmax; lo *= 2.0) {
        double mn = kUnbounded;
        for (std::size_t v = 0; v < n; ++v) {
          const double d = g.dist_sigma(v);
          if (d >= lo && d < lo * 2.0) mn = std::min(mn, f.b[v]);
        }
        if (!is_unbounded(mn)) band_min.push_back(mn);
      }
      for (std::size_t i = 0; i + 1 < band_min.size(); ++i) {
        if (band_min[i] < band_min[i + 1] * (1.0 - opt.trend_slack)) {
          trend_ok = false;
          break;
        }
      }
      if (!trend_ok)
        r.violations.push_back("S2: b fails to diverge toward the singular set");
    }
    r.s2 = ok && trend_ok;
  }

  // S3: Lipschitz bound on delta
  if (f.trivial) {
    r.s3 = true;
  } else {
    const double bound = (1.0 / f.alpha) * (1.0 + opt.s3_slack);
    r.s3 = f.l_hat <= bound;
    if (!r.s3) {
      char buf[128];
      std::snprintf(buf, sizeof(buf), "S3: l_hat %.6g exceeds %.6g", f.l_hat, bound);
      r.violations.push_back(buf);
    }
  }

  // S4: anticommutation with scalings, exact on the base representation,
  // plus the blow-up fixed point on cone models.
  if (f.trivial) {
    r.s4 = true;
    r.notes.push_back("S4: vacuous on a trivial field");
  } else {
    int mismatches = 0;
    SigmaOptions so;
    so.alpha = f.alpha;
    so.ladder_q = f.ladder_q;
    so.refine = f.refined;
    // On a unit-scale graph the transported values are the same double
    // divisions, so equality is exact; a pre-scaled input compounds two
    // divisions and is compared at a few ulps instead.
    const bool exact = g.scale == 1.0;
    auto matches = [&](double got, double want_num, double lambda) {
      const double want = want_num / lambda;
      if (exact) return got == want;
      return std::abs(got - want) <= 4e-15 * std::abs(want);
    };
    for (double lambda : opt.lambdas) {
      MetricGraph gs = scale_graph(g, lambda);
      SigmaField fs = compute_sigma_field(gs, so);
      if (fs.ladder.size() != f.ladder.size()) {
        ++mismatches;
        continue;
      }
      for (std::size_t i = 0; i < f.ladder.size(); ++i)
        if (!matches(fs.ladder[i], f.ladder[i], lambda)) ++mismatches;
      for (std::size_t v = 0; v < n; ++v)
        if (!matches(fs.b[v], f.b[v], lambda)) ++mismatches;
    }
    r.s4_bitwise_mismatches = mismatches;
    bool blowup_ok = true;
    if (opt.model != nullptr &&
        (opt.model->kind == ModelKind::cone_over_sphere_products ||
         opt.model->kind == ModelKind::clifford_cone)) {
      // rebuild the same physical window on the blown-up model and compare
      const ModelSurface& m = *opt.model;
      double r_lo = kUnbounded, r_hi = 0;
      for (std::size_t v = 0; v < n; ++v) {
        const double rr = g.chart[v * g.chart_dim];
        r_lo = std::min(r_lo, rr);
        r_hi = std::max(r_hi, rr);
      }
      const double lam = opt.blowup_lambda;
      std::size_t res = 0;  // angular node count from the original grid
      {
        double first_r = g.chart[0];
        for (std::size_t v = 0; v < n; ++v)
          if (g.chart[v * g.chart_dim] == first_r) ++res;
        if (g.chart_dim == 3) res = static_cast<std::size_t>(std::lround(std::sqrt(double(res))));
      }
      MetricGraph gb = build_cone_graph(scale_model(m, lam), r_lo / lam,
                                        r_hi / lam, static_cast<int>(res));
      if (gb.n() != n) {
        blowup_ok = false;
        r.violations.push_back("S4: blow-up rebuild produced a different grid");
      } else {
        SigmaField fb = compute_sigma_field(gb, so);
        double worst = 0;
        for (std::size_t v = 0; v < n; ++v) {
          const double rel = std::abs(fb.b[v] - f.b[v]) / f.b[v];
          worst = std::max(worst, rel);
        }
        r.s4_max_rel_dev = worst;
        const double tol = f.refined ? opt.s4_rel_tol
                                     : std::max(opt.s4_rel_tol, f.ladder_q - 1.0);
        if (worst > tol) {
          blowup_ok = false;
          char buf[128];
          std::snprintf(buf, sizeof(buf),
                        "S4: blow-up fixed point deviates by %.3g (tol %.3g)",
                        worst, tol);
          r.violations.push_back(buf);
        }
      }
    } else {
      r.notes.push_back("S4: blow-up rebuild skipped (no cone model supplied)");
    }
    r.s4 = mismatches == 0 && blowup_ok;
    if (mismatches > 0)
      r.violations.push_back("S4: transported field not bit-identical");
  }

  r.pass = r.s1 && r.s2 && r.s3 && r.s4;
  return r;
}

InterpolationReport interpolation_sweep(const MetricGraph& g,
                                        const std::vector<double>& alphas,
                                        const std::vector<std::uint32_t>& band,
                                        const SigmaOptions& base_opt) {
  if (band.empty())
    throw std::invalid_argument("interpolation_sweep: empty band");
  for (auto v : band)
    if (g.near_sigma_ring[v] || g.outer_truncation[v])
      throw std::invalid_argument(
          "interpolation_sweep: band touches a boundary ring");
  std::vector<double> sorted_alphas = alphas;
  std::sort(sorted_alphas.begin(), sorted_alphas.end());

  InterpolationReport rep;
  rep.monotone = true;
  std::vector<double> prev_b;
  for (double alpha : sorted_alphas) {
    SigmaOptions opt = base_opt;
    opt.alpha = alpha;
    opt.ladder_base.clear();
    SigmaField f = compute_sigma_field(g, opt);
    InterpolationRow row;
    row.alpha = alpha;
    for (auto v : band) {
      row.sup_dev_a = std::max(row.sup_dev_a, std::abs(f.b[v] - g.avalue(v)));
      const double ds = g.dist_sigma(v);
      if (!is_unbounded(ds))
        row.sup_dev_inv_dist = std::max(row.sup_dev_inv_dist,
                                        std::abs(f.b[v] / alpha - 1.0 / ds));
    }
    rep.rows.push_back(row);
    if (!prev_b.empty()) {
      const double slack = f.refined ? 1e-12 : (f.ladder_q - 1.0);
      for (std::size_t v = 0; v < g.n(); ++v) {
        const double excess = prev_b[v] - f.b[v] * (1.0 + slack);
        if (excess > 0) {
          rep.monotone = false;
          rep.worst_monotonicity_violation =
              std::max(rep.worst_monotonicity_violation, excess);
        }
      }
    }
    prev_b = std::move(f.b);
  }
  return rep;
}

HarnackCheck harnack_band_check(const MetricGraph& g, const SigmaField& f,
                                double eps) {
  HarnackCheck hc;
  if (f.trivial || f.l_hat <= 0) return hc;
  for (std::size_t e = 0; e < g.m(); ++e) {
    const std::uint32_t u = g.eu[e], v = g.ev[e];
    const double len = g.edge_length(e);
    for (int dir = 0; dir < 2; ++dir) {
      const double bu = dir == 0 ? f.b[u] : f.b[v];
      const double bv = dir == 0 ? f.b[v] : f.b[u];
      if (!(bu > 0)) continue;
      if (len > 1.0 / (2.0 * f.l_hat * bu)) continue;
      ++hc.eligible_edges;
      const double lhs = std::abs(bv / bu - 1.0);
      const double rhs = 2.0 * f.l_hat * bu * len * (1.0 + eps);
      if (lhs > rhs) {
        ++hc.violations;
        hc.worst_margin = std::min(hc.worst_margin, rhs - lhs);
      }
    }
  }
  return hc;
}

}  // namespace unfold
