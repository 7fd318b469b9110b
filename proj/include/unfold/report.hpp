#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "unfold/boundary.hpp"
#include "unfold/graph.hpp"
#include "unfold/hyperbolicity.hpp"
#include "unfold/metric.hpp"
#include "unfold/sigma.hpp"
#include "unfold/uniformity.hpp"
#include "unfold/whitney.hpp"

namespace unfold {

using ojson = nlohmann::ordered_json;

// JSON-safe number: infinities and NaN become strings, everything else a
// plain double (nlohmann would silently emit null otherwise).
ojson json_num(double v);

ojson axiom_json(const AxiomReport& r);
ojson suite_json(const SuiteReport& r);
ojson sanity_json(const MetricSanity& r);
ojson interpolation_json(const InterpolationReport& r);
ojson uniformity_json(const UniformityEstimate& r);
ojson certificate_json(const UniformityCertificate& c);
ojson pipeline_json(const PipelineResult& p);
ojson hyperbolicity_json(const HyperbolicityReport& r);
ojson whitney_json(const SigmaCover& c, const SmoothingCheck& s);
ojson boundary_json(const BoundaryReport& r);

// dump(2) + trailing newline; parent directories must exist.
void write_json(const std::string& file, const ojson& j);
ojson read_json(const std::string& file);

// vertex,r,b,delta rows sorted by the radial chart coordinate (falls back to
// the stored singular distance when the graph has no chart).
void write_profile_csv(const MetricGraph& g, const SigmaField& f,
                       const std::string& file);

struct Series {
  std::string name;
  std::vector<double> x, y;
};

// Minimal self-contained polyline plot; axes, tick labels, one polyline per
// series. Deterministic output bytes.
void write_svg_curve(const std::string& file, const std::vector<Series>& series,
                     const std::string& title, const std::string& xlabel,
                     const std::string& ylabel);

void write_curve_csv(const std::string& file, const std::string& xname,
                     const std::string& yname, const Series& s);

// Collects the per-suite artifacts present in dir into report.json with the
// fixed section order; sections without a file are marked "absent". Errors
// when nothing is there to collect.
ojson emit_report(const std::string& dir);

}  // namespace unfold
