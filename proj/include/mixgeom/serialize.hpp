#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "mixgeom/admixture.hpp"
#include "mixgeom/asymptotics.hpp"
#include "mixgeom/choquet.hpp"
#include "mixgeom/hull.hpp"
#include "mixgeom/polya_tree.hpp"
#include "mixgeom/simplex.hpp"

namespace mixgeom {

using json = nlohmann::json;

/// Shortest decimal text that parses back to exactly `x`.
std::string format_double(double x);

std::string to_string(SamplerKind kind);
SamplerKind sampler_kind_from_string(const std::string& name);

void to_json(json& j, const ProbabilityVector& p);
ProbabilityVector probability_from_json(const json& j);
void to_json(json& j, const SamplerSpec& s);
void from_json(const json& j, SamplerSpec& s);
void to_json(json& j, const PointSet& ps);
void to_json(json& j, const ExtremalSet& e);
void from_json(const json& j, ExtremalSet& e);
void to_json(json& j, const GrowthCurve& c);
void to_json(json& j, const GrowthFit& f);
void to_json(json& j, const CLTReport& r);
void to_json(json& j, const GammaSequence& g);
void to_json(json& j, const HullLimitPoint& h);
void to_json(json& j, const ExchangeabilityBound& b);
void to_json(json& j, const SimplexFrame& f);
void to_json(json& j, const PolyaTreePosterior& p);
/// Rebuilds a posterior from its level-ordered count pairs.
void from_json(const json& j, PolyaTreePosterior& p);
void to_json(json& j, const TracePoint& t);
void to_json(json& j, const AdmixtureModel& m);  // summary, without Phi and F
void to_json(json& j, const RoundReport& r);
void to_json(json& j, const PipelineReport& r);

/// Matrix as CSV, one row per line, no header.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m);
/// Reads a numeric CSV matrix; every line must have the same width. Lines
/// starting with '#' and blank lines are skipped.
Eigen::MatrixXd read_matrix_csv(std::istream& in);

void write_points_csv(std::ostream& out, const PointSet& ps);
void write_growth_csv(std::ostream& out, const GrowthCurve& c);
/// One row per (n, replicate) with the vertex count.
void write_growth_replicates_csv(std::ostream& out, const GrowthCurve& c);
void write_clt_csv(std::ostream& out, const CLTReport& r);
void write_gamma_csv(std::ostream& out, const GammaSequence& g);
void write_hull_limit_csv(std::ostream& out, const std::vector<HullLimitPoint>& h);
void write_trace_csv(std::ostream& out, const std::vector<TracePoint>& t);

}  // namespace mixgeom
