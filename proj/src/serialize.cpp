#include "mixgeom/serialize.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "mixgeom/errors.hpp"

namespace mixgeom {

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw NumericFailure("cannot format number");
  return std::string(buf, ptr);
}

std::string to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::uniform: return "uniform";
    case SamplerKind::dirichlet: return "dirichlet";
    case SamplerKind::point_mass_mixture: return "point-mass-mixture";
  }
  return "unknown";
}

SamplerKind sampler_kind_from_string(const std::string& name) {
  if (name == "uniform") return SamplerKind::uniform;
  if (name == "dirichlet") return SamplerKind::dirichlet;
  if (name == "point-mass-mixture") return SamplerKind::point_mass_mixture;
  throw InvalidArgument("unknown sampler kind \"" + name + "\"");
}

void to_json(json& j, const ProbabilityVector& p) { j = p.coords(); }

ProbabilityVector probability_from_json(const json& j) {
  return ProbabilityVector::validate(j.get<std::vector<double>>());
}

void to_json(json& j, const SamplerSpec& s) {
  j = json{{"kind", to_string(s.kind)}, {"J", s.J}, {"seed", s.seed}};
  if (s.kind == SamplerKind::dirichlet) j["alpha"] = s.alpha;
  if (s.kind == SamplerKind::point_mass_mixture) {
    j["atoms"] = s.atoms;
    j["weights"] = s.weights;
  }
}

void from_json(const json& j, SamplerSpec& s) {
  try {
    const auto kind = sampler_kind_from_string(j.at("kind").get<std::string>());
    const auto seed = j.at("seed").get<std::uint64_t>();
    switch (kind) {
      case SamplerKind::uniform:
        s = SamplerSpec::uniform(j.at("J").get<std::size_t>(), seed);
        break;
      case SamplerKind::dirichlet:
        s = SamplerSpec::dirichlet(j.at("alpha").get<std::vector<double>>(), seed);
        break;
      case SamplerKind::point_mass_mixture: {
        const auto weights = j.at("weights").get<std::vector<double>>();
        std::vector<ProbabilityVector> atoms;
        for (const auto& a : j.at("atoms")) atoms.push_back(probability_from_json(a));
        s = SamplerSpec::point_mass_mixture(std::move(atoms), weights, seed);
        break;
      }
    }
    if (j.contains("J") && j.at("J").get<std::size_t>() != s.J) {
      throw InvalidArgument("sampler J does not match its parameters");
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed sampler spec: ") + e.what());
  }
}

void to_json(json& j, const PointSet& ps) {
  j = json::array();
  for (Eigen::Index k = 0; k < ps.size(); ++k) {
    const Eigen::VectorXd p = ps.point(k);
    j.push_back(std::vector<double>(p.data(), p.data() + p.size()));
  }
}

void to_json(json& j, const ExtremalSet& e) {
  j = json{{"indices", e.indices}, {"f0", e.f0}};
}

void from_json(const json& j, ExtremalSet& e) {
  e.indices = j.at("indices").get<std::vector<std::size_t>>();
  e.f0 = j.at("f0").get<std::size_t>();
}

void to_json(json& j, const GrowthCurve& c) {
  j = json{{"J", c.J}, {"points", json::array()}};
  for (const auto& p : c.points) {
    j["points"].push_back({{"n", p.n},
                           {"mean_f0", p.mean_f0},
                           {"var_f0", p.var_f0},
                           {"reps", p.reps},
                           {"std_error", p.std_error}});
  }
}

void to_json(json& j, const GrowthFit& f) {
  j = json{{"c_hat", f.c_hat},         {"p_hat", f.p_hat},
           {"r_squared", f.r_squared}, {"residuals", f.residuals},
           {"p_ambient", f.p_ambient}, {"p_intrinsic", f.p_intrinsic}};
}

void to_json(json& j, const CLTReport& r) {
  j = json{{"J", r.J},           {"n", r.n},         {"reps", r.reps},
           {"mean_f0", r.mean_f0}, {"sd_f0", r.sd_f0}, {"ks_stat", r.ks_stat}};
}

void to_json(json& j, const GammaSequence& g) {
  j = json{{"J", g.J}, {"points", json::array()}};
  for (const auto& p : g.points) {
    j["points"].push_back({{"n", p.n},
                           {"mean_t", p.mean_t},
                           {"mean_m", p.mean_m},
                           {"gamma", p.gamma},
                           {"std_error", p.std_error}});
  }
}

void to_json(json& j, const HullLimitPoint& h) {
  j = json{{"n", h.n}, {"hausdorff", h.hausdorff}};
}

void to_json(json& j, const ExchangeabilityBound& b) {
  j = json{{"m", b.m}, {"L", b.L}, {"beta", b.beta}, {"bound", b.bound}};
}

void to_json(json& j, const SimplexFrame& f) {
  j = json{{"vertices", f.vertices()}, {"condition", f.condition()}};
}

void to_json(json& j, const PolyaTreePosterior& p) {
  json levels = json::array();
  for (const auto& level : p.counts) {
    json pairs = json::array();
    for (std::size_t c = 0; c + 1 < level.size(); c += 2) {
      pairs.push_back({level[c], level[c + 1]});
    }
    levels.push_back(std::move(pairs));
  }
  j = json{{"alpha", p.params.alpha},
           {"depth", p.params.depth},
           {"level_alpha", p.params.level_alpha},
           {"embedding_depth", p.depth},
           {"k", p.k},
           {"levels", std::move(levels)}};
}

void from_json(const json& j, PolyaTreePosterior& p) {
  try {
    p = PolyaTreePosterior{};
    p.params = build_params(j.at("alpha").get<double>(), j.at("depth").get<int>());
    p.depth = j.at("embedding_depth").get<int>();
    p.k = j.at("k").get<std::uint64_t>();
    const auto& levels = j.at("levels");
    if (p.depth < 0 || p.depth > p.params.depth ||
        levels.size() != static_cast<std::size_t>(p.depth)) {
      throw InvalidArgument("posterior levels do not match its depth");
    }
    for (std::size_t l = 0; l < levels.size(); ++l) {
      const auto& pairs = levels[l];
      if (pairs.size() != (std::size_t{1} << l)) {
        throw InvalidArgument("level " + std::to_string(l + 1) + " has the wrong node count");
      }
      std::vector<std::uint64_t> counts;
      for (const auto& pair : pairs) {
        const auto v = pair.get<std::vector<std::uint64_t>>();
        if (v.size() != 2) throw InvalidArgument("count pairs must have two entries");
        counts.push_back(v[0]);
        counts.push_back(v[1]);
      }
      p.counts.push_back(std::move(counts));
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed posterior: ") + e.what());
  }
}

void to_json(json& j, const TracePoint& t) {
  j = json{{"k", t.k}, {"sup_error", t.sup_error}, {"rate", t.rate}, {"ratio", t.ratio}};
}

void to_json(json& j, const AdmixtureModel& m) {
  j = json{{"components", m.components()},
           {"loglik", m.loglik},
           {"iterations", m.iterations},
           {"restart", m.restart},
           {"restart_logliks", m.restart_logliks},
           {"smoothing", m.smoothing},
           {"max_loglik_drop", m.max_loglik_drop},
           {"max_mass_error", m.max_mass_error}};
}

void to_json(json& j, const RoundReport& r) {
  j = json{{"L", r.L},
           {"loglik", r.loglik},
           {"iterations", r.iterations},
           {"max_loglik_drop", r.max_loglik_drop},
           {"pca_dim", r.pca_dim},
           {"explained_variance_ratio", r.explained_variance_ratio},
           {"extreme_components", r.extreme_components},
           {"M", r.M}};
}

void to_json(json& j, const PipelineReport& r) {
  j = json{{"initial_L", r.initial_L},
           {"pca_dim", r.pca_dim},
           {"rounds", r.rounds},
           {"final_model", r.final_model},
           {"final_M", r.final_M},
           {"converged", r.converged},
           {"final_identifiable", r.final_identifiable},
           {"n_terms", r.n_terms},
           {"kept_terms", r.kept_terms},
           {"warnings", r.warnings},
           {"choquet_note", r.choquet_note}};
  if (!r.choquet.empty()) j["choquet"] = r.choquet;
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      if (k) out << ',';
      out << format_double(m(i, k));
    }
    out << '\n';
  }
}

Eigen::MatrixXd read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      const auto first = cell.find_first_not_of(" \t");
      const auto last = cell.find_last_not_of(" \t");
      if (first == std::string::npos) {
        throw InvalidArgument("line " + std::to_string(line_no) + ": empty field");
      }
      const std::string_view text(cell.data() + first, last - first + 1);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw InvalidArgument("line " + std::to_string(line_no) + ": \"" +
                              std::string(text) + "\" is not a number");
      }
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InvalidArgument("line " + std::to_string(line_no) + ": expected " +
                            std::to_string(rows.front().size()) + " fields");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InvalidArgument("CSV holds no rows");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < rows[i].size(); ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
    }
  }
  return m;
}

void write_points_csv(std::ostream& out, const PointSet& ps) {
  write_matrix_csv(out, ps.columns().transpose());
}

void write_growth_csv(std::ostream& out, const GrowthCurve& c) {
  out << "n,mean_f0,var_f0,reps,std_error\n";
  for (const auto& p : c.points) {
    out << p.n << ',' << format_double(p.mean_f0) << ',' << format_double(p.var_f0) << ','
        << p.reps << ',' << format_double(p.std_error) << '\n';
  }
}

void write_growth_replicates_csv(std::ostream& out, const GrowthCurve& c) {
  out << "n,replicate,f0\n";
  for (const auto& p : c.points) {
    for (std::size_t r = 0; r < p.f0.size(); ++r) out << p.n << ',' << r << ',' << p.f0[r] << '\n';
  }
}

void write_clt_csv(std::ostream& out, const CLTReport& r) {
  out << "replicate,standardized\n";
  for (std::size_t k = 0; k < r.standardized.size(); ++k) {
    out << k << ',' << format_double(r.standardized[k]) << '\n';
  }
}

void write_gamma_csv(std::ostream& out, const GammaSequence& g) {
  out << "n,mean_t,mean_m,gamma,std_error\n";
  for (const auto& p : g.points) {
    out << p.n << ',' << format_double(p.mean_t) << ',' << format_double(p.mean_m) << ','
        << format_double(p.gamma) << ',' << format_double(p.std_error) << '\n';
  }
}

void write_hull_limit_csv(std::ostream& out, const std::vector<HullLimitPoint>& h) {
  out << "n,hausdorff\n";
  for (const auto& p : h) out << p.n << ',' << format_double(p.hausdorff) << '\n';
}

void write_trace_csv(std::ostream& out, const std::vector<TracePoint>& t) {
  out << "k,sup_error,rate,ratio\n";
  for (const auto& p : t) {
    out << p.k << ',' << format_double(p.sup_error) << ',' << format_double(p.rate) << ','
        << format_double(p.ratio) << '\n';
  }
}

}  // namespace mixgeom
