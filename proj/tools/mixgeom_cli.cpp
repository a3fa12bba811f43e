#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "manifest.hpp"
#include "mixgeom/admixture.hpp"
#include "mixgeom/asymptotics.hpp"
#include "mixgeom/choquet.hpp"
#include "mixgeom/corpus.hpp"
#include "mixgeom/errors.hpp"
#include "mixgeom/polya_tree.hpp"
#include "mixgeom/serialize.hpp"

#ifndef MIXGEOM_VERSION
#define MIXGEOM_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using namespace mixgeom;
using mixgeom::cli::FileDigest;
using mixgeom::cli::RunManifest;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

const char* kFormats = R"(
Formats:
  CSV outputs have a header row (except matrices) and one record per line.
  Numbers are printed in the shortest form that parses back to the same
  double. JSON outputs hold the same data plus fitted summaries.
  Every run writes manifest.json to the output directory: subcommand,
  resolved config, seed, version and SHA-256 digests of inputs and outputs.
  `mixgeom replay --manifest <file>` re-runs it and compares digests.
  Samplers: "uniform", "dirichlet:a1,a2,..." or a JSON spec such as
  {"kind":"uniform","J":3,"seed":42}.
  Corpora use the UCI bag-of-words layout: lines D, W, NNZ, then
  "docID wordID count" with 1-indexed ids.
  The default output directory is $MIXGEOM_OUT_DIR, else the current one.)";

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* what) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::istringstream cell(item);
    T v{};
    if (!(cell >> v) || !(cell >> std::ws).eof()) {
      throw InvalidArgument(std::string("cannot parse ") + what + " \"" + item + "\"");
    }
    out.push_back(v);
  }
  if (out.empty()) throw InvalidArgument(std::string(what) + " list is empty");
  return out;
}

std::string join(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + format_double(xs[i]);
  return s;
}

SamplerSpec parse_sampler(const std::string& text, std::size_t J) {
  if (text == "uniform") return SamplerSpec::uniform(J, 0);
  if (text.rfind("dirichlet:", 0) == 0) {
    return SamplerSpec::dirichlet(parse_list<double>(text.substr(10), "Dirichlet parameter"), 0);
  }
  if (!text.empty() && text.front() == '{') {
    try {
      return json::parse(text).get<SamplerSpec>();
    } catch (const json::exception& e) {
      throw InvalidArgument(std::string("malformed sampler JSON: ") + e.what());
    }
  }
  throw InvalidArgument("unknown sampler \"" + text + "\"");
}

// Where a command writes, plus the digests it leaves behind.
struct Context {
  fs::path out_dir;
  unsigned threads = 1;
  std::vector<FileDigest> inputs;
  std::vector<fs::path> outputs;

  fs::path file(const std::string& name) const { return out_dir / name; }

  std::ofstream open(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write " + path.string());
    outputs.push_back(path);
    return out;
  }

  void write_json(const fs::path& path, const json& j) { open(path) << j.dump(2) << '\n'; }

  void input(const fs::path& path) { inputs.push_back({path.string(), cli::sha256_file(path)}); }
};

using Runner = std::function<void(const json&, Context&)>;

void run_growth(const json& cfg, Context& ctx) {
  ExperimentConfig ec;
  ec.J = cfg.at("J");
  ec.n_grid = cfg.at("n_grid").get<std::vector<std::size_t>>();
  ec.reps = cfg.at("reps");
  ec.sampler = cfg.at("sampler").get<SamplerSpec>();
  ec.seed = cfg.at("seed");
  ec.threads = ctx.threads;
  const auto curve = growth_experiment(ec);
  {
    auto out = ctx.open(ctx.file("growth.csv"));
    write_growth_csv(out, curve);
  }
  {
    auto out = ctx.open(ctx.file("growth_replicates.csv"));
    write_growth_replicates_csv(out, curve);
  }
  json out{{"curve", curve}};
  std::cout << "n,mean_f0,var_f0\n";
  for (const auto& p : curve.points) {
    std::cout << p.n << ',' << format_double(p.mean_f0) << ',' << format_double(p.var_f0) << '\n';
  }
  std::size_t usable = 0;
  for (const auto& p : curve.points) usable += p.n >= 10;
  if (usable >= 3) {
    const auto fit = fit_growth(curve);
    out["fit"] = fit;
    std::cout << "p_hat=" << format_double(fit.p_hat) << " c_hat=" << format_double(fit.c_hat)
              << " p(J-1)=" << format_double(fit.p_ambient)
              << " p(J-2)=" << format_double(fit.p_intrinsic) << '\n';
  }
  if (ec.J <= 6) {
    out["towers"] = count_towers(ec.J).towers;
    out["c_J"] = c_constant(ec.J);
  }
  ctx.write_json(ctx.file("growth.json"), out);
}

void run_clt(const json& cfg, Context& ctx) {
  const auto report = clt_experiment(cfg.at("J"), cfg.at("n"), cfg.at("reps"), cfg.at("seed"),
                                     ctx.threads);
  {
    auto out = ctx.open(ctx.file("clt.csv"));
    write_clt_csv(out, report);
  }
  ctx.write_json(ctx.file("clt.json"), report);
  std::cout << "mean_f0=" << format_double(report.mean_f0) << " sd_f0=" << format_double(report.sd_f0)
            << " ks=" << format_double(report.ks_stat) << '\n';
}

void run_gamma(const json& cfg, Context& ctx) {
  const auto g = gamma_experiment(cfg.at("J"), cfg.at("n_grid").get<std::vector<std::size_t>>(),
                                  cfg.at("reps"), cfg.at("sampler").get<SamplerSpec>(),
                                  cfg.at("seed"), ctx.threads);
  {
    auto out = ctx.open(ctx.file("gamma.csv"));
    write_gamma_csv(out, g);
  }
  ctx.write_json(ctx.file("gamma.json"), g);
  std::cout << "n,gamma,std_error\n";
  for (const auto& p : g.points) {
    std::cout << p.n << ',' << format_double(p.gamma) << ',' << format_double(p.std_error) << '\n';
  }
}

void run_hull_limit(const json& cfg, Context& ctx) {
  const auto h = hull_limit_experiment(cfg.at("J"), cfg.at("n_grid").get<std::vector<std::size_t>>(),
                                       cfg.at("seed"));
  {
    auto out = ctx.open(ctx.file("hull_limit.csv"));
    write_hull_limit_csv(out, h);
  }
  ctx.write_json(ctx.file("hull_limit.json"), h);
  for (const auto& p : h) std::cout << p.n << ',' << format_double(p.hausdorff) << '\n';
}

void run_definetti(const json& cfg, Context& ctx) {
  const auto b = definetti_bound(cfg.at("m"), cfg.at("L"));
  ctx.write_json(ctx.file("definetti.json"), b);
  std::cout << format_double(b.beta) << '\n';
}

Eigen::MatrixXd read_csv_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read " + path.string());
  return read_matrix_csv(in);
}

ProbabilityVector row_vector(const Eigen::MatrixXd& m, Eigen::Index i) {
  const Eigen::RowVectorXd r = m.row(i);
  return ProbabilityVector::validate(std::span<const double>(r.data(), r.size()));
}

void run_choquet(const json& cfg, Context& ctx) {
  const fs::path frame_path = cfg.at("frame").get<std::string>();
  ctx.input(frame_path);
  const auto F = read_csv_file(frame_path);
  std::vector<ProbabilityVector> verts;
  for (Eigen::Index l = 0; l < F.rows(); ++l) verts.push_back(row_vector(F, l));
  const auto frame = make_frame(std::move(verts));

  Eigen::MatrixXd P;
  if (cfg.contains("points")) {
    const fs::path points_path = cfg.at("points").get<std::string>();
    ctx.input(points_path);
    P = read_csv_file(points_path);
  } else {
    const auto p = cfg.at("p").get<std::vector<double>>();
    P = Eigen::Map<const Eigen::RowVectorXd>(p.data(), static_cast<Eigen::Index>(p.size()));
  }
  const bool use_nnls = cfg.at("solver") == "nnls";
  Eigen::MatrixXd W(P.rows(), static_cast<Eigen::Index>(frame.size()));
  std::vector<ChoquetMeasure> measures;
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    const auto p = row_vector(P, i);
    if (p.size() != frame.dim()) throw InvalidArgument("point dimension differs from the frame");
    auto w = use_nnls ? choquet_measure_nnls(p, frame) : choquet_measure(p, frame);
    for (std::size_t l = 0; l < w.size(); ++l) W(i, static_cast<Eigen::Index>(l)) = w[l];
    std::cout << join(w.coords()) << '\n';
    measures.push_back(std::move(w));
  }
  {
    auto out = ctx.open(ctx.file("choquet.csv"));
    write_matrix_csv(out, W);
  }
  ctx.write_json(ctx.file("choquet.json"), json{{"frame", frame}, {"measures", measures}});
}

void run_polya(const json& cfg, Context& ctx) {
  const double alpha = cfg.at("alpha");
  if (cfg.contains("observations")) {
    const auto obs = cfg.at("observations").get<std::vector<std::size_t>>();
    const AtomEmbedding emb(cfg.at("atoms").get<std::size_t>());
    const int depth = cfg.at("depth").get<int>() > 0 ? cfg.at("depth").get<int>() : std::max(1, emb.depth());
    auto post = PolyaTreePosterior::prior(build_params(alpha, depth), emb);
    post = posterior_update(post, obs, emb);
    const auto w = weight_estimate(post, emb);
    ctx.write_json(ctx.file("polya.json"), json{{"posterior", post}, {"weights", w}});
    std::cout << join(w.coords()) << '\n';
    return;
  }
  const auto truth = ProbabilityVector::validate(cfg.at("weights").get<std::vector<double>>());
  const AtomEmbedding emb(truth.size());
  const int depth = cfg.at("depth").get<int>() > 0 ? cfg.at("depth").get<int>() : std::max(1, emb.depth());
  const auto params = build_params(alpha, depth);
  const auto trace = convergence_trace(truth, cfg.at("k_grid").get<std::vector<std::size_t>>(),
                                       params, emb, cfg.at("seed"));
  {
    auto out = ctx.open(ctx.file("polya_trace.csv"));
    write_trace_csv(out, trace);
  }
  ctx.write_json(ctx.file("polya.json"),
                 json{{"weights", truth}, {"level_alpha", params.level_alpha}, {"trace", trace}});
  for (const auto& t : trace) {
    std::cout << t.k << ',' << format_double(t.sup_error) << ',' << format_double(t.rate) << '\n';
  }
}

void run_fit_admixture(const json& cfg, Context& ctx) {
  const fs::path input = cfg.at("input").get<std::string>();
  ctx.input(input);
  const auto X = load_docword(input);
  PipelineOptions opts;
  opts.pca_dim = cfg.at("pca_dim");
  opts.max_rounds = cfg.at("max_rounds");
  opts.em.restarts = cfg.at("restarts");
  opts.em.seed = cfg.at("seed");
  opts.em.max_iters = cfg.at("max_iters");
  opts.em.rel_tol = cfg.at("rel_tol");
  opts.em.threads = ctx.threads;
  const auto report = two_stage(X, cfg.at("L0"), opts);

  const fs::path json_out = cfg.at("json_out").is_null() ? ctx.file("fit.json")
                                                         : fs::path(cfg.at("json_out").get<std::string>());
  const fs::path csv_dir = cfg.at("csv_dir").is_null() ? ctx.out_dir
                                                       : fs::path(cfg.at("csv_dir").get<std::string>());
  ctx.write_json(json_out, report);
  {
    auto out = ctx.open(csv_dir / "Phi.csv");
    write_matrix_csv(out, report.final_model.Phi);
  }
  {
    auto out = ctx.open(csv_dir / "F.csv");
    write_matrix_csv(out, report.final_model.F);
  }
  for (const auto& r : report.rounds) {
    std::cout << "round L=" << r.L << " M=" << r.M << " loglik=" << format_double(r.loglik) << '\n';
  }
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << "final_M=" << report.final_M << '\n';
}

void run_synth_corpus(const json& cfg, Context& ctx) {
  const auto sc = synthetic_corpus(cfg.at("M_star"), cfg.at("J"), cfg.at("n_docs"),
                                   cfg.at("doc_len"), cfg.at("separation"), cfg.at("seed"),
                                   cfg.at("concentration"));
  {
    auto out = ctx.open(ctx.file("docword.txt"));
    write_docword(out, sc.X);
  }
  {
    auto out = ctx.open(ctx.file("F_true.csv"));
    write_matrix_csv(out, sc.F);
  }
  {
    auto out = ctx.open(ctx.file("Phi_true.csv"));
    write_matrix_csv(out, sc.Phi);
  }
  std::cout << "docs=" << sc.X.n_docs() << " terms=" << sc.X.n_terms() << " nnz=" << sc.X.nnz() << '\n';
}

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> table{
      {"growth", run_growth},         {"clt", run_clt},
      {"gamma", run_gamma},           {"hull-limit", run_hull_limit},
      {"definetti", run_definetti},   {"choquet", run_choquet},
      {"polya", run_polya},           {"fit-admixture", run_fit_admixture},
      {"synth-corpus", run_synth_corpus}};
  return table;
}

std::string relative_name(const fs::path& p, const fs::path& dir) {
  const auto rel = fs::relative(p, dir);
  if (!rel.empty() && *rel.begin() != "..") return rel.generic_string();
  return fs::absolute(p).lexically_normal().string();
}

RunManifest execute(const std::string& name, const json& cfg, const fs::path& out_dir,
                    unsigned threads) {
  Context ctx;
  ctx.out_dir = out_dir;
  ctx.threads = threads;
  fs::create_directories(out_dir);
  runners().at(name)(cfg, ctx);
  RunManifest m;
  m.subcommand = name;
  m.config = cfg;
  m.seed = cfg.value("seed", std::uint64_t{0});
  m.version = MIXGEOM_VERSION;
  m.inputs = ctx.inputs;
  for (const auto& p : ctx.outputs) m.outputs.push_back({relative_name(p, out_dir), cli::sha256_file(p)});
  cli::write_manifest(out_dir / "manifest.json", m);
  return m;
}

int replay(const fs::path& manifest_path, fs::path out_dir, unsigned threads) {
  const auto recorded = cli::read_manifest(manifest_path);
  if (!runners().count(recorded.subcommand)) {
    throw InvalidArgument("manifest names unknown subcommand " + recorded.subcommand);
  }
  for (const auto& in : recorded.inputs) {
    if (cli::sha256_file(in.name) != in.sha256) {
      throw InvalidArgument("input " + in.name + " changed since the recorded run");
    }
  }
  if (out_dir.empty()) out_dir = manifest_path.parent_path() / "replay";
  json cfg = recorded.config;
  // Redirected outputs land in the replay directory under their own names.
  if (cfg.contains("json_out")) cfg["json_out"] = nullptr;
  if (cfg.contains("csv_dir")) cfg["csv_dir"] = nullptr;
  const auto fresh = execute(recorded.subcommand, cfg, out_dir, threads);
  std::map<std::string, std::string> produced;
  for (const auto& f : fresh.outputs) produced[fs::path(f.name).filename().string()] = f.sha256;
  int differing = 0;
  for (const auto& f : recorded.outputs) {
    const auto key = fs::path(f.name).filename().string();
    const auto it = produced.find(key);
    const bool same = it != produced.end() && it->second == f.sha256;
    std::cerr << (same ? "identical " : "DIFFERS   ") << key << '\n';
    differing += !same;
  }
  if (differing) {
    std::cerr << differing << " output(s) differ\n";
    return kExitNumeric;
  }
  std::cerr << "replay reproduced " << recorded.outputs.size() << " output(s)\n";
  return 0;
}

fs::path default_out_dir() {
  if (const char* env = std::getenv("MIXGEOM_OUT_DIR"); env && *env) return env;
  return ".";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometry-of-mixtures experiments: hull growth on the simplex, Choquet weights, "
               "Polya tree weight estimates and two-stage admixture fitting."};
  app.footer(kFormats);
  app.require_subcommand(1);
  app.fallthrough();
  app.failure_message(CLI::FailureMessage::help);
  app.set_version_flag("--version", MIXGEOM_VERSION);

  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::string out_dir_text;
  app.add_option("--threads", threads, "Worker threads; results do not depend on it")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir_text, "Output directory (default $MIXGEOM_OUT_DIR or .)");

  json cfg;
  std::string chosen;

  // growth
  std::size_t g_J = 0, g_reps = 100;
  std::string g_grid, g_sampler = "uniform";
  std::uint64_t g_seed = 0;
  auto* growth = app.add_subcommand("growth", "Mean and variance of hull vertex counts over an n grid");
  growth->add_option("--J", g_J, "Simplex size (points have J coordinates)")->required()->check(CLI::Range(2, 64));
  growth->add_option("--n-grid", g_grid, "Comma-separated sample sizes (default 100,316,1000,3162,10000)");
  growth->add_option("--reps", g_reps, "Replicates per grid point")->capture_default_str();
  growth->add_option("--sampler", g_sampler, "Point distribution")->capture_default_str();
  growth->add_option("--seed", g_seed, "Base seed")->capture_default_str();
  growth->callback([&] {
    const auto grid = g_grid.empty() ? default_n_grid() : parse_list<std::size_t>(g_grid, "n");
    auto spec = parse_sampler(g_sampler, g_J);
    cfg = {{"J", g_J}, {"n_grid", grid}, {"reps", g_reps}, {"sampler", spec}, {"seed", g_seed}};
    chosen = "growth";
  });

  // clt
  std::size_t c_J = 3, c_n = 10000, c_reps = 2000;
  std::uint64_t c_seed = 0;
  auto* clt = app.add_subcommand("clt", "Kolmogorov distance of standardized vertex counts to N(0,1)");
  clt->add_option("--J", c_J)->capture_default_str()->check(CLI::Range(2, 64));
  clt->add_option("--n", c_n, "Points per hull")->capture_default_str();
  clt->add_option("--reps", c_reps, "Replicates (>= 100)")->capture_default_str();
  clt->add_option("--seed", c_seed)->capture_default_str();
  clt->callback([&] {
    cfg = {{"J", c_J}, {"n", c_n}, {"reps", c_reps}, {"seed", c_seed}};
    chosen = "clt";
  });

  // gamma
  std::size_t ga_J = 3, ga_reps = 200;
  std::string ga_grid = "100,1000,10000", ga_sampler = "dirichlet:2,2,2";
  std::uint64_t ga_seed = 0;
  auto* gamma = app.add_subcommand("gamma", "Ratio of mean vertex counts, generic sampler over uniform");
  gamma->add_option("--J", ga_J)->capture_default_str()->check(CLI::Range(2, 64));
  gamma->add_option("--n-grid", ga_grid)->capture_default_str();
  gamma->add_option("--reps", ga_reps)->capture_default_str();
  gamma->add_option("--sampler", ga_sampler, "Generic sampler")->capture_default_str();
  gamma->add_option("--seed", ga_seed)->capture_default_str();
  gamma->callback([&] {
    cfg = {{"J", ga_J},
           {"n_grid", parse_list<std::size_t>(ga_grid, "n")},
           {"reps", ga_reps},
           {"sampler", parse_sampler(ga_sampler, ga_J)},
           {"seed", ga_seed}};
    chosen = "gamma";
  });

  // hull-limit
  std::size_t h_J = 3;
  std::string h_grid = "100,1000,10000";
  std::uint64_t h_seed = 0;
  auto* hull_limit = app.add_subcommand("hull-limit", "Hausdorff distance of nested hulls to the simplex");
  hull_limit->add_option("--J", h_J)->capture_default_str()->check(CLI::Range(2, 64));
  hull_limit->add_option("--n-grid", h_grid)->capture_default_str();
  hull_limit->add_option("--seed", h_seed)->capture_default_str();
  hull_limit->callback([&] {
    cfg = {{"J", h_J}, {"n_grid", parse_list<std::size_t>(h_grid, "n")}, {"seed", h_seed}};
    chosen = "hull-limit";
  });

  // definetti
  std::size_t d_m = 0, d_L = 0;
  auto* definetti = app.add_subcommand("definetti", "beta(m, L) and its bound L(L-1)/(2m)");
  definetti->add_option("--m", d_m, "Sequence length")->required();
  definetti->add_option("--L", d_L, "Prefix length")->required();
  definetti->callback([&] {
    cfg = {{"m", d_m}, {"L", d_L}};
    chosen = "definetti";
  });

  // choquet
  std::string ch_frame, ch_points, ch_p, ch_solver = "direct";
  auto* choquet = app.add_subcommand("choquet", "Weights of points over the vertices of a simplex frame");
  choquet->add_option("--frame", ch_frame, "CSV, one frame vertex per row")->required()->check(CLI::ExistingFile);
  auto* opt_points = choquet->add_option("--points", ch_points, "CSV, one point per row")->check(CLI::ExistingFile);
  auto* opt_p = choquet->add_option("--p", ch_p, "Single point, comma-separated");
  opt_points->excludes(opt_p);
  choquet->add_option("--solver", ch_solver)->check(CLI::IsMember({"direct", "nnls"}))->capture_default_str();
  choquet->callback([&] {
    cfg = {{"frame", fs::absolute(ch_frame).lexically_normal().string()}, {"solver", ch_solver}};
    if (!ch_points.empty()) {
      cfg["points"] = fs::absolute(ch_points).lexically_normal().string();
    } else if (!ch_p.empty()) {
      cfg["p"] = parse_list<double>(ch_p, "coordinate");
    } else {
      throw CLI::RequiredError("--points or --p");
    }
    chosen = "choquet";
  });

  // polya
  std::string po_weights, po_grid = "100,1000,10000", po_obs;
  double po_alpha = 1.0;
  int po_depth = 0;
  std::size_t po_atoms = 2;
  std::uint64_t po_seed = 0;
  auto* polya = app.add_subcommand("polya", "Polya tree weight estimates: convergence trace or a single update");
  auto* opt_w = polya->add_option("--weights", po_weights, "True atom weights for a convergence trace");
  auto* opt_obs = polya->add_option("--observations", po_obs, "Observed atom ids (0-based) for one update");
  opt_w->excludes(opt_obs);
  polya->add_option("--atoms", po_atoms, "Number of atoms with --observations")->capture_default_str();
  polya->add_option("--k-grid", po_grid)->capture_default_str();
  polya->add_option("--alpha", po_alpha, "Holder exponent in (0, 1]")->capture_default_str();
  polya->add_option("--depth", po_depth, "Tree depth (default: embedding depth, at least 1)");
  polya->add_option("--seed", po_seed)->capture_default_str();
  polya->callback([&] {
    cfg = {{"alpha", po_alpha}, {"depth", po_depth}};
    if (!po_obs.empty()) {
      cfg["observations"] = parse_list<std::size_t>(po_obs, "atom id");
      cfg["atoms"] = po_atoms;
    } else if (!po_weights.empty()) {
      cfg["weights"] = parse_list<double>(po_weights, "weight");
      cfg["k_grid"] = parse_list<std::size_t>(po_grid, "k");
      cfg["seed"] = po_seed;
    } else {
      throw CLI::RequiredError("--weights or --observations");
    }
    chosen = "polya";
  });

  // fit-admixture
  std::string fa_input, fa_json_out, fa_csv_dir;
  std::size_t fa_L0 = 12, fa_pca = 5, fa_rounds = 2, fa_restarts = 5, fa_iters = 500;
  double fa_tol = 1e-8;
  std::uint64_t fa_seed = 0;
  auto* fit = app.add_subcommand("fit-admixture", "Two-stage admixture fit with extreme-point counting");
  fit->add_option("--input", fa_input, "Corpus in UCI bag-of-words layout")->required()->check(CLI::ExistingFile);
  fit->add_option("--L0", fa_L0, "Initial number of components")->capture_default_str();
  fit->add_option("--pca-dim", fa_pca, "Dimension for extreme-point counting")->capture_default_str();
  fit->add_option("--max-rounds", fa_rounds, "Maximum number of fits")->capture_default_str();
  fit->add_option("--restarts", fa_restarts, "EM restarts per fit")->capture_default_str();
  fit->add_option("--max-iters", fa_iters, "EM iteration cap")->capture_default_str();
  fit->add_option("--rel-tol", fa_tol, "EM relative loglik tolerance")->capture_default_str();
  fit->add_option("--seed", fa_seed)->capture_default_str();
  fit->add_option("--json-out", fa_json_out, "Report path (default <out>/fit.json)");
  fit->add_option("--csv-dir", fa_csv_dir, "Directory for Phi.csv and F.csv (default <out>)");
  fit->callback([&] {
    cfg = {{"input", fs::absolute(fa_input).lexically_normal().string()},
           {"L0", fa_L0},
           {"pca_dim", fa_pca},
           {"max_rounds", fa_rounds},
           {"restarts", fa_restarts},
           {"max_iters", fa_iters},
           {"rel_tol", fa_tol},
           {"seed", fa_seed},
           {"json_out", fa_json_out.empty() ? json(nullptr) : json(fa_json_out)},
           {"csv_dir", fa_csv_dir.empty() ? json(nullptr) : json(fa_csv_dir)}};
    chosen = "fit-admixture";
  });

  // synth-corpus
  std::size_t s_M = 4, s_J = 10, s_docs = 2000, s_len = 200;
  double s_sep = 1.0, s_conc = 1.0;
  std::uint64_t s_seed = 0;
  auto* synth = app.add_subcommand("synth-corpus", "Synthetic corpus with known components");
  synth->add_option("--M-star", s_M, "True number of components")->capture_default_str();
  synth->add_option("--J", s_J, "Vocabulary size")->capture_default_str();
  synth->add_option("--n-docs", s_docs)->capture_default_str();
  synth->add_option("--doc-len", s_len)->capture_default_str();
  synth->add_option("--separation", s_sep, "0 = unstructured, 1 = disjoint supports")->capture_default_str();
  synth->add_option("--concentration", s_conc, "Dirichlet parameter of the mixing weights")->capture_default_str();
  synth->add_option("--seed", s_seed)->capture_default_str();
  synth->callback([&] {
    cfg = {{"M_star", s_M},   {"J", s_J},           {"n_docs", s_docs},        {"doc_len", s_len},
           {"separation", s_sep}, {"concentration", s_conc}, {"seed", s_seed}};
    chosen = "synth-corpus";
  });

  // replay
  std::string r_manifest;
  auto* rep = app.add_subcommand("replay", "Re-run a manifest and compare output digests");
  rep->add_option("--manifest", r_manifest, "manifest.json of an earlier run")->required()->check(CLI::ExistingFile);
  rep->callback([&] { chosen = "replay"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (chosen == "replay") {
      return replay(r_manifest, out_dir_text.empty() ? fs::path() : fs::path(out_dir_text), threads);
    }
    const fs::path out_dir = out_dir_text.empty() ? default_out_dir() : fs::path(out_dir_text);
    execute(chosen, cfg, out_dir, threads);
    return 0;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericFailure& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}
