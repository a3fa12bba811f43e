#include "mixgeom/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mixgeom/errors.hpp"
#include "mixgeom/parallel.hpp"
#include "mixgeom/stats.hpp"

namespace mixgeom {

void ExperimentConfig::check() const {
  if (J < 2) throw InvalidArgument("J must be at least 2");
  if (n_grid.empty()) throw InvalidArgument("n_grid is empty");
  if (n_grid.front() < J + 1) {
    throw InvalidArgument("smallest n in the grid must be at least J+1 = " +
                          std::to_string(J + 1));
  }
  for (std::size_t i = 1; i < n_grid.size(); ++i) {
    if (n_grid[i] <= n_grid[i - 1]) {
      throw InvalidArgument("n_grid must be strictly increasing");
    }
  }
  if (reps < 1) throw InvalidArgument("reps must be at least 1");
  sampler.check();
  if (sampler.J != J) throw InvalidArgument("sampler dimension differs from J");
}

std::vector<std::size_t> default_n_grid() {
  std::vector<std::size_t> grid;
  for (double e = 2.0; e <= 4.0 + 1e-9; e += 0.5) {
    grid.push_back(static_cast<std::size_t>(std::llround(std::pow(10.0, e))));
  }
  return grid;
}

std::uint64_t replicate_seed(std::uint64_t base, std::size_t grid_index,
                             std::size_t rep) {
  return derive_seed(derive_seed(base, grid_index), rep);
}

std::size_t hull_vertex_count(const SamplerSpec& spec, std::size_t n,
                              double tol) {
  Sampler sampler(spec);
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(n),
                       static_cast<Eigen::Index>(spec.J));
  std::vector<double> buf(spec.J);
  for (std::size_t i = 0; i < n; ++i) {
    sampler.next_into(buf);
    for (std::size_t j = 0; j < spec.J; ++j) {
      rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = buf[j];
    }
  }
  return extremal_set(PointSet(rows), tol).f0;
}

GrowthCurve growth_experiment(const ExperimentConfig& cfg) {
  cfg.check();
  const std::size_t grid = cfg.n_grid.size();
  std::vector<std::size_t> counts(grid * cfg.reps);
  parallel_for(counts.size(), cfg.threads, [&](std::size_t task) {
    const std::size_t g = task / cfg.reps, r = task % cfg.reps;
    const auto spec = cfg.sampler.with_seed(replicate_seed(cfg.seed, g, r));
    counts[task] = hull_vertex_count(spec, cfg.n_grid[g], cfg.tol);
  });

  GrowthCurve curve;
  curve.J = cfg.J;
  for (std::size_t g = 0; g < grid; ++g) {
    GrowthPoint pt;
    pt.n = cfg.n_grid[g];
    pt.reps = cfg.reps;
    pt.f0.assign(counts.begin() + static_cast<std::ptrdiff_t>(g * cfg.reps),
                 counts.begin() + static_cast<std::ptrdiff_t>((g + 1) * cfg.reps));
    std::vector<double> values(pt.f0.begin(), pt.f0.end());
    pt.mean_f0 = sample_mean(values);
    pt.var_f0 = sample_variance(values);
    pt.std_error = std::sqrt(pt.var_f0 / static_cast<double>(pt.reps));
    curve.points.push_back(std::move(pt));
  }
  return curve;
}

GrowthFit fit_growth(const GrowthCurve& curve) {
  std::vector<double> xs, ys;
  for (const auto& pt : curve.points) {
    if (pt.n < 10) continue;
    if (!(pt.mean_f0 > 0.0)) {
      throw InvalidArgument("growth fit needs positive mean counts");
    }
    xs.push_back(std::log(std::log(static_cast<double>(pt.n))));
    ys.push_back(std::log(pt.mean_f0));
  }
  if (xs.size() < 3) {
    throw InvalidArgument("growth fit needs at least 3 grid points with n >= 10");
  }
  const double mx = sample_mean(xs), my = sample_mean(ys);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  GrowthFit fit;
  fit.p_hat = sxy / sxx;
  const double intercept = my - fit.p_hat * mx;
  fit.c_hat = std::exp(intercept);
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + fit.p_hat * xs[i]);
    fit.residuals.push_back(r);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  fit.p_ambient = static_cast<double>(curve.J) - 1.0;
  fit.p_intrinsic = static_cast<double>(curve.J) - 2.0;
  return fit;
}

CLTReport clt_report(std::span<const double> values) {
  CLTReport report;
  report.reps = values.size();
  report.mean_f0 = sample_mean(values);
  report.sd_f0 = std::sqrt(sample_variance(values));
  if (!(report.sd_f0 > 0.0)) {
    throw NumericFailure(
        "degenerate variance: every replicate has the same vertex count "
        "(J=2 always gives 2), CLT diagnostics are undefined");
  }
  report.standardized = standardize(values);
  report.ks_stat = ks_distance_to_normal(report.standardized);
  return report;
}

CLTReport clt_experiment(std::size_t J, std::size_t n, std::size_t reps,
                         std::uint64_t seed, unsigned threads) {
  if (reps < 100) throw InvalidArgument("clt_experiment needs reps >= 100");
  ExperimentConfig cfg;
  cfg.J = J;
  cfg.n_grid = {n};
  cfg.reps = reps;
  cfg.sampler = SamplerSpec::uniform(J, seed);
  cfg.seed = seed;
  cfg.threads = threads;
  const auto curve = growth_experiment(cfg);
  const auto& f0 = curve.points.front().f0;
  const std::vector<double> values(f0.begin(), f0.end());
  CLTReport report = clt_report(values);
  report.J = J;
  report.n = n;
  return report;
}

GammaSequence gamma_experiment(std::size_t J,
                               const std::vector<std::size_t>& n_grid,
                               std::size_t reps, const SamplerSpec& sampler_g,
                               std::uint64_t seed, unsigned threads) {
  if (sampler_g.J != J) {
    throw InvalidArgument("generic sampler dimension differs from J");
  }
  ExperimentConfig uniform_cfg;
  uniform_cfg.J = J;
  uniform_cfg.n_grid = n_grid;
  uniform_cfg.reps = reps;
  uniform_cfg.sampler = SamplerSpec::uniform(J, seed);
  uniform_cfg.seed = derive_seed(seed, 0);
  uniform_cfg.threads = threads;
  ExperimentConfig generic_cfg = uniform_cfg;
  generic_cfg.sampler = sampler_g;
  generic_cfg.seed = derive_seed(seed, 1);

  const auto m_curve = growth_experiment(uniform_cfg);
  const auto t_curve = growth_experiment(generic_cfg);
  GammaSequence out;
  out.J = J;
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    const auto& m = m_curve.points[g];
    const auto& t = t_curve.points[g];
    GammaPoint pt;
    pt.n = m.n;
    pt.mean_m = m.mean_f0;
    pt.mean_t = t.mean_f0;
    pt.gamma = t.mean_f0 / m.mean_f0;
    const double rel_t = t.std_error / t.mean_f0;
    const double rel_m = m.std_error / m.mean_f0;
    pt.std_error = pt.gamma * std::sqrt(rel_t * rel_t + rel_m * rel_m);
    out.points.push_back(pt);
  }
  return out;
}

std::vector<HullLimitPoint> hull_limit_experiment(
    std::size_t J, const std::vector<std::size_t>& n_grid, std::uint64_t seed) {
  if (n_grid.empty()) throw InvalidArgument("n_grid is empty");
  for (std::size_t i = 1; i < n_grid.size(); ++i) {
    if (n_grid[i] <= n_grid[i - 1]) {
      throw InvalidArgument("n_grid must be strictly increasing");
    }
  }
  if (n_grid.front() < 1) throw InvalidArgument("n must be at least 1");
  Sampler sampler(SamplerSpec::uniform(J, derive_seed(seed, 0)));
  const auto n_max = static_cast<Eigen::Index>(n_grid.back());
  const auto dim = static_cast<Eigen::Index>(J);
  Eigen::MatrixXd rows(n_max, dim);
  std::vector<double> buf(J);
  for (Eigen::Index i = 0; i < n_max; ++i) {
    sampler.next_into(buf);
    for (Eigen::Index j = 0; j < dim; ++j) rows(i, j) = buf[static_cast<std::size_t>(j)];
  }
  const PointSet simplex(Eigen::MatrixXd::Identity(dim, dim));
  std::vector<HullLimitPoint> out;
  for (std::size_t n : n_grid) {
    const PointSet prefix(rows.topRows(static_cast<Eigen::Index>(n)).eval());
    out.push_back({n, hausdorff(prefix, simplex)});
  }
  return out;
}

ExchangeabilityBound definetti_bound(std::size_t m, std::size_t L) {
  if (L < 1) throw InvalidArgument("L must be at least 1");
  if (L > m) {
    throw InvalidArgument("L must not exceed m (L=" + std::to_string(L) +
                          ", m=" + std::to_string(m) + ")");
  }
  ExchangeabilityBound out{m, L, 0.0,
                           0.5 * static_cast<double>(L) *
                               static_cast<double>(L - 1) /
                               static_cast<double>(m)};
  // Exact integer arithmetic while m^L fits in a double mantissa, so small
  // cases come out correctly rounded; log1p/expm1 otherwise.
  const double log2_power = static_cast<double>(L) * std::log2(static_cast<double>(m));
  if (log2_power < 53.0) {
    std::uint64_t power = 1, falling = 1;
    for (std::size_t k = 0; k < L; ++k) {
      power *= m;
      falling *= (m - k);
    }
    out.beta = static_cast<double>(power - falling) / static_cast<double>(power);
  } else {
    double log_ratio = 0.0;
    for (std::size_t k = 1; k < L; ++k) {
      log_ratio += std::log1p(-static_cast<double>(k) / static_cast<double>(m));
    }
    out.beta = -std::expm1(log_ratio);
  }
  return out;
}

}  // namespace mixgeom
