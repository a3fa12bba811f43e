#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mixgeom/hull.hpp"
#include "mixgeom/simplex.hpp"

namespace mixgeom {

struct ExperimentConfig {
  std::size_t J = 3;
  std::vector<std::size_t> n_grid;
  std::size_t reps = 1;
  SamplerSpec sampler;       // distribution of the points; its seed is ignored
  std::uint64_t seed = 0;    // base of the per-replicate seed tree
  unsigned threads = 1;
  double tol = kExtremeTolerance;

  /// Throws InvalidArgument on a malformed config.
  void check() const;
};

/// Log-spaced grid {10^2, 10^2.5, 10^3, 10^3.5, 10^4}, rounded.
std::vector<std::size_t> default_n_grid();

struct GrowthPoint {
  std::size_t n = 0;
  double mean_f0 = 0.0;
  double var_f0 = 0.0;
  std::size_t reps = 0;
  double std_error = 0.0;
  std::vector<std::size_t> f0;  // one count per replicate, replicate order
};

struct GrowthCurve {
  std::size_t J = 0;
  std::vector<GrowthPoint> points;
};

struct GrowthFit {
  double c_hat = 0.0;
  double p_hat = 0.0;
  double r_squared = 0.0;
  std::vector<double> residuals;
  // Exponents predicted by the ambient (J-1) and intrinsic (J-2) readings.
  double p_ambient = 0.0;
  double p_intrinsic = 0.0;
};

struct CLTReport {
  std::size_t J = 0;
  std::size_t n = 0;
  std::size_t reps = 0;
  double mean_f0 = 0.0;
  double sd_f0 = 0.0;
  std::vector<double> standardized;
  double ks_stat = 0.0;
};

struct GammaPoint {
  std::size_t n = 0;
  double mean_t = 0.0;   // generic sampler
  double mean_m = 0.0;   // uniform sampler
  double gamma = 0.0;
  double std_error = 0.0;
};

struct GammaSequence {
  std::size_t J = 0;
  std::vector<GammaPoint> points;
};

struct HullLimitPoint {
  std::size_t n = 0;
  double hausdorff = 0.0;
};

struct ExchangeabilityBound {
  std::size_t m = 0;
  std::size_t L = 0;
  double beta = 0.0;
  double bound = 0.0;  // L(L-1)/(2m)
};

/// Seed of replicate `rep` at grid position `grid_index`.
std::uint64_t replicate_seed(std::uint64_t base, std::size_t grid_index,
                             std::size_t rep);

/// Vertex count of the hull of n draws from `spec`.
std::size_t hull_vertex_count(const SamplerSpec& spec, std::size_t n,
                              double tol = kExtremeTolerance);

GrowthCurve growth_experiment(const ExperimentConfig& cfg);

/// Least squares of log(mean_f0) on log(log n) over grid points with n >= 10.
GrowthFit fit_growth(const GrowthCurve& curve);

/// Standardizes `values` and measures their Kolmogorov distance to N(0,1).
CLTReport clt_report(std::span<const double> values);

CLTReport clt_experiment(std::size_t J, std::size_t n, std::size_t reps,
                         std::uint64_t seed, unsigned threads = 1);

GammaSequence gamma_experiment(std::size_t J,
                               const std::vector<std::size_t>& n_grid,
                               std::size_t reps, const SamplerSpec& sampler_g,
                               std::uint64_t seed, unsigned threads = 1);

/// Hausdorff distance from the hull of the first n points of one uniform
/// stream to the simplex, for every n in the grid.
std::vector<HullLimitPoint> hull_limit_experiment(
    std::size_t J, const std::vector<std::size_t>& n_grid, std::uint64_t seed);

ExchangeabilityBound definetti_bound(std::size_t m, std::size_t L);

}  // namespace mixgeom
