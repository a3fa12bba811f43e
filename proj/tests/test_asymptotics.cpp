#include <doctest.h>

#include <cmath>

#include "mixgeom/asymptotics.hpp"
#include "mixgeom/errors.hpp"

using namespace mixgeom;

TEST_SUITE("asymptotics") {

TEST_CASE("segment hulls always have two vertices") {
  ExperimentConfig cfg;
  cfg.J = 2;
  cfg.n_grid = {3, 10, 1000};
  cfg.reps = 20;
  cfg.sampler = SamplerSpec::uniform(2, 0);
  cfg.seed = 4;
  const auto curve = growth_experiment(cfg);
  for (const auto& p : curve.points) {
    CHECK(p.mean_f0 == 2.0);
    CHECK(p.var_f0 == 0.0);
  }
}

TEST_CASE("growth is deterministic and thread-count invariant") {
  ExperimentConfig cfg;
  cfg.J = 3;
  cfg.n_grid = {10, 100, 300};
  cfg.reps = 12;
  cfg.sampler = SamplerSpec::uniform(3, 0);
  cfg.seed = 17;
  const auto a = growth_experiment(cfg);
  cfg.threads = 4;
  const auto b = growth_experiment(cfg);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t g = 0; g < a.points.size(); ++g) {
    CHECK(a.points[g].f0 == b.points[g].f0);
    CHECK(a.points[g].mean_f0 == b.points[g].mean_f0);
  }
  // Each count matches a standalone hull on the replicate's own stream.
  CHECK(a.points[1].f0[5] ==
        hull_vertex_count(SamplerSpec::uniform(3, replicate_seed(17, 1, 5)), 100));
}

TEST_CASE("config validation") {
  ExperimentConfig cfg;
  cfg.J = 3;
  cfg.sampler = SamplerSpec::uniform(3, 0);
  cfg.n_grid = {100, 50};
  CHECK_THROWS_AS(cfg.check(), InvalidArgument);
  cfg.n_grid = {3};
  CHECK_THROWS_AS(cfg.check(), InvalidArgument);
  cfg.n_grid = {4, 10};
  cfg.reps = 0;
  CHECK_THROWS_AS(cfg.check(), InvalidArgument);
  cfg.reps = 1;
  cfg.sampler = SamplerSpec::uniform(4, 0);
  CHECK_THROWS_AS(cfg.check(), InvalidArgument);
}

TEST_CASE("default grid") {
  CHECK(default_n_grid() == std::vector<std::size_t>{100, 316, 1000, 3162, 10000});
}

TEST_CASE("fit recovers an exact power of log n") {
  GrowthCurve curve;
  curve.J = 3;
  for (std::size_t n : default_n_grid()) {
    GrowthPoint p;
    p.n = n;
    p.mean_f0 = 0.7 * std::pow(std::log(static_cast<double>(n)), 1.5);
    curve.points.push_back(p);
  }
  const auto fit = fit_growth(curve);
  CHECK(fit.c_hat == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(fit.p_hat == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(fit.r_squared == doctest::Approx(1.0));
  CHECK(fit.p_ambient == 2.0);
  CHECK(fit.p_intrinsic == 1.0);
}

TEST_CASE("clt report standardizes") {
  const std::vector<double> v{1, 2, 3, 4, 5};
  const auto r = clt_report(v);
  CHECK(r.mean_f0 == 3.0);
  CHECK(r.sd_f0 == doctest::Approx(std::sqrt(2.5)));
  CHECK(r.standardized.front() == doctest::Approx(-2.0 / std::sqrt(2.5)));
  CHECK_THROWS_AS(clt_experiment(3, 100, 10, 1), InvalidArgument);
}

TEST_CASE("nested hulls approach the simplex") {
  const auto h = hull_limit_experiment(3, {10, 100, 1000}, 8);
  REQUIRE(h.size() == 3);
  for (std::size_t k = 0; k < h.size(); ++k) {
    CHECK(h[k].hausdorff <= 2.0);
    if (k) CHECK(h[k].hausdorff <= h[k - 1].hausdorff);
  }
}

TEST_CASE("uniform against itself gives a ratio near one") {
  const auto g = gamma_experiment(3, {50, 200}, 200, SamplerSpec::uniform(3, 0), 5);
  for (const auto& p : g.points) {
    CHECK(std::abs(p.gamma - 1.0) < 4 * p.std_error);
    CHECK(p.std_error > 0.0);
  }
  CHECK_THROWS_AS(gamma_experiment(3, {50}, 10, SamplerSpec::uniform(4, 0), 5), InvalidArgument);
}

TEST_CASE("exchangeability bound") {
  CHECK(definetti_bound(5, 2).beta == 0.2);
  CHECK(definetti_bound(5, 1).beta == 0.0);
  // Direct product 1 - prod_{k<L} (1 - k/m) in long double as an oracle.
  for (std::size_t m = 1; m <= 60; ++m) {
    for (std::size_t L = 1; L <= m; ++L) {
      long double prod = 1.0L;
      for (std::size_t k = 1; k < L; ++k) prod *= 1.0L - static_cast<long double>(k) / m;
      const auto b = definetti_bound(m, L);
      CHECK(std::abs(b.beta - static_cast<double>(1.0L - prod)) < 1e-14);
      CHECK(b.beta <= b.bound + 1e-15);
    }
  }
  CHECK_THROWS_AS(definetti_bound(3, 4), InvalidArgument);
  CHECK_THROWS_AS(definetti_bound(3, 0), InvalidArgument);
}

}
