#include <doctest.h>

#include <cmath>
#include <numeric>

#include "mixgeom/errors.hpp"
#include "mixgeom/simplex.hpp"
#include "mixgeom/stats.hpp"

using namespace mixgeom;

TEST_SUITE("simplex") {

TEST_CASE("validate normalizes and clips round-off") {
  const auto p = ProbabilityVector::validate({0.2, 0.3, 0.5});
  CHECK(p.size() == 3);
  CHECK(p[0] == 0.2);
  CHECK(p[2] == 0.5);

  const auto q = ProbabilityVector::validate({2.0, 6.0});
  CHECK(q[0] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(q[1] == doctest::Approx(0.75).epsilon(1e-15));

  const auto r = ProbabilityVector::validate({-1e-13, 1.0});
  CHECK(r[0] == 0.0);
  CHECK(r[1] == 1.0);
}

TEST_CASE("validate rejects bad input") {
  CHECK_THROWS_AS(ProbabilityVector::validate({-0.1, 1.1}), InvalidArgument);
  CHECK_THROWS_AS(ProbabilityVector::validate({0.0, 0.0}), InvalidArgument);
  CHECK_THROWS_AS(ProbabilityVector::validate({NAN, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(ProbabilityVector::validate(std::span<const double>{}), InvalidArgument);
}

TEST_CASE("vertex") {
  const auto e = ProbabilityVector::vertex(4, 2);
  CHECK(e.coords() == std::vector<double>{0, 0, 1, 0});
  CHECK_THROWS_AS(ProbabilityVector::vertex(3, 3), InvalidArgument);
}

TEST_CASE("sampler spec checks") {
  CHECK_THROWS_AS(SamplerSpec::uniform(1, 0), InvalidArgument);
  CHECK_THROWS_AS(SamplerSpec::dirichlet({1.0, 0.0, 1.0}, 0), InvalidArgument);
  CHECK_THROWS_AS(sample(SamplerSpec::uniform(3, 1), 0), InvalidArgument);
}

TEST_CASE("draws lie on the simplex and are reproducible") {
  for (const auto& spec : {SamplerSpec::uniform(5, 11), SamplerSpec::dirichlet({0.3, 2.0, 5.0}, 12)}) {
    const auto a = sample(spec, 500);
    const auto b = sample(spec, 500);
    CHECK(a == b);
    for (const auto& p : a) {
      double s = 0.0;
      for (double x : p) {
        CHECK(x >= 0.0);
        s += x;
      }
      CHECK(std::abs(s - 1.0) < 1e-12);
    }
    CHECK(sample(spec.with_seed(spec.seed + 1), 500) != a);
  }
}

TEST_CASE("uniform sampler moments") {
  // Uniform on the simplex is Dirichlet(1,...,1): E x_j = 1/J,
  // Var x_j = (J-1) / (J^2 (J+1)).
  const std::size_t J = 4, n = 200000;
  const auto draws = sample(SamplerSpec::uniform(J, 3), n);
  std::vector<double> x0;
  for (const auto& p : draws) x0.push_back(p[0]);
  const double var = (J - 1.0) / (J * J * (J + 1.0));
  CHECK(std::abs(sample_mean(x0) - 0.25) < 5 * std::sqrt(var / n));
  CHECK(sample_variance(x0) == doctest::Approx(var).epsilon(0.02));
}

TEST_CASE("dirichlet sampler mean") {
  const std::vector<double> alpha{2.0, 2.0, 6.0};
  const auto draws = sample(SamplerSpec::dirichlet(alpha, 4), 100000);
  std::vector<double> x2;
  for (const auto& p : draws) x2.push_back(p[2]);
  // Beta(6, 4) marginal: mean 0.6, variance 0.6*0.4/11.
  CHECK(std::abs(sample_mean(x2) - 0.6) < 5 * std::sqrt(0.24 / 11 / 100000));
}

TEST_CASE("point-mass mixture draws only atoms, at their weights") {
  std::vector<ProbabilityVector> atoms{ProbabilityVector::vertex(3, 0),
                                       ProbabilityVector::validate({0.2, 0.3, 0.5})};
  const std::vector<double> w{0.7, 0.3};
  const auto draws = sample(SamplerSpec::point_mass_mixture(atoms, w, 9), 50000);
  std::size_t first = 0;
  for (const auto& p : draws) {
    const bool a0 = p == atoms[0], a1 = p == atoms[1];
    CHECK((a0 || a1));
    first += a0;
  }
  CHECK(std::abs(first / 50000.0 - 0.7) < 5 * std::sqrt(0.21 / 50000));
}

TEST_CASE("derive_seed separates streams") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(5, 7) == derive_seed(5, 7));
}

}
