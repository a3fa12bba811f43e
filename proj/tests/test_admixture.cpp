#include <doctest.h>

#include <cmath>
#include <random>

#include "mixgeom/admixture.hpp"
#include "mixgeom/errors.hpp"
#include "oracles.hpp"

using namespace mixgeom;

namespace {

// Direct evaluation of the multinomial log likelihood from dense counts.
double dense_loglik(const DocTermMatrix& X, const Eigen::MatrixXd& Pi) {
  double total = 0.0;
  for (const auto& t : X.triplets()) {
    total += t.count * std::log(Pi(static_cast<Eigen::Index>(t.doc), static_cast<Eigen::Index>(t.term))) -
             std::lgamma(t.count + 1.0);
  }
  for (std::size_t i = 0; i < X.n_docs(); ++i) total += std::lgamma(X.doc_totals()[i] + 1.0);
  return total;
}

}  // namespace

TEST_SUITE("admixture") {

TEST_CASE("one component is the pooled multinomial") {
  const auto sc = synthetic_corpus(3, 6, 30, 40, 0.5, 2);
  EmOptions opts;
  opts.restarts = 2;
  const auto m = em_fit(sc.X, 1, opts);
  const auto totals = sc.X.term_totals();
  for (std::size_t j = 0; j < 6; ++j) {
    CHECK(m.F(0, static_cast<Eigen::Index>(j)) ==
          doctest::Approx(totals[j] / static_cast<double>(sc.X.total_tokens())).epsilon(1e-9));
  }
  CHECK((m.Phi.array() == 1.0).all());
  Eigen::MatrixXd Pi = Eigen::MatrixXd::Ones(30, 1) * m.F;
  CHECK(m.loglik == doctest::Approx(dense_loglik(sc.X, Pi)).epsilon(1e-10));
}

TEST_CASE("stored loglik matches the fitted parameters") {
  const auto sc = synthetic_corpus(3, 8, 60, 50, 0.7, 3);
  EmOptions opts;
  opts.restarts = 3;
  opts.seed = 11;
  opts.keep_trace = true;
  const auto m = em_fit(sc.X, 3, opts);
  CHECK(std::abs(m.loglik - log_likelihood(sc.X, m.Phi, m.F)) <= 1e-8 * std::abs(m.loglik));
  CHECK(std::abs(m.loglik - dense_loglik(sc.X, m.Phi * m.F)) <= 1e-8 * std::abs(m.loglik));
  for (std::size_t t = 1; t < m.trace.size(); ++t) CHECK(m.trace[t] >= m.trace[t - 1] - 1e-9 * std::abs(m.trace[t]));
  CHECK(m.max_loglik_drop < 1e-12);
  CHECK(m.max_mass_error < 1e-10);
  CHECK(m.restart_logliks.size() == 3);
  CHECK(m.loglik == *std::max_element(m.restart_logliks.begin(), m.restart_logliks.end()));
  for (Eigen::Index i = 0; i < m.Phi.rows(); ++i) CHECK(std::abs(m.Phi.row(i).sum() - 1.0) < 1e-12);
  for (Eigen::Index l = 0; l < m.F.rows(); ++l) CHECK(std::abs(m.F.row(l).sum() - 1.0) < 1e-12);
}

TEST_CASE("two disjoint components are recovered") {
  const auto sc = synthetic_corpus(2, 10, 400, 300, 1.0, 5);
  EmOptions opts;
  opts.seed = 1;
  const auto m = em_fit(sc.X, 2, opts);
  CHECK(oracle::best_matching_tv(m.F, sc.F) < 0.01);
}

TEST_CASE("fit is deterministic and thread-count invariant") {
  const auto sc = synthetic_corpus(3, 9, 80, 60, 0.8, 6);
  EmOptions opts;
  opts.restarts = 2;
  opts.seed = 4;
  const auto a = em_fit(sc.X, 4, opts);
  opts.threads = 3;
  const auto b = em_fit(sc.X, 4, opts);
  CHECK(a.loglik == b.loglik);
  CHECK(a.F == b.F);
  CHECK(a.Phi == b.Phi);
}

TEST_CASE("permuting terms permutes the columns of F") {
  const auto sc = synthetic_corpus(2, 6, 50, 40, 0.6, 7);
  const std::vector<std::size_t> perm{3, 0, 5, 1, 4, 2};  // old term j -> perm[j]
  auto trips = sc.X.triplets();
  for (auto& t : trips) t.term = perm[t.term];
  const DocTermMatrix Y(sc.X.n_docs(), 6, trips);
  EmOptions opts;
  opts.restarts = 1;
  opts.max_iters = 50;
  const auto a = em_fit(sc.X, 2, opts);
  // Same starting point: responsibilities are drawn per entry in document
  // order, which the permutation changes, so compare likelihood of the
  // permuted parameters instead of rerunning.
  Eigen::MatrixXd Fp(2, 6);
  for (std::size_t j = 0; j < 6; ++j) Fp.col(static_cast<Eigen::Index>(perm[j])) = a.F.col(static_cast<Eigen::Index>(j));
  CHECK(log_likelihood(Y, a.Phi, Fp) == doctest::Approx(a.loglik).epsilon(1e-12));
}

TEST_CASE("errors") {
  const DocTermMatrix empty_doc(2, 3, {{0, 1, 3}});
  CHECK_THROWS_AS(em_fit(empty_doc, 1, {}), InvalidArgument);
  const DocTermMatrix tiny(1, 3, {{0, 1, 2}});
  CHECK_THROWS_AS(em_fit(tiny, 3, {}), InvalidArgument);
  CHECK_THROWS_AS(em_fit(tiny, 0, {}), InvalidArgument);
}

TEST_CASE("identifiability check") {
  CHECK(identifiability_check(Eigen::MatrixXd::Identity(4, 4)) == std::vector<bool>(4, true));
  Eigen::MatrixXd F(3, 3);
  F << 1, 0, 0, 0, 1, 0, 0.5, 0.5, 0;
  CHECK(identifiability_check(F) == std::vector<bool>{true, true, false});
  CHECK_THROWS_AS(identifiability_check(Eigen::MatrixXd::Identity(1, 3)), InvalidArgument);
}

TEST_CASE("identifiability agrees with the low-dimensional oracles") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t J = 3 + seed % 2, L = 4 + seed % 13;
    const auto draws = sample(SamplerSpec::uniform(J, 500 + seed), L);
    Eigen::MatrixXd F(static_cast<Eigen::Index>(L), static_cast<Eigen::Index>(J));
    for (std::size_t l = 0; l < L; ++l)
      for (std::size_t j = 0; j < J; ++j) F(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(j)) = draws[l][j];
    std::vector<bool> expected;
    if (J == 3) {
      std::vector<Eigen::Vector2d> flat;
      for (std::size_t l = 0; l < L; ++l) flat.emplace_back(F(l, 0), F(l, 1));
      expected = oracle::extreme_2d(flat);
    } else {
      std::vector<Eigen::Vector3d> flat;
      for (std::size_t l = 0; l < L; ++l) flat.emplace_back(F(l, 0), F(l, 1), F(l, 2));
      expected = oracle::extreme_3d(flat);
    }
    CHECK(identifiability_check(F) == expected);
  }
}

TEST_CASE("choquet read-off") {
  AdmixtureModel basis;
  basis.F = Eigen::MatrixXd::Identity(3, 3);
  basis.Phi.resize(2, 3);
  basis.Phi << 0.2, 0.3, 0.5, 1, 0, 0;
  const auto w = choquet_from_fit(basis);
  REQUIRE(w.size() == 2);
  CHECK(w[0].coords() == std::vector<double>{0.2, 0.3, 0.5});

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    AdmixtureModel m;
    const auto verts = sample(SamplerSpec::uniform(4, 70 + seed), 4);
    m.F.resize(4, 4);
    for (int l = 0; l < 4; ++l)
      for (int j = 0; j < 4; ++j) m.F(l, j) = verts[l][j];
    const auto phis = sample(SamplerSpec::uniform(4, 90 + seed), 25);
    m.Phi.resize(25, 4);
    for (int i = 0; i < 25; ++i)
      for (int l = 0; l < 4; ++l) m.Phi(i, l) = phis[i][l];
    CHECK_NOTHROW(choquet_from_fit(m));
  }

  AdmixtureModel wide;
  wide.F = Eigen::MatrixXd::Identity(2, 3);
  wide.Phi = Eigen::MatrixXd::Constant(1, 2, 0.5);
  CHECK_THROWS_WITH_AS(choquet_from_fit(wide), doctest::Contains("non-simplex"), InvalidArgument);
}

TEST_CASE("pipeline stops when every component is extreme") {
  const auto sc = synthetic_corpus(3, 3, 200, 100, 1.0, 8);
  PipelineOptions opts;
  opts.em.restarts = 2;
  const auto r = two_stage(sc.X, 3, opts);
  REQUIRE(r.rounds.size() == 1);
  CHECK(r.final_M == 3);
  CHECK(r.converged);
  CHECK(r.rounds[0].pca_dim == 2);
  CHECK(!r.warnings.empty());  // pca_dim 5 reduced to rank 2
  CHECK(r.final_identifiable == std::vector<bool>(3, true));
  // M = J on three terms: measures are read off.
  CHECK(r.choquet.size() == 200);
}

TEST_CASE("pipeline M sequence never increases and drops empty terms") {
  auto sc = synthetic_corpus(3, 8, 150, 80, 0.9, 10);
  auto trips = sc.X.triplets();
  for (auto& t : trips) if (t.term >= 4) t.term += 1;  // term 4 never occurs
  const DocTermMatrix X(sc.X.n_docs(), 9, trips);
  PipelineOptions opts;
  opts.em.restarts = 2;
  opts.em.max_iters = 100;
  opts.max_rounds = 3;
  const auto r = two_stage(X, 6, opts);
  CHECK(r.rounds.size() <= 3);
  for (std::size_t k = 1; k < r.rounds.size(); ++k) {
    CHECK(r.rounds[k].M <= r.rounds[k - 1].M);
    CHECK(r.rounds[k].L == r.rounds[k - 1].M);
  }
  CHECK(r.kept_terms.size() == 8);
  CHECK(r.final_model.F.cols() == 9);
  CHECK((r.final_model.F.col(4).array() == 0.0).all());
  CHECK_THROWS_AS(two_stage(X, 1, opts), InvalidArgument);
}

}
