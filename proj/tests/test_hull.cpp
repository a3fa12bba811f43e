#include <doctest.h>

#include <cmath>
#include <random>

#include "mixgeom/errors.hpp"
#include "mixgeom/hull.hpp"
#include "oracles.hpp"

using namespace mixgeom;

namespace {

Eigen::MatrixXd uniform_rows(std::size_t J, std::size_t n, std::uint64_t seed) {
  const auto draws = sample(SamplerSpec::uniform(J, seed), n);
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(J));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < J; ++j) rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = draws[i][j];
  }
  return rows;
}

}  // namespace

TEST_SUITE("hull") {

TEST_CASE("point set merges near-duplicates onto the first occurrence") {
  Eigen::MatrixXd rows(4, 2);
  rows << 0, 1, 1, 0, 0, 1 + 1e-12, 0.5, 0.5;
  const PointSet ps(rows);
  CHECK(ps.size() == 3);
  CHECK(ps.input_size() == 4);
  CHECK(ps.distinct_index(2) == ps.distinct_index(0));
  CHECK(ps.source_index(ps.distinct_index(2)) == 0);
}

TEST_CASE("distance to a segment, closed form") {
  Eigen::MatrixXd cols(2, 2);
  cols << 0, 2, 0, 0;
  std::vector<Eigen::Index> none;
  const Eigen::Vector2d above(1.0, 3.0), beyond(5.0, 4.0);
  CHECK(project_onto_hull(cols, none, above).distance == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(project_onto_hull(cols, none, beyond).distance == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("distance to the standard triangle, closed form") {
  const PointSet tri(Eigen::MatrixXd::Identity(3, 3));
  // Barycenter lies inside.
  CHECK(point_to_hull_distance(Eigen::Vector3d(1, 1, 1) / 3.0, tri) < 1e-12);
  // (1,1,-1)/1: nearest point of the triangle is (1/2, 1/2, 0).
  const Eigen::Vector3d p(1.0, 1.0, -1.0);
  CHECK(point_to_hull_distance(p, tri) ==
        doctest::Approx(std::sqrt(0.25 + 0.25 + 1.0)).epsilon(1e-12));
  // Off-plane point above the barycenter: distance is the offset along the
  // normal (1,1,1)/sqrt(3).
  const Eigen::Vector3d q = Eigen::Vector3d(1, 1, 1) / 3.0 + 0.1 * Eigen::Vector3d(1, 1, 1) / std::sqrt(3.0);
  CHECK(point_to_hull_distance(q, tri) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("segment endpoints are the only extremes") {
  Eigen::MatrixXd rows(5, 2);
  rows << 0.1, 0.9, 0.5, 0.5, 0.9, 0.1, 0.3, 0.7, 0.6, 0.4;
  const auto e = extremal_set(PointSet(rows));
  CHECK(e.f0 == 2);
  CHECK(e.indices == std::vector<std::size_t>{0, 2});
}

TEST_CASE("simplex vertices plus interior points") {
  Eigen::MatrixXd rows(5, 4);
  rows.topRows(4) = Eigen::MatrixXd::Identity(4, 4);
  rows.row(4).setConstant(0.25);
  const PointSet ps(rows);
  const auto e = extremal_set(ps);
  CHECK(e.f0 == 4);
  CHECK_FALSE(is_extreme(4, ps));
  CHECK(is_extreme(0, ps));
}

TEST_CASE("extremal set matches the planar oracle on random triangles") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto rows = uniform_rows(3, 25, seed);
    std::vector<Eigen::Vector2d> flat;
    for (Eigen::Index i = 0; i < rows.rows(); ++i) flat.emplace_back(rows(i, 0), rows(i, 1));
    const auto expected = oracle::extreme_2d(flat);
    const auto got = extremal_set(PointSet(rows));
    std::vector<std::size_t> want;
    for (std::size_t i = 0; i < expected.size(); ++i) if (expected[i]) want.push_back(i);
    CHECK(got.indices == want);
    CHECK(got.f0 == want.size());
  }
}

TEST_CASE("extremal set matches the tetrahedron oracle in 3-D") {
  for (std::uint64_t seed = 100; seed < 115; ++seed) {
    const auto rows = uniform_rows(4, 18, seed);
    std::vector<Eigen::Vector3d> flat;
    for (Eigen::Index i = 0; i < rows.rows(); ++i) flat.emplace_back(rows(i, 0), rows(i, 1), rows(i, 2));
    const auto expected = oracle::extreme_3d(flat);
    const auto got = extreme_rows(rows);
    CHECK(got == expected);
  }
}

TEST_CASE("hull vertices are invariant under point permutation") {
  const auto rows = uniform_rows(4, 400, 77);
  const auto base = extremal_set(PointSet(rows));
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(rows.rows()));
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 g(5);
  std::shuffle(perm.begin(), perm.end(), g);
  Eigen::MatrixXd shuffled(rows.rows(), rows.cols());
  for (std::size_t k = 0; k < perm.size(); ++k) shuffled.row(static_cast<Eigen::Index>(k)) = rows.row(perm[k]);
  const auto moved = extremal_set(PointSet(shuffled));
  std::vector<std::size_t> mapped;
  for (auto k : moved.indices) mapped.push_back(static_cast<std::size_t>(perm[k]));
  std::sort(mapped.begin(), mapped.end());
  CHECK(mapped == base.indices);
}

TEST_CASE("extreme_rows treats repeated rows as interior") {
  Eigen::MatrixXd rows(3, 2);
  rows << 1, 0, 0, 1, 0, 1;
  CHECK(extreme_rows(rows) == std::vector<bool>{true, false, false});
}

TEST_CASE("degenerate inputs are rejected") {
  Eigen::MatrixXd one(1, 3);
  one << 0.2, 0.3, 0.5;
  CHECK_THROWS_AS(extremal_set(PointSet(one)), InvalidArgument);
  CHECK_THROWS_AS(PointSet(Eigen::MatrixXd(0, 3)), InvalidArgument);
}

TEST_CASE("hausdorff distance") {
  const PointSet tri(Eigen::MatrixXd::Identity(3, 3));
  CHECK(hausdorff(tri, tri) < 1e-12);
  Eigen::MatrixXd inner(3, 3);
  inner << 0.8, 0.1, 0.1, 0.1, 0.8, 0.1, 0.1, 0.1, 0.8;
  // Vertex e_1 is farthest from the inner triangle; nearest point is its
  // vertex (0.8, 0.1, 0.1).
  CHECK(hausdorff(PointSet(inner), tri) == doctest::Approx(std::sqrt(0.04 + 0.01 + 0.01)).epsilon(1e-10));
  CHECK(hausdorff(PointSet(inner), tri) <= 2.0);
  CHECK_THROWS_AS(hausdorff(tri, PointSet(Eigen::MatrixXd::Identity(2, 2))), InvalidArgument);
}

TEST_CASE("towers of the simplex agree with flag enumeration") {
  for (std::size_t J = 2; J <= 6; ++J) {
    CHECK(count_towers(J).towers == oracle::flag_count(static_cast<int>(J)));
  }
  CHECK(count_towers(2).towers == 2);
  CHECK(count_towers(3).towers == 6);
  CHECK_THROWS_AS(count_towers(1), InvalidArgument);
  CHECK_THROWS_AS(count_towers(7), InvalidArgument);
}

TEST_CASE("c(J) constants") {
  CHECK(std::abs(c_constant(2) - 2.0 / 3.0) < 1e-12);
  CHECK(std::abs(c_constant(3) - 0.1875) < 1e-12);
  CHECK(std::abs(c_constant(4) - 0.032) < 1e-12);
}

TEST_CASE("pca recovers a planted plane") {
  std::mt19937_64 g(3);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd data(50, 5);
  for (Eigen::Index i = 0; i < 50; ++i) {
    const double a = 3 * nd(g), b = nd(g);
    data.row(i) << a, b, a + b, 0.0, 1.0;
  }
  CHECK(centered_rank(data) == 2);
  const auto proj = pca_project(data, 2);
  CHECK(proj.explained_variance_ratio.sum() == doctest::Approx(1.0));
  CHECK((proj.axes.transpose() * proj.axes - Eigen::Matrix2d::Identity()).norm() < 1e-12);
  // Reconstruction from two components is exact for rank-2 data.
  const Eigen::MatrixXd back = (proj.scores * proj.axes.transpose()).rowwise() + proj.mean;
  CHECK((back - data).norm() < 1e-10);
  for (Eigen::Index k = 0; k < 2; ++k) {
    Eigen::Index arg;
    proj.axes.col(k).cwiseAbs().maxCoeff(&arg);
    CHECK(proj.axes(arg, k) > 0);
  }
  CHECK_THROWS_AS(pca_project(data, 3), InvalidArgument);
  CHECK_THROWS_AS(pca_project(data, 1), InvalidArgument);
}

}
