#include "mixgeom/hull.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "mixgeom/errors.hpp"

namespace mixgeom {

namespace {

using Eigen::Index;

constexpr std::size_t kMaxMajorIterations = 100000;
constexpr double kConvergenceGap = 1e-12;

Eigen::MatrixXd to_columns(std::span<const ProbabilityVector> points) {
  if (points.empty()) throw InvalidArgument("point set is empty");
  const auto d = static_cast<Index>(points.front().size());
  Eigen::MatrixXd cols(d, static_cast<Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (static_cast<Index>(points[i].size()) != d) {
      throw InvalidArgument("all points must share one dimension");
    }
    for (Index j = 0; j < d; ++j) cols(j, static_cast<Index>(i)) = points[i][j];
  }
  return cols;
}

Eigen::MatrixXd to_columns(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw InvalidArgument("point set is empty");
  const auto d = static_cast<Index>(rows.front().size());
  Eigen::MatrixXd cols(d, static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (static_cast<Index>(rows[i].size()) != d) {
      throw InvalidArgument("all points must share one dimension");
    }
    for (Index j = 0; j < d; ++j) cols(j, static_cast<Index>(i)) = rows[i][j];
  }
  return cols;
}

// Minimizes ||sum_k mu_k y_k|| over the affine hull of the corral, with
// y_k = column(S[k]) - target. Solved as least squares in the differences
// y_k - y_0 so the Gram matrix is never formed.
Eigen::VectorXd affine_minimizer(const Eigen::MatrixXd& columns,
                                 const std::vector<Index>& corral,
                                 const Eigen::VectorXd& target) {
  const auto s = static_cast<Index>(corral.size());
  Eigen::VectorXd mu(s);
  if (s == 1) {
    mu(0) = 1.0;
    return mu;
  }
  const Eigen::VectorXd y0 = columns.col(corral[0]) - target;
  Eigen::MatrixXd diffs(columns.rows(), s - 1);
  for (Index k = 1; k < s; ++k) {
    diffs.col(k - 1) = columns.col(corral[k]) - columns.col(corral[0]);
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(diffs);
  const Eigen::VectorXd tail = cod.solve(-y0);
  mu.tail(s - 1) = tail;
  mu(0) = 1.0 - tail.sum();
  return mu;
}

}  // namespace

// ---------------------------------------------------------------------------
// PointSet

PointSet::PointSet(const Eigen::MatrixXd& rows) {
  if (rows.rows() == 0 || rows.cols() == 0) {
    throw InvalidArgument("point set is empty");
  }
  build(rows.transpose());
}

PointSet::PointSet(std::span<const ProbabilityVector> points) {
  build(to_columns(points));
}

PointSet::PointSet(const std::vector<std::vector<double>>& rows) {
  build(to_columns(rows));
}

void PointSet::build(const Eigen::MatrixXd& cols) {
  const Index n = cols.cols();
  if (n == 0 || cols.rows() == 0) throw InvalidArgument("point set is empty");
  if (!cols.allFinite()) throw InvalidArgument("point set has non-finite coordinates");

  // Sweep in order of the first coordinate; two points within tolerance
  // differ by less than the tolerance in that coordinate.
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return cols(0, a) < cols(0, b);
  });
  std::vector<Index> rep(static_cast<std::size_t>(n), -1);
  const double tol2 = kDuplicateTolerance * kDuplicateTolerance;
  for (std::size_t a = 0; a < order.size(); ++a) {
    const Index ia = order[a];
    for (std::size_t b = a + 1; b < order.size(); ++b) {
      const Index ib = order[b];
      if (cols(0, ib) - cols(0, ia) >= kDuplicateTolerance) break;
      if ((cols.col(ia) - cols.col(ib)).squaredNorm() < tol2) {
        // Keep the earliest input index as representative.
        const Index lo = std::min(ia, ib), hi = std::max(ia, ib);
        Index root_lo = lo;
        while (rep[root_lo] >= 0) root_lo = rep[root_lo];
        Index root_hi = hi;
        while (rep[root_hi] >= 0) root_hi = rep[root_hi];
        if (root_lo != root_hi) {
          rep[std::max(root_lo, root_hi)] = std::min(root_lo, root_hi);
        }
      }
    }
  }

  distinct_of_input_.assign(static_cast<std::size_t>(n), -1);
  std::vector<Index> kept;
  for (Index i = 0; i < n; ++i) {
    if (rep[i] < 0) {
      distinct_of_input_[i] = static_cast<Index>(kept.size());
      kept.push_back(i);
    }
  }
  for (Index i = 0; i < n; ++i) {
    Index root = i;
    while (rep[root] >= 0) root = rep[root];
    distinct_of_input_[i] = distinct_of_input_[root];
  }
  columns_.resize(cols.rows(), static_cast<Index>(kept.size()));
  source_.resize(kept.size());
  for (std::size_t k = 0; k < kept.size(); ++k) {
    columns_.col(static_cast<Index>(k)) = cols.col(kept[k]);
    source_[k] = static_cast<std::size_t>(kept[k]);
  }
}

Index PointSet::distinct_index(std::size_t input_index) const {
  if (input_index >= distinct_of_input_.size()) {
    throw InvalidArgument("point index " + std::to_string(input_index) +
                          " out of range (" +
                          std::to_string(distinct_of_input_.size()) +
                          " points)");
  }
  return distinct_of_input_[input_index];
}

// ---------------------------------------------------------------------------
// Projection onto a hull

HullProjection project_onto_hull(const Eigen::MatrixXd& columns,
                                 std::span<const Index> candidates,
                                 const Eigen::Ref<const Eigen::VectorXd>& target,
                                 ProjectionStop stop) {
  if (columns.cols() == 0) throw InvalidArgument("hull has no points");
  if (target.size() != columns.rows()) {
    throw InvalidArgument("target dimension does not match the point set");
  }
  std::vector<Index> all;
  if (candidates.empty()) {
    all.resize(static_cast<std::size_t>(columns.cols()));
    std::iota(all.begin(), all.end(), Index{0});
    candidates = all;
  }
  const Eigen::VectorXd t = target;

  // Start from the candidate nearest to the target.
  Index start = candidates[0];
  double best = std::numeric_limits<double>::infinity();
  for (Index k : candidates) {
    const double dist2 = (columns.col(k) - t).squaredNorm();
    if (dist2 < best) {
      best = dist2;
      start = k;
    }
  }

  std::vector<Index> corral{start};
  std::vector<double> lambda{1.0};
  Eigen::VectorXd x = columns.col(start) - t;

  HullProjection result;
  auto finish = [&](double ub, double lb) {
    result.distance = ub;
    result.lower_bound = std::min(lb, ub);
    result.nearest = x + t;
    result.weights.clear();
    for (std::size_t k = 0; k < corral.size(); ++k) {
      result.weights.emplace_back(corral[k], lambda[k]);
    }
    return result;
  };

  double previous_norm = std::numeric_limits<double>::infinity();
  for (std::size_t iter = 0; iter < kMaxMajorIterations; ++iter) {
    result.iterations = iter + 1;
    const double ub = x.norm();
    if (ub <= stop.below || ub == 0.0) return finish(ub, 0.0);

    // Linear minimization: candidate minimizing <x, y_k>.
    Index entering = candidates[0];
    double min_inner = std::numeric_limits<double>::infinity();
    const double x_dot_t = x.dot(t);
    for (Index k : candidates) {
      const double inner = x.dot(columns.col(k)) - x_dot_t;
      if (inner < min_inner) {
        min_inner = inner;
        entering = k;
      }
    }
    const double lb = min_inner > 0.0 ? min_inner / ub : 0.0;
    if (lb > stop.above) return finish(ub, lb);
    if (ub - lb <= kConvergenceGap) return finish(ub, lb);
    if (ub >= previous_norm) return finish(ub, lb);  // stalled
    if (std::find(corral.begin(), corral.end(), entering) != corral.end()) {
      return finish(ub, lb);
    }
    previous_norm = ub;

    corral.push_back(entering);
    lambda.push_back(0.0);
    // Minor cycles: move toward the affine minimizer while it leaves the
    // relative interior of the corral's hull.
    for (;;) {
      const Eigen::VectorXd mu = affine_minimizer(columns, corral, t);
      bool interior = true;
      for (Index k = 0; k < mu.size(); ++k) {
        if (!(mu(k) > 0.0)) {
          interior = false;
          break;
        }
      }
      if (interior) {
        for (std::size_t k = 0; k < corral.size(); ++k) lambda[k] = mu(static_cast<Index>(k));
        break;
      }
      double theta = 1.0;
      std::size_t leaving = 0;
      for (std::size_t k = 0; k < corral.size(); ++k) {
        const double m = mu(static_cast<Index>(k));
        if (m <= 0.0) {
          const double step = lambda[k] / (lambda[k] - m);
          if (step < theta) {
            theta = step;
            leaving = k;
          }
        }
      }
      for (std::size_t k = 0; k < corral.size(); ++k) {
        lambda[k] += theta * (mu(static_cast<Index>(k)) - lambda[k]);
      }
      lambda[leaving] = 0.0;
      std::vector<Index> next_corral;
      std::vector<double> next_lambda;
      double total = 0.0;
      for (std::size_t k = 0; k < corral.size(); ++k) {
        if (lambda[k] > 0.0) {
          next_corral.push_back(corral[k]);
          next_lambda.push_back(lambda[k]);
          total += lambda[k];
        }
      }
      if (next_corral.empty()) {
        next_corral.push_back(corral[leaving]);
        next_lambda.push_back(1.0);
        total = 1.0;
      }
      for (double& l : next_lambda) l /= total;
      corral = std::move(next_corral);
      lambda = std::move(next_lambda);
      if (corral.size() == 1) break;
    }
    x.setZero();
    for (std::size_t k = 0; k < corral.size(); ++k) {
      x += lambda[k] * (columns.col(corral[k]) - t);
    }
  }
  throw NumericFailure("hull projection did not converge");
}

double point_to_hull_distance(const Eigen::Ref<const Eigen::VectorXd>& p,
                              const PointSet& ps) {
  if (p.size() != ps.dim()) {
    throw InvalidArgument("point dimension does not match the point set");
  }
  return project_onto_hull(ps.columns(), {}, p).distance;
}

namespace {

std::vector<Index> all_but(Index n, Index skip) {
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) {
    if (k != skip) out.push_back(k);
  }
  return out;
}

bool distinct_is_extreme(const Eigen::MatrixXd& columns, Index k, double tol) {
  const auto others = all_but(columns.cols(), k);
  const auto proj = project_onto_hull(columns, others, columns.col(k),
                                      {.below = tol, .above = tol});
  return proj.distance > tol;
}

}  // namespace

bool is_extreme(std::size_t i, const PointSet& ps, double tol) {
  const Index k = ps.distinct_index(i);
  if (ps.size() < 2) {
    throw InvalidArgument("extremality needs at least two distinct points");
  }
  return distinct_is_extreme(ps.columns(), k, tol);
}

ExtremalSet extremal_set(const PointSet& ps, double tol) {
  const Index n = ps.size();
  if (n < 2) {
    throw InvalidArgument(
        "degenerate point set: fewer than two distinct points");
  }
  const Eigen::MatrixXd& cols = ps.columns();
  const Eigen::VectorXd centroid = cols.rowwise().mean();

  // Outermost points first, so the pool hull grows toward the true hull
  // early and most interior points are settled against the small pool.
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::vector<double> spread(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) spread[k] = (cols.col(k) - centroid).squaredNorm();
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return spread[a] > spread[b]; });

  // Points on one line (within tol): the two ends are the only extremes.
  const Eigen::VectorXd axis = (cols.col(order.front()) - centroid).normalized();
  Eigen::VectorXd along = axis.transpose() * (cols.colwise() - centroid);
  const double off_line =
      ((cols.colwise() - centroid) - axis * along.transpose()).colwise().norm().maxCoeff();
  if (off_line <= tol) {
    Index lo = 0, hi = 0;
    along.minCoeff(&lo);
    along.maxCoeff(&hi);
    ExtremalSet out;
    out.indices = {ps.source_index(lo), ps.source_index(hi)};
    std::sort(out.indices.begin(), out.indices.end());
    out.f0 = 2;
    return out;
  }

  std::vector<char> in_pool(static_cast<std::size_t>(n), 0);
  std::vector<Index> pool;
  auto add_to_pool = [&](Index k) {
    if (!in_pool[k]) {
      in_pool[k] = 1;
      pool.push_back(k);
    }
  };
  for (Index j = 0; j < cols.rows(); ++j) {
    Index lo = 0, hi = 0;
    cols.row(j).minCoeff(&lo);
    cols.row(j).maxCoeff(&hi);
    add_to_pool(lo);
    add_to_pool(hi);
  }

  std::vector<char> extreme(static_cast<std::size_t>(n), 0);
  std::vector<Index> candidates;
  for (Index k : order) {
    candidates.clear();
    for (Index c : pool) {
      if (c != k) candidates.push_back(c);
    }
    if (!candidates.empty()) {
      const auto inner = project_onto_hull(cols, candidates, cols.col(k),
                                           {.below = tol, .above = tol});
      if (inner.distance <= tol) continue;
    }
    const auto others = all_but(n, k);
    const auto full = project_onto_hull(cols, others, cols.col(k),
                                        {.below = tol, .above = tol});
    for (const auto& [atom, weight] : full.weights) add_to_pool(atom);
    if (full.distance > tol) {
      extreme[k] = 1;
      add_to_pool(k);
    }
  }

  ExtremalSet out;
  for (Index k = 0; k < n; ++k) {
    if (extreme[k]) out.indices.push_back(ps.source_index(k));
  }
  std::sort(out.indices.begin(), out.indices.end());
  out.f0 = out.indices.size();
  return out;
}

std::vector<bool> extreme_rows(const Eigen::MatrixXd& rows, double tol) {
  if (rows.rows() < 2) {
    throw InvalidArgument("extremality needs at least two points");
  }
  const Eigen::MatrixXd cols = rows.transpose();
  std::vector<bool> out(static_cast<std::size_t>(rows.rows()));
  for (Index k = 0; k < rows.rows(); ++k) {
    out[static_cast<std::size_t>(k)] = distinct_is_extreme(cols, k, tol);
  }
  return out;
}

double hausdorff(const PointSet& a, const PointSet& b) {
  if (a.dim() != b.dim()) {
    throw InvalidArgument("hausdorff: dimension mismatch (" +
                          std::to_string(a.dim()) + " vs " +
                          std::to_string(b.dim()) + ")");
  }
  double d = 0.0;
  for (Index k = 0; k < a.size(); ++k) {
    d = std::max(d, project_onto_hull(b.columns(), {}, a.point(k)).distance);
  }
  for (Index k = 0; k < b.size(); ++k) {
    d = std::max(d, project_onto_hull(a.columns(), {}, b.point(k)).distance);
  }
  return d;
}

// ---------------------------------------------------------------------------
// Towers

TowerCount count_towers(std::size_t J) {
  if (J < 2 || J > 6) {
    throw InvalidArgument("count_towers supports 2 <= J <= 6, got " +
                          std::to_string(J));
  }
  // Faces of the (J-1)-simplex are the nonempty subsets of its J vertices.
  const unsigned full = (1u << J) - 1u;
  std::vector<unsigned> faces;
  for (unsigned s = 1; s <= full; ++s) faces.push_back(s);

  // Cover relation: g covers f when f is a subset of g of one fewer element.
  auto covers = [](unsigned f, unsigned g) {
    return (f & g) == f && std::popcount(g) == std::popcount(f) + 1;
  };
  // chains[f] = number of maximal chains from face f up to the full face.
  std::vector<std::uint64_t> chains(full + 1, 0);
  std::vector<unsigned> by_size = faces;
  std::stable_sort(by_size.begin(), by_size.end(), [](unsigned a, unsigned b) {
    return std::popcount(a) > std::popcount(b);
  });
  for (unsigned f : by_size) {
    if (f == full) {
      chains[f] = 1;
      continue;
    }
    std::uint64_t total = 0;
    for (unsigned g : faces) {
      if (covers(f, g)) total += chains[g];
    }
    chains[f] = total;
  }
  std::uint64_t towers = 0;
  for (unsigned f : faces) {
    if (std::popcount(f) == 1) towers += chains[f];
  }
  return {J, towers};
}

double c_constant(std::size_t J) {
  const auto towers = static_cast<double>(count_towers(J).towers);
  double denom = std::pow(static_cast<double>(J + 1), static_cast<double>(J - 1));
  for (std::size_t k = 2; k < J; ++k) denom *= static_cast<double>(k);
  return towers / denom;
}

// ---------------------------------------------------------------------------
// PCA

namespace {

constexpr double kRankTolerance = 1e-10;

Eigen::Index rank_of(const Eigen::VectorXd& singular) {
  if (singular.size() == 0 || singular(0) <= 0.0) return 0;
  Index r = 0;
  for (Index k = 0; k < singular.size(); ++k) {
    if (singular(k) > kRankTolerance * singular(0)) ++r;
  }
  return r;
}

}  // namespace

Eigen::Index centered_rank(const Eigen::MatrixXd& data) {
  const Eigen::MatrixXd centered = data.rowwise() - data.colwise().mean();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered);
  return rank_of(svd.singularValues());
}

PcaProjection pca_project(const Eigen::MatrixXd& data, Eigen::Index d) {
  const Index rows = data.rows(), cols = data.cols();
  if (d < 2) throw InvalidArgument("pca target dimension must be at least 2");
  if (d > std::min(rows - 1, cols)) {
    throw InvalidArgument("pca target dimension " + std::to_string(d) +
                          " exceeds min(rows-1, columns) = " +
                          std::to_string(std::min(rows - 1, cols)));
  }
  PcaProjection out;
  out.mean = data.colwise().mean();
  const Eigen::MatrixXd centered = data.rowwise() - out.mean;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  out.rank = rank_of(sigma);
  if (out.rank < d) {
    throw InvalidArgument(
        "data rank " + std::to_string(out.rank) +
        " is below the requested pca dimension " + std::to_string(d) +
        "; attainable dimensions are 2.." + std::to_string(out.rank));
  }
  out.axes = svd.matrixV().leftCols(d);
  for (Index k = 0; k < d; ++k) {
    Index arg = 0;
    out.axes.col(k).cwiseAbs().maxCoeff(&arg);
    if (out.axes(arg, k) < 0.0) out.axes.col(k) *= -1.0;
  }
  out.scores = centered * out.axes;
  const double total = sigma.squaredNorm();
  out.explained_variance_ratio = sigma.head(d).array().square() / total;
  return out;
}

}  // namespace mixgeom
