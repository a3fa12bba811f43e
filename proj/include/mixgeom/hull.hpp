#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "mixgeom/simplex.hpp"

namespace mixgeom {

/// Points closer than this are merged when a PointSet is built.
inline constexpr double kDuplicateTolerance = 1e-9;
/// Default distance-to-hull threshold separating extreme from interior.
inline constexpr double kExtremeTolerance = 1e-7;

/// A finite set of points in R^d with near-duplicates removed.
///
/// Points are stored column-wise. Each distinct point remembers the index of
/// the first input point it came from, so results can be reported in terms
/// of the caller's numbering.
class PointSet {
 public:
  /// One point per row of `rows`.
  explicit PointSet(const Eigen::MatrixXd& rows);
  explicit PointSet(std::span<const ProbabilityVector> points);
  explicit PointSet(const std::vector<std::vector<double>>& rows);

  Eigen::Index size() const noexcept { return columns_.cols(); }
  Eigen::Index dim() const noexcept { return columns_.rows(); }
  std::size_t input_size() const noexcept { return distinct_of_input_.size(); }

  /// d x size() matrix, one distinct point per column.
  const Eigen::MatrixXd& columns() const noexcept { return columns_; }
  auto point(Eigen::Index k) const { return columns_.col(k); }

  std::size_t source_index(Eigen::Index k) const { return source_[k]; }
  Eigen::Index distinct_index(std::size_t input_index) const;

 private:
  void build(const Eigen::MatrixXd& columns);

  Eigen::MatrixXd columns_;
  std::vector<std::size_t> source_;
  std::vector<Eigen::Index> distinct_of_input_;
};

struct ExtremalSet {
  std::vector<std::size_t> indices;  // input indices, sorted
  std::size_t f0 = 0;
};

/// Result of projecting a target onto the convex hull of some points.
struct HullProjection {
  double distance = 0.0;       // upper bound, exact at convergence
  double lower_bound = 0.0;    // certified lower bound on the distance
  Eigen::VectorXd nearest;     // point of the hull realizing `distance`
  std::vector<std::pair<Eigen::Index, double>> weights;  // active atoms
  std::size_t iterations = 0;
};

/// Early-exit thresholds for `project_onto_hull`. The search stops as soon
/// as the distance is certified to be <= `below` or > `above`.
struct ProjectionStop {
  double below = -1.0;
  double above = std::numeric_limits<double>::infinity();
};

/// Nearest point to `target` in the hull of columns `candidates` of
/// `columns` (all columns when `candidates` is empty), by Wolfe's
/// minimum-norm-point method. Accuracy on the distance is about 1e-12.
HullProjection project_onto_hull(const Eigen::MatrixXd& columns,
                                 std::span<const Eigen::Index> candidates,
                                 const Eigen::Ref<const Eigen::VectorXd>& target,
                                 ProjectionStop stop = {});

double point_to_hull_distance(const Eigen::Ref<const Eigen::VectorXd>& p,
                              const PointSet& ps);

/// True iff input point `i` is farther than `tol` from the hull of the
/// other distinct points.
bool is_extreme(std::size_t i, const PointSet& ps,
                double tol = kExtremeTolerance);

ExtremalSet extremal_set(const PointSet& ps, double tol = kExtremeTolerance);

/// Extremality of every row of `rows` against the hull of the remaining
/// rows, without merging duplicates: a repeated row is never extreme.
std::vector<bool> extreme_rows(const Eigen::MatrixXd& rows,
                               double tol = kExtremeTolerance);

/// Hausdorff distance between Conv(a) and Conv(b).
double hausdorff(const PointSet& a, const PointSet& b);

struct TowerCount {
  std::size_t J = 0;
  std::uint64_t towers = 0;
};

/// Number of maximal face chains of the (J-1)-simplex, 2 <= J <= 6.
TowerCount count_towers(std::size_t J);

/// Limit constant towers / ((J+1)^(J-1) (J-1)!) of the expected vertex count.
double c_constant(std::size_t J);

struct PcaProjection {
  Eigen::MatrixXd scores;                    // rows x d
  Eigen::MatrixXd axes;                      // columns x d, orthonormal
  Eigen::RowVectorXd mean;                   // column means
  Eigen::VectorXd explained_variance_ratio;  // first d components
  Eigen::Index rank = 0;                     // numerical rank of centered data

  PointSet point_set() const { return PointSet(scores); }
};

/// Numerical rank of the column-centered data.
Eigen::Index centered_rank(const Eigen::MatrixXd& data);

/// Centers rows by the column mean and projects them on the top-d right
/// singular directions. Each axis is signed so that its largest-magnitude
/// entry is positive.
PcaProjection pca_project(const Eigen::MatrixXd& data, Eigen::Index d);

}  // namespace mixgeom
