#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mixgeom/simplex.hpp"

namespace mixgeom {

/// Points farther than this from a frame's hull are rejected.
inline constexpr double kMembershipTolerance = 1e-8;
/// Frames with a larger condition number are rejected as ill-conditioned.
inline constexpr double kMaxFrameCondition = 1e10;

/// J affinely independent points of the J-simplex, none inside the hull of
/// the others. Every point of their hull has a unique representing measure.
class SimplexFrame {
 public:
  const std::vector<ProbabilityVector>& vertices() const noexcept { return vertices_; }
  std::size_t size() const noexcept { return vertices_.size(); }
  std::size_t dim() const noexcept { return vertices_.front().size(); }
  /// Condition number of the J x J vertex matrix.
  double condition() const noexcept { return condition_; }
  /// Vertex matrix, one vertex per column.
  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }

 private:
  friend SimplexFrame make_frame(std::vector<ProbabilityVector> vertices);
  std::vector<ProbabilityVector> vertices_;
  Eigen::MatrixXd matrix_;
  double condition_ = 0.0;
};

/// Weights of a point over the frame vertices.
using ChoquetMeasure = ProbabilityVector;

/// Throws InvalidArgument naming the violated requirement: M != J,
/// affine dependence, or a vertex inside the others' hull.
SimplexFrame make_frame(std::vector<ProbabilityVector> vertices);

/// Solves p = sum_l w_l f_l directly. Points within kMembershipTolerance of
/// the hull are solved and clipped; farther points throw OutsideHull.
ChoquetMeasure choquet_measure(const ProbabilityVector& p,
                               const SimplexFrame& frame);

/// Same measure through nonnegative least squares on the augmented system
/// [F; 1'] w = [p; 1]. Independent of the direct solve.
ChoquetMeasure choquet_measure_nnls(const ProbabilityVector& p,
                                    const SimplexFrame& frame);

/// sum_l w_l f_l.
ProbabilityVector reconstruct(const ChoquetMeasure& w, const SimplexFrame& frame);

/// Lawson-Hanson nonnegative least squares: argmin ||A x - b||, x >= 0.
Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                     double tol = 1e-14, int max_iter = 0);

}  // namespace mixgeom
