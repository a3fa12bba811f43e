#include "mixgeom/choquet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mixgeom/errors.hpp"
#include "mixgeom/hull.hpp"

namespace mixgeom {

namespace {

Eigen::VectorXd as_vector(const ProbabilityVector& p) {
  return Eigen::Map<const Eigen::VectorXd>(p.coords().data(),
                                           static_cast<Eigen::Index>(p.size()));
}

ChoquetMeasure clip_and_wrap(Eigen::VectorXd w) {
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    if (w(k) < 0.0) w(k) = 0.0;
  }
  return ProbabilityVector::validate(std::span<const double>(w.data(), w.size()));
}

}  // namespace

SimplexFrame make_frame(std::vector<ProbabilityVector> vertices) {
  if (vertices.empty()) throw InvalidArgument("frame has no vertices");
  const std::size_t J = vertices.front().size();
  for (const auto& v : vertices) {
    if (v.size() != J) throw InvalidArgument("frame vertices differ in dimension");
  }
  if (vertices.size() != J) {
    throw InvalidArgument("frame needs exactly J = " + std::to_string(J) +
                          " vertices, got " + std::to_string(vertices.size()) +
                          " (non-simplex hulls have no unique representation)");
  }
  const auto n = static_cast<Eigen::Index>(J);
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index k = 0; k < n; ++k) m.col(k) = as_vector(vertices[static_cast<std::size_t>(k)]);

  Eigen::MatrixXd diffs(n, n - 1);
  for (Eigen::Index k = 1; k < n; ++k) diffs.col(k - 1) = m.col(k) - m.col(0);
  Eigen::JacobiSVD<Eigen::MatrixXd> dsvd(diffs);
  const auto& ds = dsvd.singularValues();
  if (ds.size() > 0 && !(ds(ds.size() - 1) > 1e-9)) {
    throw InvalidArgument(
        "frame vertices are affinely dependent (smallest singular value " +
        std::to_string(ds(ds.size() - 1)) + ")");
  }
  const auto extreme = extreme_rows(m.transpose());
  for (std::size_t k = 0; k < extreme.size(); ++k) {
    if (!extreme[k]) {
      throw InvalidArgument("frame vertex " + std::to_string(k) +
                            " lies inside the hull of the others");
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> msvd(m);
  const auto& s = msvd.singularValues();
  SimplexFrame frame;
  frame.vertices_ = std::move(vertices);
  frame.matrix_ = std::move(m);
  frame.condition_ = s(0) / s(s.size() - 1);
  return frame;
}

ChoquetMeasure choquet_measure(const ProbabilityVector& p,
                               const SimplexFrame& frame) {
  if (p.size() != frame.dim()) {
    throw InvalidArgument("point dimension does not match the frame");
  }
  if (frame.condition() > kMaxFrameCondition) {
    throw NumericFailure("frame is ill-conditioned (condition number " +
                         std::to_string(frame.condition()) + ")");
  }
  const Eigen::VectorXd target = as_vector(p);
  Eigen::VectorXd w = frame.matrix().partialPivLu().solve(target);
  if (w.minCoeff() < 0.0) {
    const PointSet hull(Eigen::MatrixXd(frame.matrix().transpose()));
    const double distance = point_to_hull_distance(target, hull);
    if (distance > kMembershipTolerance) {
      throw OutsideHull("point lies outside the frame hull (distance " +
                            std::to_string(distance) + ")",
                        distance);
    }
  }
  return clip_and_wrap(std::move(w));
}

ChoquetMeasure choquet_measure_nnls(const ProbabilityVector& p,
                                    const SimplexFrame& frame) {
  if (p.size() != frame.dim()) {
    throw InvalidArgument("point dimension does not match the frame");
  }
  const Eigen::Index n = frame.matrix().rows(), m = frame.matrix().cols();
  Eigen::MatrixXd A(n + 1, m);
  A.topRows(n) = frame.matrix();
  A.row(n).setOnes();
  Eigen::VectorXd b(n + 1);
  b.head(n) = as_vector(p);
  b(n) = 1.0;
  return clip_and_wrap(nnls(A, b));
}

ProbabilityVector reconstruct(const ChoquetMeasure& w, const SimplexFrame& frame) {
  if (w.size() != frame.size()) {
    throw InvalidArgument("measure length does not match the frame");
  }
  const Eigen::VectorXd x = frame.matrix() * as_vector(w);
  return ProbabilityVector::validate(std::span<const double>(x.data(), x.size()));
}

Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                     double tol, int max_iter) {
  const Eigen::Index n = A.cols();
  if (A.rows() != b.size()) throw InvalidArgument("nnls: dimension mismatch");
  if (max_iter <= 0) max_iter = static_cast<int>(3 * n + 10);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff() * b.cwiseAbs().maxCoeff());

  auto solve_passive = [&](Eigen::VectorXd& z) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (passive[static_cast<std::size_t>(k)]) idx.push_back(k);
    }
    z.setZero(n);
    if (idx.empty()) return;
    Eigen::MatrixXd sub(A.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = A.col(idx[k]);
    const Eigen::VectorXd sol = sub.colPivHouseholderQr().solve(b);
    for (std::size_t k = 0; k < idx.size(); ++k) z(idx[k]) = sol(static_cast<Eigen::Index>(k));
  };

  for (int outer = 0; outer < max_iter; ++outer) {
    const Eigen::VectorXd grad = A.transpose() * (b - A * x);
    Eigen::Index entering = -1;
    double best = tol * scale;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (!passive[static_cast<std::size_t>(k)] && grad(k) > best) {
        best = grad(k);
        entering = k;
      }
    }
    if (entering < 0) break;
    passive[static_cast<std::size_t>(entering)] = true;
    Eigen::VectorXd z;
    for (int inner = 0; inner <= max_iter; ++inner) {
      solve_passive(z);
      double alpha = std::numeric_limits<double>::infinity();
      for (Eigen::Index k = 0; k < n; ++k) {
        if (passive[static_cast<std::size_t>(k)] && z(k) <= 0.0) {
          const double gap = x(k) - z(k);
          alpha = std::min(alpha, gap > 0.0 ? x(k) / gap : 0.0);
        }
      }
      if (!std::isfinite(alpha)) break;
      x += alpha * (z - x);
      for (Eigen::Index k = 0; k < n; ++k) {
        if (passive[static_cast<std::size_t>(k)] && x(k) <= tol) {
          passive[static_cast<std::size_t>(k)] = false;
          x(k) = 0.0;
        }
      }
    }
    x = z;
  }
  return x;
}

}  // namespace mixgeom
