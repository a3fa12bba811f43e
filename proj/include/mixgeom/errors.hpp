#pragma once

#include <stdexcept>
#include <string>

namespace mixgeom {

// Bad configuration or input that violates a documented precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The inputs were well formed but the computation cannot produce a
// trustworthy answer (ill-conditioning, degenerate variance, ...).
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A point that should lie in a convex hull lies outside it.
class OutsideHull : public NumericFailure {
 public:
  OutsideHull(const std::string& what, double distance)
      : NumericFailure(what), distance_(distance) {}
  double distance() const noexcept { return distance_; }

 private:
  double distance_;
};

}  // namespace mixgeom
