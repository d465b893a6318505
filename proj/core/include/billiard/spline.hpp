#pragma once

#include <memory>
#include <span>
#include <vector>

namespace billiard {

/// Natural cubic spline (zero second derivative at both ends) through
/// strictly increasing knots. Evaluation outside the knot range clamps to
/// the end knots. Immutable and safe to share across threads.
class NaturalSpline {
 public:
  NaturalSpline(std::span<const double> x, std::span<const double> y);

  double value(double x) const;
  double slope(double x) const;

  const std::vector<double>& knots() const noexcept { return x_; }

 private:
  struct Impl;
  std::vector<double> x_;
  std::vector<double> y_;
  std::shared_ptr<const Impl> impl_;

  double clamp(double x) const noexcept;
};

}  // namespace billiard
