#pragma once

#include <span>
#include <vector>

namespace billiard {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped to [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

/// Composite Gauss-Legendre: n points on each sub-interval between
/// consecutive entries of `cuts` (which must include both end points).
QuadratureRule composite_gauss_legendre(int n, std::span<const double> cuts);

}  // namespace billiard
