#include "billiard/quadrature.hpp"

#include <memory>

#include <gsl/gsl_integration.h>

#include "billiard/error.hpp"

namespace billiard {

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw InvalidInput("Gauss-Legendre order must be >= 1");
  std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)> table(
      gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(n)), &gsl_integration_glfixed_table_free);
  if (!table) throw NumericalError("Gauss-Legendre table allocation failed");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    gsl_integration_glfixed_point(a, b, static_cast<std::size_t>(i), &rule.nodes[i], &rule.weights[i],
                                  table.get());
  }
  return rule;
}

QuadratureRule composite_gauss_legendre(int n, std::span<const double> cuts) {
  if (cuts.size() < 2) throw InvalidInput("composite rule needs at least two cut points");
  QuadratureRule rule;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    if (!(cuts[s + 1] > cuts[s])) throw InvalidInput("composite rule cuts must increase");
    const auto piece = gauss_legendre(n, cuts[s], cuts[s + 1]);
    rule.nodes.insert(rule.nodes.end(), piece.nodes.begin(), piece.nodes.end());
    rule.weights.insert(rule.weights.end(), piece.weights.begin(), piece.weights.end());
  }
  return rule;
}

}  // namespace billiard
