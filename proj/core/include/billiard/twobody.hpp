#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "billiard/cavity.hpp"

namespace billiard {

/// Pair potential V(x1 - x2, y1 - y2) in original coordinates, and the
/// tensor Gauss-Legendre orders used to integrate it.
struct InteractionSpec {
  std::function<double(double dx, double dy)> potential;
  std::string description;
  int order = 24;
  /// Gauss order along u when it differs from `order` (0: same). The
  /// u-direction carries cos(m pi u / L) up to m_max - 1, so products of
  /// eigenfunctions need roughly u_order > m_max for orthonormality to hold
  /// on the grid.
  int u_order = 0;
  /// Recompute every element at twice the order and throw NumericalError when
  /// the relative change exceeds `convergence_tolerance`.
  bool check_convergence = false;
  double convergence_tolerance = 1e-6;

  void validate() const;
};

enum class PotentialForm {
  /// V depends on the distance |r1 - r2|.
  Euclidean,
  /// V depends on |x1 - x2| and |y1 - y2| separately.
  Separate,
};

/// strength * exp(-r^2 / range^2), or for the separate form
/// strength * (exp(-dx^2 / range^2) + exp(-dy^2 / range^2)) / 2.
InteractionSpec gaussian_interaction(double strength, double range, PotentialForm form = PotentialForm::Euclidean);
/// Normalised Gaussian strength / (pi width^2) exp(-r^2 / width^2), which
/// tends to strength * delta(r1 - r2) as width -> 0.
InteractionSpec contact_interaction(double strength, double width);
InteractionSpec constant_interaction(double value);

/// Tabulates the selected eigenfunctions phi^i(u, v) = sum B^i_{mn} c_m(u) s_n(v)
/// on the tensor grid. In transformed coordinates the Jacobian J cancels
/// against the two 1/sqrt(J) factors, so
///   H_ijkl = \int phi^i(1) phi^j(2) V(x1 - x2, y1 - y2) phi^k(1) phi^l(2) du1 dv1 du2 dv2
/// with (x, y) = (u, Q(u) + v J(u)).
class TwoBodyIntegrator {
 public:
  TwoBodyIntegrator(const CavitySolution& solution, std::vector<int> states, const InteractionSpec& spec);

  /// Arguments are cavity state indices, all of which must be in `states`.
  double element(int i, int j, int k, int l) const;
  const std::vector<int>& states() const noexcept { return states_; }

  /// Weighted products phi^i phi^k over the grid (length order^2).
  Eigen::VectorXd density(int i, int k) const;
  const Eigen::MatrixXd& potential_matrix() const noexcept { return potential_; }

 private:
  int slot(int state) const;

  std::vector<int> states_;
  Eigen::MatrixXd values_;     // grid points x states
  Eigen::VectorXd weights_;    // grid weights
  Eigen::MatrixXd potential_;  // V between all grid point pairs
};

/// Single element; honours spec.check_convergence.
double h_ijkl(const CavitySolution& solution, int i, int j, int k, int l, const InteractionSpec& spec);

struct PairSpectrum {
  /// Ordered pair basis (i, j), i for particle 1.
  std::vector<std::pair<int, int>> pairs;
  /// <ij|H|kl> = (E_i + E_j) delta + H_ijkl
  Eigen::MatrixXd hamiltonian;
  /// Ascending eigenvalues of `hamiltonian`.
  Eigen::VectorXd energies;
};

/// Distinguishable particles: all ordered pairs over `states`.
PairSpectrum interaction_block(const CavitySolution& solution, const std::vector<int>& states,
                               const InteractionSpec& spec);

}  // namespace billiard
