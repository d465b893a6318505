#pragma once

#include <vector>

#include <Eigen/Dense>

#include "billiard/cavity.hpp"

namespace billiard {

/// Open channels of a lead of width w at energy E (hbar^2/2m = 1):
/// k_n = sqrt(E - (n pi / w)^2) for every n with (n pi / w)^2 < E.
struct LeadSpace {
  double energy = 0.0;
  double width = 0.0;
  std::vector<double> wave_numbers;  // k_1 > k_2 > ... > 0

  int open() const noexcept { return static_cast<int>(wave_numbers.size()); }
};

/// Throws SingularEnergy(Threshold) when |E - (n pi / w)^2| < 1e-12 for some n.
LeadSpace channel_space(double energy, double width);

/// Projections of cavity eigenfunctions onto the transverse lead modes
/// sqrt(2/w) sin(n pi (y - Q(x_a)) / w) at x_L = 0 and x_R = L.
/// Matrix is states x (2 n_lead): columns [L_1..L_n, R_1..R_n].
/// Independent of energy.
struct OverlapTable {
  int lead_modes = 0;
  Eigen::MatrixXd values;

  double left(int state, int n) const { return values(state, n - 1); }
  double right(int state, int n) const { return values(state, lead_modes + n - 1); }
};

/// At the interfaces v = (y - Q)/w and the cavity basis reduces to
/// c_m(x_a) s_n(v) / sqrt(w), so the y-integral is sine orthogonality:
/// phi_{j,n}(x_a) = sum_m B^j_{m,n} c_m(x_a).
OverlapTable overlaps(const CavitySolution& solution, int lead_modes);

struct RMatrixOptions {
  /// Reject energies with |E - E_j| < pole_tolerance * E.
  double pole_tolerance = 1e-9;
};

/// R_{ab}(n, n') = sum_j phi_{j,n}(x_a) phi_{j,n'}(x_b) / (E - E_j), arranged
/// in blocks [LL LR; RL RR] over the open channels of `space`. Exactly
/// symmetric.
Eigen::MatrixXd r_matrix(const CavitySolution& solution, const OverlapTable& table, const LeadSpace& space,
                         const RMatrixOptions& options = {});

}  // namespace billiard
