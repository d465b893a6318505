#pragma once

#include <complex>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "billiard/io.hpp"

namespace billiard {

/// Constant step of height V0 on [0, 1] between two free half-lines.
struct BarrierProblem {
  double v0 = 1.0;
  int m_trunc = 1000;
  /// Energies with |E - V0 - m^2 pi^2| < pole_tolerance * max(1, E) are rejected.
  double pole_tolerance = 1e-9;

  void validate() const;
};

/// Analytic transmission through the step (sinh form below the step top).
double exact_transmission(double energy, double v0);

/// Interface R-matrix of the step from the Neumann cosine modes
/// phi_0 = 1, phi_m = sqrt(2) cos(m pi x), E_m = V0 + m^2 pi^2:
///   R_ll = R_rr = sum_m phi_m(0)^2 / (E - E_m),
///   R_lr = R_rl = sum_m phi_m(0) phi_m(1) / (E - E_m).
/// Sums run from m = m_trunc down to 0. Throws SingularEnergy near a pole.
Eigen::Matrix2d barrier_r_matrix(double energy, const BarrierProblem& problem);

/// S = Phi (I - i k R)(I + i k R)^{-1} Phi with Phi = diag(1, exp(-ik)).
Eigen::Matrix2cd barrier_s_matrix(double energy, const BarrierProblem& problem);

/// |S_12|^2
double rmatrix_transmission(double energy, const BarrierProblem& problem);

struct BarrierRow {
  double energy;
  double exact;
  double rmatrix;
  bool skipped;
};

std::vector<BarrierRow> barrier_table(std::span<const double> energies, const BarrierProblem& problem);

/// Columns E,T_exact,T_rmatrix; pole rows are written as comments.
void write_barrier_csv(const std::vector<BarrierRow>& rows, const std::filesystem::path& path,
                       const OutputHeader& header);

}  // namespace billiard
