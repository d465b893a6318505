#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "billiard/cavity.hpp"
#include "billiard/geometry.hpp"

namespace billiard {

/// Galerkin matrix by direct tensor Gauss-Legendre quadrature of
///   \int\int J [ (psi_u - a psi_v)(psi'_u - a psi'_v) + psi_v psi'_v / J^2 ] du dv,
/// a = (Q_u + v J_u) / J, splitting the u-range at the wall breakpoints and
/// into `panels` equal pieces. Slow; used to cross-check the FFT assembly.
Eigen::MatrixXd assemble_hamiltonian_quadrature(const BoundaryProfile& profile, const BasisSpec& basis,
                                                int panels = 64, int order = 16, int v_order = 48);

struct CheckResult {
  std::string name;
  std::string detail;
  double measured = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  double seconds = 0.0;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  /// {"passed": bool, "checks": [{name, detail, measured, tolerance, passed, seconds}]}
  std::string to_json() const;
};

struct ValidationOptions {
  /// Negative control: assemble with the mixed-derivative sign flipped.
  bool inject_cross_term_fault = false;
  unsigned threads = 0;
};

/// Desk-scale oracle suite: barrier transmission, rectangle eigenvalues and
/// conductance staircase, FFT vs quadrature assembly (smooth and disordered
/// walls), S-matrix unitarity/reciprocity and the spectrum Parseval identity.
ValidationReport run_validation(const ValidationOptions& options = {});

}  // namespace billiard
