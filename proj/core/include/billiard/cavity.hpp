#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "billiard/geometry.hpp"
#include "billiard/spectral_integrals.hpp"

namespace billiard {

/// Product basis on the transformed rectangle [0, L] x [0, 1]:
///
///   psi_{m,n}(u, v) = c_m(u) s_n(v) / sqrt(J(u)),
///   c_m(u) = sqrt(eps_m / L) cos(m pi u / L),  eps_0 = 1, eps_m = 2,
///   s_n(v) = sqrt(2) sin(n pi v),
///
/// with m = 0..m_max-1 and n = 1..n_max. The functions are orthonormal under
/// the J-weighted inner product, Neumann at u = 0, L and Dirichlet at v = 0, 1.
struct BasisSpec {
  int m_max = 90;
  int n_max = 50;
  int k_keep = 3000;

  int size() const noexcept { return m_max * n_max; }
  /// Composite index of (m, n), n >= 1.
  int index(int m, int n) const noexcept { return (n - 1) * m_max + m; }
  void validate() const;
};

/// v-integrals over [0, 1] of the raw functions S_n = sin(n pi v),
/// C_n = cos(n pi v), including the mode-number prefactors they carry in the
/// matrix elements. Entry (i, j) refers to n = i + 1, n' = j + 1:
///
///   d1(n, n') = n' pi   \int S_n C_n'
///   d2(n, n') = n' pi   \int v S_n C_n'
///   d3(n, n') = n n' pi^2 \int C_n C_n'
///   d4(n, n') = n n' pi^2 \int v C_n C_n'
///   d5(n, n') = n n' pi^2 \int v^2 C_n C_n'
struct VIntegralTables {
  Eigen::MatrixXd d1, d2, d3, d4, d5;
};

VIntegralTables build_v_tables(int n_max);

struct AssemblyOptions {
  TransformOptions transform{};
  bool symmetrize = true;
  /// Negative-control hook for the validation suite: flips the sign of the
  /// mixed u-v derivative terms. Never set outside of tests.
  bool inject_cross_term_fault = false;
};

/// Galerkin matrix H_{l,l'} = \int\int J [ (d_x psi_l)(d_x psi_l') + (d_y psi_l)(d_y psi_l') ] du dv
/// in the basis above (hbar^2/2m = 1), with the u-integrals evaluated by FFT
/// on the profile grid. Rows/columns follow BasisSpec::index.
Eigen::MatrixXd assemble_hamiltonian(const BoundaryProfile& profile, const BasisSpec& basis,
                                     const AssemblyOptions& options = {});

struct Point {
  double x;
  double y;
};

/// Lowest eigenpairs of the cavity problem with Neumann conditions at the
/// lead interfaces and Dirichlet conditions on the walls.
class CavitySolution {
 public:
  CavitySolution(BoundaryProfile profile, BasisSpec basis, Eigen::VectorXd energies, Eigen::MatrixXd coefficients);

  const BoundaryProfile& profile() const noexcept { return profile_; }
  const BasisSpec& basis() const noexcept { return basis_; }
  /// Ascending, length k_keep.
  const Eigen::VectorXd& energies() const noexcept { return energies_; }
  /// basis.size() x k_keep; column k holds the expansion of eigenfunction k.
  const Eigen::MatrixXd& coefficients() const noexcept { return coefficients_; }
  int states() const noexcept { return static_cast<int>(energies_.size()); }

  /// Heuristic wave number up to which the retained states are trusted,
  /// sqrt(E_max / 2).
  double trusted_k_max() const noexcept;

 private:
  BoundaryProfile profile_;
  BasisSpec basis_;
  Eigen::VectorXd energies_;
  Eigen::MatrixXd coefficients_;
};

enum class EigenBackend {
  /// LAPACK dsyevd when it passes a one-time accuracy probe, Eigen otherwise.
  Auto,
  Lapack,
  /// Eigen's SelfAdjointEigenSolver (slower, no external dependency).
  Eigen,
};

/// True when LAPACK dsyevd reproduces a small random eigenproblem to
/// round-off. Some optimised BLAS builds pick broken kernels on some CPUs;
/// the probe runs once per process.
bool lapack_eigensolver_healthy();

/// Dense symmetric eigensolve of an assembled matrix, keeping the lowest
/// basis.k_keep pairs. Eigenvector signs are fixed so the largest-magnitude
/// component is positive.
CavitySolution solve_cavity(const BoundaryProfile& profile, const Eigen::MatrixXd& hamiltonian,
                            const BasisSpec& basis, EigenBackend backend = EigenBackend::Auto);

/// Assemble and solve.
CavitySolution solve_cavity(const BoundaryProfile& profile, const BasisSpec& basis,
                            const AssemblyOptions& options = {}, EigenBackend backend = EigenBackend::Auto);

/// Eigenfunction `k` at physical points (x, y); throws for points outside
/// the cavity.
std::vector<double> eval_wavefunction(const CavitySolution& solution, int k, std::span<const Point> points);

/// Cache format: energies as CSV (`k,E`), coefficients as a flat binary file
/// with header {magic "BILLCAV1", int32 m_max, int32 n_max, int32 k_keep,
/// float64 L} followed by the column-major basis.size() x k_keep matrix.
void save_solution(const CavitySolution& solution, const std::filesystem::path& energies_csv,
                   const std::filesystem::path& coefficients_bin);
CavitySolution load_solution(const BoundaryProfile& profile, const std::filesystem::path& energies_csv,
                             const std::filesystem::path& coefficients_bin);

}  // namespace billiard
