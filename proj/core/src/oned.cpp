#include "billiard/oned.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "billiard/error.hpp"

namespace billiard {

using cd = std::complex<double>;

void BarrierProblem::validate() const {
  if (!(v0 >= 0.0)) throw InvalidInput("barrier height must be >= 0");
  if (m_trunc < 1) throw InvalidInput("m_trunc must be >= 1");
  if (!(pole_tolerance > 0.0)) throw InvalidInput("pole tolerance must be positive");
}

double exact_transmission(double energy, double v0) {
  if (!(energy > 0.0)) throw InvalidInput("barrier energy must be positive");
  if (v0 == 0.0) return 1.0;
  const double d = energy - v0;
  double ratio;  // sin^2(k2) / (E - V0), or its continuation
  if (d > 0.0) {
    const double s = std::sin(std::sqrt(d));
    ratio = s * s / d;
  } else if (d < 0.0) {
    const double s = std::sinh(std::sqrt(-d));
    ratio = -s * s / d;
  } else {
    ratio = 1.0;
  }
  return 1.0 / (1.0 + v0 * v0 * ratio / (4.0 * energy));
}

Eigen::Matrix2d barrier_r_matrix(double energy, const BarrierProblem& problem) {
  problem.validate();
  const double scale = std::max(1.0, std::abs(energy));
  double diag = 0.0;
  double cross = 0.0;
  for (int m = problem.m_trunc; m >= 0; --m) {
    const double gap = energy - problem.v0 - std::pow(m * std::numbers::pi, 2);
    if (std::abs(gap) < problem.pole_tolerance * scale) {
      throw SingularEnergy(SingularEnergy::Reason::Pole, energy, "energy on a barrier R-matrix pole");
    }
    const double weight = (m == 0 ? 1.0 : 2.0) / gap;
    diag += weight;
    cross += (m % 2 == 0 ? weight : -weight);
  }
  Eigen::Matrix2d r;
  r << diag, cross, cross, diag;
  return r;
}

Eigen::Matrix2cd barrier_s_matrix(double energy, const BarrierProblem& problem) {
  const Eigen::Matrix2d r = barrier_r_matrix(energy, problem);
  const double k = std::sqrt(energy);
  const Eigen::Matrix2cd ikr = cd(0.0, k) * r.cast<cd>();
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  const Eigen::Matrix2cd core = (id - ikr) * (id + ikr).inverse();
  Eigen::Vector2cd phase(1.0, std::exp(cd(0.0, -k)));
  return phase.asDiagonal() * core * phase.asDiagonal();
}

double rmatrix_transmission(double energy, const BarrierProblem& problem) {
  return std::norm(barrier_s_matrix(energy, problem)(0, 1));
}

std::vector<BarrierRow> barrier_table(std::span<const double> energies, const BarrierProblem& problem) {
  std::vector<BarrierRow> rows;
  rows.reserve(energies.size());
  for (double e : energies) {
    BarrierRow row{e, exact_transmission(e, problem.v0), 0.0, false};
    try {
      row.rmatrix = rmatrix_transmission(e, problem);
    } catch (const SingularEnergy&) {
      row.skipped = true;
    }
    rows.push_back(row);
  }
  return rows;
}

void write_barrier_csv(const std::vector<BarrierRow>& rows, const std::filesystem::path& path,
                       const OutputHeader& header) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path.string());
  write_header(out, header);
  out << "E,T_exact,T_rmatrix\n";
  for (const auto& r : rows) {
    if (r.skipped) {
      out << "# skipped E=" << format_double(r.energy) << " reason=pole\n";
      continue;
    }
    out << format_double(r.energy) << ',' << format_double(r.exact) << ',' << format_double(r.rmatrix) << '\n';
  }
}

}  // namespace billiard
