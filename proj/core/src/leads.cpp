#include "billiard/leads.hpp"

#include <cmath>
#include <numbers>

#include "billiard/error.hpp"
#include "billiard/io.hpp"

namespace billiard {

const char* to_string(SingularEnergy::Reason reason) noexcept {
  switch (reason) {
    case SingularEnergy::Reason::Threshold:
      return "threshold";
    case SingularEnergy::Reason::Pole:
      return "pole";
    case SingularEnergy::Reason::IllConditioned:
      return "ill-conditioned";
  }
  return "unknown";
}

LeadSpace channel_space(double energy, double width) {
  if (!(energy > 0.0)) throw InvalidInput("channel energy must be positive");
  if (!(width > 0.0)) throw InvalidInput("lead width must be positive");
  LeadSpace space{energy, width, {}};
  for (int n = 1;; ++n) {
    const double transverse = std::pow(n * std::numbers::pi / width, 2);
    if (std::abs(energy - transverse) < 1e-12) {
      throw SingularEnergy(SingularEnergy::Reason::Threshold, energy,
                           "energy " + format_double(energy) + " sits on threshold of channel " + std::to_string(n));
    }
    if (transverse > energy) break;
    space.wave_numbers.push_back(std::sqrt(energy - transverse));
  }
  return space;
}

OverlapTable overlaps(const CavitySolution& solution, int lead_modes) {
  const auto& profile = solution.profile();
  const auto& basis = solution.basis();
  if (lead_modes < 1 || lead_modes > basis.n_max) throw InvalidInput("lead modes must lie in [1, n_max]");
  const double w = profile.lead_width();
  if (std::abs(profile.width(0.0) - w) > 1e-9 * w || std::abs(profile.width(profile.length()) - w) > 1e-9 * w) {
    throw InvalidInput("cavity mouths do not match the lead width");
  }
  const double length = profile.length();
  const auto& b = solution.coefficients();
  OverlapTable table;
  table.lead_modes = lead_modes;
  table.values.setZero(solution.states(), 2 * lead_modes);
  for (int n = 1; n <= lead_modes; ++n) {
    for (int m = 0; m < basis.m_max; ++m) {
      const double c0 = std::sqrt((m == 0 ? 1.0 : 2.0) / length);
      const double cl = (m % 2 == 0) ? c0 : -c0;
      const auto row = b.row(basis.index(m, n));
      table.values.col(n - 1) += c0 * row.transpose();
      table.values.col(lead_modes + n - 1) += cl * row.transpose();
    }
  }
  return table;
}

Eigen::MatrixXd r_matrix(const CavitySolution& solution, const OverlapTable& table, const LeadSpace& space,
                         const RMatrixOptions& options) {
  const int n = space.open();
  if (n > table.lead_modes) throw InvalidInput("overlap table has fewer lead modes than open channels");
  const double e = space.energy;
  const auto& energies = solution.energies();
  const int states = solution.states();

  Eigen::VectorXd inv(states);
  for (int j = 0; j < states; ++j) {
    const double gap = e - energies[j];
    if (std::abs(gap) < options.pole_tolerance * std::abs(e)) {
      throw SingularEnergy(SingularEnergy::Reason::Pole, e,
                           "energy " + format_double(e) + " is within tolerance of cavity level " + std::to_string(j));
    }
    inv[j] = 1.0 / gap;
  }

  // Channel a < n is lead L mode a + 1; a >= n is lead R mode a - n + 1.
  auto column = [&](int a) { return a < n ? a : table.lead_modes + (a - n); };
  Eigen::MatrixXd r(2 * n, 2 * n);
  for (int a = 0; a < 2 * n; ++a) {
    const auto pa = table.values.col(column(a));
    for (int bidx = a; bidx < 2 * n; ++bidx) {
      const auto pb = table.values.col(column(bidx));
      double sum = 0.0;
      for (int j = 0; j < states; ++j) sum += pa[j] * pb[j] * inv[j];
      r(a, bidx) = sum;
      r(bidx, a) = sum;
    }
  }
  return r;
}

}  // namespace billiard
