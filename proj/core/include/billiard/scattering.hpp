#pragma once

#include <complex>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "billiard/cavity.hpp"
#include "billiard/io.hpp"
#include "billiard/leads.hpp"

namespace billiard {

/// Where the lead amplitudes are referenced.
///  - Interface: each lead's amplitudes are taken at its own mouth (x = 0
///    on the left, x = L on the right), so a straight guide has t = -exp(ikL).
///  - Global: both leads referenced to x = 0, i.e. S = Phi S_core Phi with
///    Phi = diag(1, exp(-i k_n L)) as in the one-dimensional barrier example.
enum class PhaseReference { Interface, Global };

/// S = [r t'; t r'] for N channels per lead. Incoming amplitudes are ordered
/// (left channels, right channels); outgoing amplitudes carry the lead
/// function sign convention (a e^{ikx} - b e^{-ikx}).
struct ScatteringMatrix {
  double energy = 0.0;
  int channels = 0;
  Eigen::MatrixXcd s;

  auto r() const { return s.topLeftCorner(channels, channels); }
  auto t_prime() const { return s.topRightCorner(channels, channels); }
  auto t() const { return s.bottomLeftCorner(channels, channels); }
  auto r_prime() const { return s.bottomRightCorner(channels, channels); }

  /// max |S S^dagger - I|
  double unitarity_defect() const;
  /// max |S - S^T|
  double reciprocity_defect() const;
};

/// Flux-normalised Cayley transform: with K = diag(k_n) over both leads and
/// R~ = K^{1/2} R K^{1/2}, S_core = (I - i R~)(I + i R~)^{-1}.
ScatteringMatrix s_from_r(const Eigen::MatrixXd& r, const LeadSpace& space, double cavity_length,
                          PhaseReference phase = PhaseReference::Interface);

/// Landauer transmission T = tr(t t^dagger).
double conductance(const ScatteringMatrix& s);

struct SweepOptions {
  /// Points with |k - n| < tol * k (threshold) or |E - E_j| < tol * E (pole)
  /// are skipped and filled by interpolation.
  double skip_tolerance = 1e-6;
  PhaseReference phase = PhaseReference::Interface;
  bool keep_transmission = true;
  unsigned threads = 0;
};

struct SweepPoint {
  double k = 0.0;  ///< units of pi / w
  double energy = 0.0;
  int open = 0;
  double conductance = 0.0;
  double unitarity_defect = 0.0;
  double reciprocity_defect = 0.0;
  bool skipped = false;
  std::string skip_reason;
  Eigen::MatrixXcd t;  ///< open x open, empty unless kept
};

struct SweepResult {
  double lead_width = 0.0;
  std::vector<SweepPoint> points;

  std::size_t skipped() const;
};

/// Conductance and transmission blocks on a grid of k (units pi/w), reusing
/// one cavity solution for every energy.
SweepResult sweep(const CavitySolution& solution, std::span<const double> k_grid, const SweepOptions& options = {});

/// A k-interval of the sweep over which T is flat.
struct Plateau {
  double k_begin;
  double k_end;
  int level;  ///< round(mean T)
};

/// Every window [k_i, k_i + width] (k_i a sweep point at or above k_min)
/// whose total variation sum |T_{j+1} - T_j| stays below max_variation,
/// merged into maximal runs of the same level.
std::vector<Plateau> flat_windows(const SweepResult& sweep, double width = 0.3, double max_variation = 0.15,
                                  double k_min = 0.0);

/// Distinct plateau levels >= 1 (conducting steps) among flat_windows.
std::vector<int> plateau_levels(const std::vector<Plateau>& plateaus);

/// First k where T >= threshold and stays there over [k, k + hold]; NaN if
/// never.
double conductance_onset(const SweepResult& sweep, double threshold = 0.05, double hold = 0.3);

std::vector<double> uniform_grid(double first, double last, int points);

/// CSV columns: k_over_piw,T,N_open,unitarity_defect. Skipped (interpolated)
/// points are listed in comment lines.
void write_sweep_csv(const SweepResult& result, const std::filesystem::path& path, const OutputHeader& header);

/// Binary records: float64 k, int32 N, then N*N complex entries of t in
/// row-major order as (re, im) float64 pairs.
void write_transmission_store(const SweepResult& result, const std::filesystem::path& path);
std::vector<std::pair<double, Eigen::MatrixXcd>> read_transmission_store(const std::filesystem::path& path);

}  // namespace billiard
