#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "billiard/cavity.hpp"
#include "billiard/config.hpp"
#include "billiard/geometry.hpp"
#include "billiard/oned.hpp"
#include "billiard/scattering.hpp"
#include "billiard/spectra.hpp"
#include "billiard/twobody.hpp"
#include "billiard/validation.hpp"

namespace billiard {

/// Pipelines behind the command-line subcommands. Each validates the config
/// first, writes its CSV outputs into config.output_dir and logs progress
/// lines to `log`.

BoundaryProfile build_profile(const RunConfig& config);

/// Cache directory: $BILLIARD_CACHE_DIR if set, else <output_dir>/cache.
std::filesystem::path cache_directory(const RunConfig& config);
/// Content hash of geometry + basis (+ library version).
std::string cavity_cache_key(const BoundaryProfile& profile, const BasisSpec& basis);

/// Loads the cached eigenpairs when present, otherwise assembles, solves and
/// stores them. Writes energies.csv.
CavitySolution cmd_solve_cavity(const RunConfig& config, std::ostream& log);

/// conductance.csv and transmission.bin over the configured k grid.
SweepResult cmd_sweep(const RunConfig& config, std::ostream& log);

struct WindowSpectrum {
  SpectrumWindow window;
  PowerSpectrum power;
  std::vector<Peak> peaks;
};

struct SpectrumReport {
  std::vector<WindowSpectrum> windows;
  LengthSpectrum t11;
  std::vector<Peak> t11_peaks;
  double t11_onset = 0.0;
};

/// Sweeps every configured window on a k step of spectrum.dk and writes
/// power_<k_min>_<k_max>.csv, peaks_<k_min>_<k_max>.csv and t11_length.csv.
SpectrumReport cmd_spectrum(const RunConfig& config, std::ostream& log);

/// Shift-theorem check: transforms t(k) = exp(i k L0) over the first
/// configured window and returns the position of the highest |t(L)|.
double spectrum_self_test(const RunConfig& config, double l0);

/// barrier.csv; returns max |T_rmatrix - T_exact| over the non-pole rows.
double cmd_validate_1d(const RunConfig& config, std::ostream& log);

/// pair_energies.csv for the lowest two_body.states cavity states.
PairSpectrum cmd_two_body(const RunConfig& config, std::ostream& log);

/// validation_report.json
ValidationReport cmd_validate(const RunConfig& config, const ValidationOptions& options, std::ostream& log);

OutputHeader make_header(const RunConfig& config);

}  // namespace billiard
