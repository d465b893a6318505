#pragma once

#include <complex>
#include <filesystem>
#include <span>
#include <vector>

#include "billiard/io.hpp"
#include "billiard/scattering.hpp"

namespace billiard {

struct SpectrumOptions {
  /// Transform length is zero_pad * (number of k samples).
  int zero_pad = 8;
  /// Hann taper over the k window; off gives the bare rectangular integral.
  bool hann = false;
};

/// t(L) = sum_j t(k_j) exp(-i k_j L) dk on a uniform k grid (plain Riemann
/// sum, no 2 pi normalisation), sampled at L_q = 2 pi q / (P dk) for
/// q = -P/2 .. P/2-1 with P = zero_pad * N. `lengths` is ascending.
struct LengthSpectrum {
  std::vector<double> lengths;
  std::vector<std::complex<double>> amplitude;
  double resolution = 0.0;  ///< 2 pi / (k_max - k_min)
  double spacing = 0.0;     ///< L-grid step
};

/// k in physical units (1/length). Throws for non-uniform grids.
LengthSpectrum length_spectrum(std::span<const double> k, std::span<const std::complex<double>> t,
                               const SpectrumOptions& options = {});

struct PowerSpectrum {
  std::vector<double> lengths;
  std::vector<double> power;
  double resolution = 0.0;
  double spacing = 0.0;
  int modes = 0;
};

/// Length spectrum of t_11 over sweep points with k_min <= k <= k_max
/// (units pi/w). t_11 is the (1,1) element of whatever t block is current.
LengthSpectrum t11_length_spectrum(const SweepResult& sweep, double k_min, double k_max,
                                   const SpectrumOptions& options = {});

/// P(L) = sum_{n,m <= modes} |t_nm(L)|^2 over the window (units pi/w).
/// Throws when any point in the window has fewer than `modes` open channels.
PowerSpectrum power_spectrum(const SweepResult& sweep, double k_min, double k_max, int modes,
                             const SpectrumOptions& options = {});

struct Peak {
  double position;
  double height;
};

/// Local maxima of y on [x_min, x_max] with height >= min_relative * (max of
/// y on that range), refined by a parabola through the three top samples.
/// Of two maxima closer than `min_separation` only the higher is kept (pass
/// the spectrum resolution to drop window sidelobes next to a strong peak).
/// Sorted by position.
std::vector<Peak> find_peaks(std::span<const double> x, std::span<const double> y, double x_min, double x_max,
                             double min_relative = 0.0, double min_separation = 0.0);

/// First L >= 0 where |t(L)| reaches `fraction` of its maximum over L >= 0,
/// linearly interpolated between samples.
double onset_length(const LengthSpectrum& spectrum, double fraction = 0.1);

/// The `count` highest peaks, returned sorted by position.
std::vector<Peak> leading_peaks(std::vector<Peak> peaks, std::size_t count);

/// \int_{lo}^{hi} P dL / \int_{L >= 0} P dL
double band_fraction(const PowerSpectrum& spectrum, double lo, double hi);

void write_length_spectrum_csv(const LengthSpectrum& spectrum, const std::filesystem::path& path,
                               const OutputHeader& header, double max_length);
void write_power_spectrum_csv(const PowerSpectrum& spectrum, const std::filesystem::path& path,
                              const OutputHeader& header, double max_length);

}  // namespace billiard
