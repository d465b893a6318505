#pragma once

#include <span>
#include <vector>

#include "billiard/geometry.hpp"

namespace billiard {

enum class EndpointCorrection {
  None,           ///< plain midpoint / trapezoid sums
  EulerMaclaurin  ///< h^2 and h^4 end corrections from one-sided derivative estimates
};

struct TransformOptions {
  GridKind grid = GridKind::Midpoint;
  EndpointCorrection correction = EndpointCorrection::EulerMaclaurin;
};

/// I_p = \int_0^L cos(p pi u / L) f(u) du for p = 0..count-1, from samples of
/// f on the given grid (M samples for Midpoint, M + 1 for Endpoint), with one
/// real-to-real FFT. Requires count <= M.
std::vector<double> fft_cosine_integrals(std::span<const double> samples, double length, int count,
                                         const TransformOptions& options = {});

/// I_p = \int_0^L sin(p pi u / L) f(u) du for p = 0..count-1 (I_0 = 0).
std::vector<double> fft_sine_integrals(std::span<const double> samples, double length, int count,
                                       const TransformOptions& options = {});

}  // namespace billiard
