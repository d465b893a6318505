#include "billiard/spectral_integrals.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "billiard/error.hpp"

namespace billiard {

namespace {

// FFTW's planner is not re-entrant; execution on distinct arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<double> r2r(std::span<const double> input, fftw_r2r_kind kind) {
  const int n = static_cast<int>(input.size());
  std::vector<double> in(input.begin(), input.end());
  std::vector<double> out(input.size());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_r2r_1d(n, in.data(), out.data(), kind, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw NumericalError("FFTW plan creation failed");
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

constexpr int kStencil = 8;

// Fornberg weights: derivatives 0..3 at z from nodes x[0..kStencil-1].
std::array<std::array<double, kStencil>, 4> fornberg(const std::array<double, kStencil>& x, double z) {
  constexpr int order = 3;
  std::array<std::array<double, kStencil>, 4> c{};
  double c1 = 1.0;
  double c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i < kStencil; ++i) {
    const int mn = std::min(i, order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

struct EndValues {
  std::array<double, 4> left{};   // f, f', f'', f''' at u = 0
  std::array<double, 4> right{};  // at u = L
};

// One-sided polynomial extrapolation of f and its first three derivatives to
// both ends of the interval.
EndValues end_values(std::span<const double> f, double h, GridKind grid) {
  const std::size_t n = f.size();
  if (n < kStencil) throw InvalidInput("too few samples for end-point correction");
  const double offset = grid == GridKind::Midpoint ? 0.5 : 0.0;
  std::array<double, kStencil> nodes{};
  for (int j = 0; j < kStencil; ++j) nodes[j] = (j + offset) * h;
  const auto w = fornberg(nodes, 0.0);
  EndValues ev;
  for (int k = 0; k < 4; ++k) {
    double left = 0.0;
    double right = 0.0;
    for (int j = 0; j < kStencil; ++j) {
      left += w[k][j] * f[j];
      right += w[k][j] * f[n - 1 - j];
    }
    ev.left[k] = left;
    // Right-end samples were read in the reflected variable s = L - u.
    ev.right[k] = (k % 2 == 0) ? right : -right;
  }
  return ev;
}

struct GridInfo {
  double h;
  int intervals;
};

GridInfo grid_info(std::span<const double> samples, double length, GridKind grid) {
  if (!(length > 0.0)) throw InvalidInput("integration length must be positive");
  const int intervals = grid == GridKind::Midpoint ? static_cast<int>(samples.size())
                                                   : static_cast<int>(samples.size()) - 1;
  if (intervals < 2) throw InvalidInput("need at least two grid intervals");
  return {length / intervals, intervals};
}

// Euler-Maclaurin coefficients for the h^2 and h^4 end terms:
// I = Q_h + a2 h^2 [g'] + a4 h^4 [g'''].
std::array<double, 2> em_coefficients(GridKind grid) {
  if (grid == GridKind::Midpoint) return {1.0 / 24.0, -7.0 / 5760.0};
  return {-1.0 / 12.0, 1.0 / 720.0};
}

}  // namespace

std::vector<double> fft_cosine_integrals(std::span<const double> samples, double length, int count,
                                         const TransformOptions& options) {
  const auto [h, intervals] = grid_info(samples, length, options.grid);
  if (count < 0 || count > intervals) throw InvalidInput("cosine integral count exceeds grid size");

  // REDFT10: Y_p = 2 sum f_i cos(pi p (i + 1/2) / M)   (midpoint rule x 2/h)
  // REDFT00: Y_p = f_0 + (-1)^p f_M + 2 sum_{0<i<M} f_i cos(pi p i / M)   (trapezoid x 2/h)
  const auto y = r2r(samples, options.grid == GridKind::Midpoint ? FFTW_REDFT10 : FFTW_REDFT00);
  std::vector<double> out(count);
  for (int p = 0; p < count; ++p) out[p] = 0.5 * h * y[p];

  if (options.correction == EndpointCorrection::EulerMaclaurin) {
    const auto ev = end_values(samples, h, options.grid);
    const auto [a2, a4] = em_coefficients(options.grid);
    for (int p = 0; p < count; ++p) {
      const double w = p * std::numbers::pi / length;
      const double sign = (p % 2 == 0) ? 1.0 : -1.0;
      // g = f cos(w u): g' and g''' at the ends (sin terms vanish there).
      const double d1 = sign * ev.right[1] - ev.left[1];
      const double d3 = sign * (ev.right[3] - 3.0 * w * w * ev.right[1]) - (ev.left[3] - 3.0 * w * w * ev.left[1]);
      out[p] += a2 * h * h * d1 + a4 * h * h * h * h * d3;
    }
  }
  return out;
}

std::vector<double> fft_sine_integrals(std::span<const double> samples, double length, int count,
                                       const TransformOptions& options) {
  const auto [h, intervals] = grid_info(samples, length, options.grid);
  if (count < 0 || count > intervals + 1) throw InvalidInput("sine integral count exceeds grid size");

  std::vector<double> out(count, 0.0);
  if (options.grid == GridKind::Midpoint) {
    // RODFT10: Y_k = 2 sum f_i sin(pi (k + 1)(i + 1/2) / M)
    const auto y = r2r(samples, FFTW_RODFT10);
    for (int p = 1; p < count; ++p) out[p] = 0.5 * h * y[p - 1];
  } else {
    // RODFT00 over interior samples: Y_k = 2 sum_{0<i<M} f_i sin(pi (k + 1) i / M)
    const auto y = r2r(samples.subspan(1, samples.size() - 2), FFTW_RODFT00);
    for (int p = 1; p < count && p - 1 < static_cast<int>(y.size()); ++p) out[p] = 0.5 * h * y[p - 1];
  }

  if (options.correction == EndpointCorrection::EulerMaclaurin) {
    const auto ev = end_values(samples, h, options.grid);
    const auto [a2, a4] = em_coefficients(options.grid);
    for (int p = 1; p < count; ++p) {
      const double w = p * std::numbers::pi / length;
      const double sign = (p % 2 == 0) ? 1.0 : -1.0;
      // g = f sin(w u): g' = w f, g''' = 3 w f'' - w^3 f at the ends.
      const double d1 = w * (sign * ev.right[0] - ev.left[0]);
      const double d3 = sign * (3.0 * w * ev.right[2] - w * w * w * ev.right[0]) -
                        (3.0 * w * ev.left[2] - w * w * w * ev.left[0]);
      out[p] += a2 * h * h * d1 + a4 * h * h * h * h * d3;
    }
  }
  return out;
}

}  // namespace billiard
