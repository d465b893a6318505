#include "billiard/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "billiard/error.hpp"

namespace billiard {

using cd = std::complex<double>;

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<cd> forward_dft(std::vector<cd> data) {
  const int n = static_cast<int>(data.size());
  std::vector<cd> out(data.size());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(data.data()), reinterpret_cast<fftw_complex*>(out.data()),
                            FFTW_FORWARD, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw NumericalError("FFTW plan creation failed");
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

struct Window {
  std::vector<double> k;  // physical units
  std::vector<const SweepPoint*> points;
};

Window select(const SweepResult& sweep, double k_min, double k_max) {
  if (!(k_max > k_min)) throw InvalidInput("spectrum window needs k_max > k_min");
  const double unit = std::numbers::pi / sweep.lead_width;
  const double eps = 1e-9 * k_max;
  Window w;
  for (const auto& p : sweep.points) {
    if (p.k < k_min - eps || p.k > k_max + eps) continue;
    w.k.push_back(p.k * unit);
    w.points.push_back(&p);
  }
  if (w.points.size() < 2) throw InvalidInput("spectrum window holds fewer than two sweep points");
  return w;
}

}  // namespace

LengthSpectrum length_spectrum(std::span<const double> k, std::span<const cd> t, const SpectrumOptions& options) {
  const std::size_t n = k.size();
  if (n < 2 || t.size() != n) throw InvalidInput("length spectrum needs matching k and t arrays of size >= 2");
  if (options.zero_pad < 1) throw InvalidInput("zero padding factor must be >= 1");
  const double dk = (k.back() - k.front()) / static_cast<double>(n - 1);
  if (!(dk > 0.0)) throw InvalidInput("k grid must be increasing");
  for (std::size_t j = 1; j < n; ++j) {
    if (std::abs((k[j] - k[j - 1]) - dk) > 1e-8 * dk) throw InvalidInput("length spectrum needs a uniform k grid");
  }

  const std::size_t padded = n * static_cast<std::size_t>(options.zero_pad);
  std::vector<cd> data(padded, cd(0.0, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    double taper = 1.0;
    if (options.hann) taper = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * j / static_cast<double>(n - 1)));
    data[j] = taper * t[j];
  }
  const auto y = forward_dft(std::move(data));

  LengthSpectrum out;
  out.spacing = 2.0 * std::numbers::pi / (static_cast<double>(padded) * dk);
  out.resolution = 2.0 * std::numbers::pi / (k.back() - k.front());
  out.lengths.resize(padded);
  out.amplitude.resize(padded);
  const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(padded / 2);
  for (std::size_t i = 0; i < padded; ++i) {
    // i-th output holds q = i - half, ascending in L.
    const std::ptrdiff_t q = static_cast<std::ptrdiff_t>(i) - half;
    const std::size_t src = static_cast<std::size_t>(q < 0 ? q + static_cast<std::ptrdiff_t>(padded) : q);
    const double length = q * out.spacing;
    out.lengths[i] = length;
    // exp(-i k_j L) = exp(-i k_0 L) exp(-2 pi i j q / P)
    out.amplitude[i] = dk * std::exp(cd(0.0, -k.front() * length)) * y[src];
  }
  return out;
}

LengthSpectrum t11_length_spectrum(const SweepResult& sweep, double k_min, double k_max,
                                   const SpectrumOptions& options) {
  const Window w = select(sweep, k_min, k_max);
  std::vector<cd> t(w.points.size());
  for (std::size_t j = 0; j < w.points.size(); ++j) {
    const auto& block = w.points[j]->t;
    t[j] = block.size() > 0 ? block(0, 0) : cd(0.0, 0.0);
  }
  return length_spectrum(w.k, t, options);
}

PowerSpectrum power_spectrum(const SweepResult& sweep, double k_min, double k_max, int modes,
                             const SpectrumOptions& options) {
  if (modes < 1) throw InvalidInput("power spectrum needs at least one mode");
  const Window w = select(sweep, k_min, k_max);
  for (const auto* p : w.points) {
    if (p->t.rows() < modes) {
      throw InvalidInput("power spectrum window reaches k = " + format_double(p->k) + " with only " +
                         std::to_string(p->t.rows()) + " open channels (need " + std::to_string(modes) + ")");
    }
  }
  PowerSpectrum out;
  out.modes = modes;
  std::vector<cd> t(w.points.size());
  for (int a = 0; a < modes; ++a) {
    for (int b = 0; b < modes; ++b) {
      for (std::size_t j = 0; j < w.points.size(); ++j) t[j] = w.points[j]->t(a, b);
      const LengthSpectrum s = length_spectrum(w.k, t, options);
      if (out.lengths.empty()) {
        out.lengths = s.lengths;
        out.power.assign(s.lengths.size(), 0.0);
        out.resolution = s.resolution;
        out.spacing = s.spacing;
      }
      for (std::size_t i = 0; i < s.amplitude.size(); ++i) out.power[i] += std::norm(s.amplitude[i]);
    }
  }
  return out;
}

std::vector<Peak> find_peaks(std::span<const double> x, std::span<const double> y, double x_min, double x_max,
                             double min_relative, double min_separation) {
  if (x.size() != y.size()) throw InvalidInput("peak finder needs matching arrays");
  double top = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] >= x_min && x[i] <= x_max) top = std::max(top, y[i]);
  }
  std::vector<Peak> peaks;
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    if (x[i] < x_min || x[i] > x_max) continue;
    if (!(y[i] > y[i - 1] && y[i] >= y[i + 1])) continue;
    if (y[i] < min_relative * top) continue;
    // Parabola through (i-1, i, i+1) on a locally uniform grid.
    const double denom = y[i - 1] - 2.0 * y[i] + y[i + 1];
    double shift = 0.0;
    double height = y[i];
    if (denom < 0.0) {
      shift = 0.5 * (y[i - 1] - y[i + 1]) / denom;
      height = y[i] - 0.25 * (y[i - 1] - y[i + 1]) * shift;
    }
    const double step = 0.5 * (x[i + 1] - x[i - 1]);
    peaks.push_back({x[i] + shift * step, height});
  }
  if (min_separation > 0.0) {
    std::vector<Peak> by_height = peaks;
    std::sort(by_height.begin(), by_height.end(), [](const Peak& a, const Peak& b) { return a.height > b.height; });
    std::vector<Peak> kept;
    for (const auto& p : by_height) {
      const bool crowded = std::any_of(kept.begin(), kept.end(), [&](const Peak& q) {
        return std::abs(q.position - p.position) < min_separation;
      });
      if (!crowded) kept.push_back(p);
    }
    std::sort(kept.begin(), kept.end(), [](const Peak& a, const Peak& b) { return a.position < b.position; });
    peaks = std::move(kept);
  }
  return peaks;
}

double onset_length(const LengthSpectrum& spectrum, double fraction) {
  double top = 0.0;
  for (std::size_t i = 0; i < spectrum.lengths.size(); ++i) {
    if (spectrum.lengths[i] >= 0.0) top = std::max(top, std::abs(spectrum.amplitude[i]));
  }
  const double level = fraction * top;
  for (std::size_t i = 1; i < spectrum.lengths.size(); ++i) {
    if (spectrum.lengths[i - 1] < 0.0) continue;
    const double a = std::abs(spectrum.amplitude[i - 1]);
    const double b = std::abs(spectrum.amplitude[i]);
    if (a < level && b >= level) {
      return spectrum.lengths[i - 1] + (level - a) / (b - a) * (spectrum.lengths[i] - spectrum.lengths[i - 1]);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

std::vector<Peak> leading_peaks(std::vector<Peak> peaks, std::size_t count) {
  std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.height > b.height; });
  if (peaks.size() > count) peaks.resize(count);
  std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.position < b.position; });
  return peaks;
}

double band_fraction(const PowerSpectrum& spectrum, double lo, double hi) {
  double band = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < spectrum.lengths.size(); ++i) {
    const double l = spectrum.lengths[i];
    if (l < 0.0) continue;
    total += spectrum.power[i];
    if (l >= lo && l <= hi) band += spectrum.power[i];
  }
  return total > 0.0 ? band / total : 0.0;
}

void write_length_spectrum_csv(const LengthSpectrum& spectrum, const std::filesystem::path& path,
                               const OutputHeader& header, double max_length) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path.string());
  write_header(out, header);
  out << "L,re_t,im_t,abs_t\n";
  for (std::size_t i = 0; i < spectrum.lengths.size(); ++i) {
    const double l = spectrum.lengths[i];
    if (l < 0.0 || l > max_length) continue;
    const cd a = spectrum.amplitude[i];
    out << format_double(l) << ',' << format_double(a.real()) << ',' << format_double(a.imag()) << ','
        << format_double(std::abs(a)) << '\n';
  }
}

void write_power_spectrum_csv(const PowerSpectrum& spectrum, const std::filesystem::path& path,
                              const OutputHeader& header, double max_length) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path.string());
  write_header(out, header);
  out << "L,P\n";
  for (std::size_t i = 0; i < spectrum.lengths.size(); ++i) {
    const double l = spectrum.lengths[i];
    if (l < 0.0 || l > max_length) continue;
    out << format_double(l) << ',' << format_double(spectrum.power[i]) << '\n';
  }
}

}  // namespace billiard
