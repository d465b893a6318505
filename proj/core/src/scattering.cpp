#include "billiard/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numbers>

#include "billiard/error.hpp"
#include "billiard/parallel.hpp"

namespace billiard {

using cd = std::complex<double>;

double ScatteringMatrix::unitarity_defect() const {
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(s.rows(), s.cols());
  return (s * s.adjoint() - id).cwiseAbs().maxCoeff();
}

double ScatteringMatrix::reciprocity_defect() const { return (s - s.transpose()).cwiseAbs().maxCoeff(); }

ScatteringMatrix s_from_r(const Eigen::MatrixXd& r, const LeadSpace& space, double cavity_length,
                          PhaseReference phase) {
  const int n = space.open();
  if (r.rows() != 2 * n || r.cols() != 2 * n) throw InvalidInput("R-matrix size does not match the open channels");
  ScatteringMatrix out;
  out.energy = space.energy;
  out.channels = n;
  if (n == 0) return out;

  Eigen::VectorXd root_k(2 * n);
  for (int a = 0; a < n; ++a) {
    root_k[a] = std::sqrt(space.wave_numbers[a]);
    root_k[n + a] = root_k[a];
  }
  const Eigen::MatrixXd rt = root_k.asDiagonal() * r * root_k.asDiagonal();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(2 * n, 2 * n);
  const Eigen::MatrixXcd plus = id + cd(0.0, 1.0) * rt.cast<cd>();
  const Eigen::MatrixXcd minus = id - cd(0.0, 1.0) * rt.cast<cd>();
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(plus);
  if (lu.rcond() < 1e-13) {
    throw SingularEnergy(SingularEnergy::Reason::IllConditioned, space.energy, "I + iR is numerically singular");
  }
  // (I + iR)^{-1} and (I - iR) commute.
  out.s = lu.solve(minus);

  if (phase == PhaseReference::Global) {
    Eigen::VectorXcd p = Eigen::VectorXcd::Ones(2 * n);
    for (int a = 0; a < n; ++a) p[n + a] = std::exp(cd(0.0, -space.wave_numbers[a] * cavity_length));
    out.s = p.asDiagonal() * out.s * p.asDiagonal();
  }
  return out;
}

double conductance(const ScatteringMatrix& s) { return s.channels == 0 ? 0.0 : s.t().squaredNorm(); }

std::size_t SweepResult::skipped() const {
  return static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [](const SweepPoint& p) { return p.skipped; }));
}

std::vector<Plateau> flat_windows(const SweepResult& sweep, double width, double max_variation, double k_min) {
  const auto& pts = sweep.points;
  std::vector<Plateau> out;
  std::size_t end = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].k < k_min) continue;
    end = std::max(end, i);
    while (end < pts.size() && pts[end].k < pts[i].k + width - 1e-12) ++end;
    if (end >= pts.size()) break;
    double variation = 0.0;
    double mean = 0.0;
    for (std::size_t j = i; j <= end; ++j) {
      mean += pts[j].conductance;
      if (j > i) variation += std::abs(pts[j].conductance - pts[j - 1].conductance);
    }
    if (!(variation < max_variation)) continue;
    const int level = static_cast<int>(std::lround(mean / static_cast<double>(end - i + 1)));
    if (!out.empty() && out.back().level == level && pts[i].k <= out.back().k_end) {
      out.back().k_end = pts[end].k;
    } else {
      out.push_back({pts[i].k, pts[end].k, level});
    }
  }
  return out;
}

std::vector<int> plateau_levels(const std::vector<Plateau>& plateaus) {
  std::vector<int> levels;
  for (const auto& p : plateaus) {
    if (p.level >= 1 && std::find(levels.begin(), levels.end(), p.level) == levels.end()) levels.push_back(p.level);
  }
  std::sort(levels.begin(), levels.end());
  return levels;
}

double conductance_onset(const SweepResult& sweep, double threshold, double hold) {
  const auto& pts = sweep.points;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].conductance < threshold) continue;
    bool held = true;
    std::size_t j = i;
    for (; j < pts.size() && pts[j].k <= pts[i].k + hold; ++j) {
      if (pts[j].conductance < threshold) {
        held = false;
        break;
      }
    }
    if (held && j < pts.size()) return pts[i].k;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

std::vector<double> uniform_grid(double first, double last, int points) {
  if (points < 2) throw InvalidInput("grid needs at least two points");
  std::vector<double> grid(points);
  const double step = (last - first) / (points - 1);
  for (int i = 0; i < points; ++i) grid[i] = first + i * step;
  grid.back() = last;
  return grid;
}

namespace {

void fill_skipped(std::vector<SweepPoint>& points) {
  const std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!points[i].skipped) continue;
    std::ptrdiff_t lo = static_cast<std::ptrdiff_t>(i) - 1;
    while (lo >= 0 && points[lo].skipped) --lo;
    std::size_t hi = i + 1;
    while (hi < n && points[hi].skipped) ++hi;
    const SweepPoint* left = lo >= 0 ? &points[lo] : nullptr;
    const SweepPoint* right = hi < n ? &points[hi] : nullptr;
    SweepPoint& p = points[i];
    if (left == nullptr && right == nullptr) continue;
    if (left == nullptr || right == nullptr) {
      const SweepPoint& only = left ? *left : *right;
      p.conductance = only.conductance;
      p.unitarity_defect = only.unitarity_defect;
      p.reciprocity_defect = only.reciprocity_defect;
      p.t = only.t;
      continue;
    }
    const double w = (p.k - left->k) / (right->k - left->k);
    p.conductance = (1.0 - w) * left->conductance + w * right->conductance;
    p.unitarity_defect = std::max(left->unitarity_defect, right->unitarity_defect);
    p.reciprocity_defect = std::max(left->reciprocity_defect, right->reciprocity_defect);
    if (left->t.rows() == right->t.rows()) {
      p.t = (1.0 - w) * left->t + w * right->t;
    } else {
      // Across a threshold keep the channel count that is open at p.k.
      if (left->t.rows() == p.open) {
        p.t = left->t;
      } else if (right->t.rows() == p.open) {
        p.t = right->t;
      } else {
        p.t = (w < 0.5) ? left->t : right->t;
      }
    }
  }
}

}  // namespace

SweepResult sweep(const CavitySolution& solution, std::span<const double> k_grid, const SweepOptions& options) {
  const double w = solution.profile().lead_width();
  const double length = solution.profile().length();
  const double unit = std::numbers::pi / w;
  SweepResult result;
  result.lead_width = w;
  result.points.resize(k_grid.size());

  int max_open = 0;
  for (double k : k_grid) {
    if (!(k > 0.0)) throw InvalidInput("sweep wave numbers must be positive");
    max_open = std::max(max_open, static_cast<int>(std::floor(k)));
  }
  if (max_open > solution.basis().n_max) throw InvalidInput("sweep opens more lead channels than n_max");
  const OverlapTable table = overlaps(solution, std::max(1, max_open));
  const auto& energies = solution.energies();

  parallel_for(
      k_grid.size(),
      [&](std::size_t i) {
        SweepPoint& p = result.points[i];
        p.k = k_grid[i];
        p.energy = std::pow(p.k * unit, 2);
        p.open = static_cast<int>(std::floor(p.k));
        const double nearest = std::round(p.k);
        if (nearest >= 1.0 && std::abs(p.k - nearest) < options.skip_tolerance * p.k) {
          // The channel sitting on its threshold carries no flux yet.
          p.open = static_cast<int>(nearest) - 1;
          p.skipped = true;
          p.skip_reason = "threshold";
          return;
        }
        const auto it = std::lower_bound(energies.begin(), energies.end(), p.energy);
        double gap = std::numeric_limits<double>::infinity();
        if (it != energies.end()) gap = std::min(gap, *it - p.energy);
        if (it != energies.begin()) gap = std::min(gap, p.energy - *(it - 1));
        if (gap < options.skip_tolerance * p.energy) {
          p.skipped = true;
          p.skip_reason = "pole";
          return;
        }
        try {
          const LeadSpace space = channel_space(p.energy, w);
          p.open = space.open();
          if (p.open == 0) return;
          const ScatteringMatrix s = s_from_r(r_matrix(solution, table, space), space, length, options.phase);
          p.conductance = conductance(s);
          p.unitarity_defect = s.unitarity_defect();
          p.reciprocity_defect = s.reciprocity_defect();
          if (options.keep_transmission) p.t = s.t();
        } catch (const SingularEnergy& e) {
          p.skipped = true;
          p.skip_reason = to_string(e.reason());
        }
      },
      options.threads);

  fill_skipped(result.points);
  return result;
}

void write_sweep_csv(const SweepResult& result, const std::filesystem::path& path, const OutputHeader& header) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path.string());
  write_header(out, header);
  for (const auto& p : result.points) {
    if (p.skipped) out << "# skipped k_over_piw=" << format_double(p.k) << " reason=" << p.skip_reason << " (interpolated)\n";
  }
  out << "k_over_piw,T,N_open,unitarity_defect\n";
  for (const auto& p : result.points) {
    out << format_double(p.k) << ',' << format_double(p.conductance) << ',' << p.open << ','
        << format_double(p.unitarity_defect) << '\n';
  }
}

void write_transmission_store(const SweepResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path.string());
  for (const auto& p : result.points) {
    const std::int32_t n = static_cast<std::int32_t>(p.t.rows());
    out.write(reinterpret_cast<const char*>(&p.k), sizeof(double));
    out.write(reinterpret_cast<const char*>(&n), sizeof(n));
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        const double re = p.t(a, b).real();
        const double im = p.t(a, b).imag();
        out.write(reinterpret_cast<const char*>(&re), sizeof(double));
        out.write(reinterpret_cast<const char*>(&im), sizeof(double));
      }
    }
  }
  if (!out) throw NumericalError("failed writing " + path.string());
}

std::vector<std::pair<double, Eigen::MatrixXcd>> read_transmission_store(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::vector<std::pair<double, Eigen::MatrixXcd>> records;
  double k;
  while (in.read(reinterpret_cast<char*>(&k), sizeof(double))) {
    std::int32_t n = 0;
    if (!in.read(reinterpret_cast<char*>(&n), sizeof(n)) || n < 0) throw NumericalError("truncated t-store record");
    Eigen::MatrixXcd t(n, n);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        double re, im;
        in.read(reinterpret_cast<char*>(&re), sizeof(double));
        in.read(reinterpret_cast<char*>(&im), sizeof(double));
        if (!in) throw NumericalError("truncated t-store record");
        t(a, b) = cd(re, im);
      }
    }
    records.emplace_back(k, std::move(t));
  }
  return records;
}

}  // namespace billiard
