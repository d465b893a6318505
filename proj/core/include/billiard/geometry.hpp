#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace billiard {

/// A single-valued wall y = f(x) with its first derivative.
///
/// `breakpoints` lists interior x positions where higher derivatives may jump
/// (spline knots, blending edges). Quadrature oracles split there.
struct Wall {
  std::function<double(double)> value;
  std::function<double(double)> slope;
  std::string description;
  std::vector<double> breakpoints;
};

/// Sampling grid for the u-direction integrals.
///  - Midpoint: u_i = (i + 1/2) L / M, i = 0..M-1 (type-II cosine transform).
///  - Endpoint: u_i = i L / M, i = 0..M (type-I transform, the symmetric
///    extension with halved end points).
enum class GridKind { Midpoint, Endpoint };

struct ProfileSamples {
  GridKind kind = GridKind::Midpoint;
  double spacing = 0.0;
  std::vector<double> u, P, Q, J, Qu, Ju;
};

/// Cavity between a lower wall Q(x) and an upper wall P(x) on [0, L].
///
/// The rectangle transform is u = x, v = (y - Q) / J with J = P - Q. The
/// constructor enforces J > 0 on the sample grid and J(0) == J(L) (both
/// leads have the same width, which becomes `lead_width()`).
class BoundaryProfile {
 public:
  BoundaryProfile(double length, Wall upper, Wall lower, int grid_size);

  double length() const noexcept { return length_; }
  int grid_size() const noexcept { return grid_size_; }

  /// Width of both leads, J(0).
  double lead_width() const noexcept { return lead_width_; }
  /// Width quoted for the geometry family (metadata only; the Darmstadt
  /// cavity nominally has unit leads while J(0) = 1.00133).
  double nominal_lead_width() const noexcept { return nominal_lead_width_; }
  void set_nominal_lead_width(double w) noexcept { nominal_lead_width_ = w; }

  double upper(double x) const { return upper_.value(x); }
  double lower(double x) const { return lower_.value(x); }
  double width(double x) const { return upper_.value(x) - lower_.value(x); }
  double upper_slope(double x) const { return upper_.slope(x); }
  double lower_slope(double x) const { return lower_.slope(x); }
  double width_slope(double x) const { return upper_.slope(x) - lower_.slope(x); }

  const Wall& upper_wall() const noexcept { return upper_; }
  const Wall& lower_wall() const noexcept { return lower_; }

  /// Midpoint samples at the construction grid size.
  const ProfileSamples& samples() const noexcept { return samples_; }
  /// Samples on either grid at the construction grid size.
  ProfileSamples sample(GridKind kind) const;

  /// Sorted interior breakpoints of both walls.
  std::vector<double> breakpoints() const;

  /// Canonical text identifying the geometry (used for cache keys).
  std::string description() const;

  /// (x, y) lies in the closed cavity, walls included up to `tol`.
  bool contains(double x, double y, double tol = 1e-12) const;

  /// Same walls resampled on a different grid.
  BoundaryProfile with_grid_size(int grid_size) const;
  /// Reflection x -> L - x.
  BoundaryProfile mirrored() const;

 private:
  double length_;
  int grid_size_;
  Wall upper_;
  Wall lower_;
  double lead_width_ = 0.0;
  double nominal_lead_width_ = 0.0;
  ProfileSamples samples_;
};

struct DarmstadtParams {
  double alpha = 0.161;
  double beta = 0.2;
  double gamma = 0.1;
  double lambda = 0.432;

  void validate() const;
};

/// Gaussian upper wall over an inverted-parabola lower wall, origin shifted
/// to the left lead: L = 10 lambda and both walls are centred at L/2.
BoundaryProfile make_darmstadt(const DarmstadtParams& params, int grid_size);

/// Straight channel P = height, Q = 0.
BoundaryProfile make_rectangle(double height, double length, int grid_size);

/// Adds amplitude * sin(cycles * pi * x / L) to the upper wall on
/// 9L/20 < x < 11L/20. The window switches on over blend_fraction * L just
/// outside each edge with a C2 smoothstep.
BoundaryProfile apply_wiggle(const BoundaryProfile& profile, double amplitude = 0.01, int cycles = 10,
                             double blend_fraction = 0.001);

enum class DisorderDistribution { Uniform, Gaussian };

/// Splits the lower wall into `pieces` segments and displaces each one
/// vertically by a random amount: uniform on [-eta/2, eta/2] or, for the
/// Gaussian variant, normal with the same variance. The displacements are
/// joined by a natural cubic spline pinned to zero at both leads, so the
/// lead mouths keep their width.
BoundaryProfile apply_surface_disorder(const BoundaryProfile& profile, double eta, int pieces,
                                       std::uint64_t seed,
                                       DisorderDistribution distribution = DisorderDistribution::Uniform);

/// Tabulated geometry: CSV with header `u,P,Q`, u strictly increasing from 0.
/// Walls are natural cubic splines; slopes come from the spline.
BoundaryProfile load_profile_csv(const std::filesystem::path& path, int grid_size);
void save_profile_csv(const BoundaryProfile& profile, const std::filesystem::path& path);

bool is_power_of_two(long long n) noexcept;

}  // namespace billiard
