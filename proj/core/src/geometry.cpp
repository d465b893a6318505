#include "billiard/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

#include "billiard/error.hpp"
#include "billiard/io.hpp"
#include "billiard/spline.hpp"

namespace billiard {

namespace {

Wall constant_wall(double y) {
  std::ostringstream os;
  os << "const(" << format_double(y) << ")";
  return Wall{[y](double) { return y; }, [](double) { return 0.0; }, os.str(), {}};
}

Wall spline_wall(std::shared_ptr<const NaturalSpline> spline, std::string description) {
  Wall wall;
  wall.value = [spline](double x) { return spline->value(x); };
  wall.slope = [spline](double x) { return spline->slope(x); };
  wall.description = std::move(description);
  const auto& knots = spline->knots();
  if (knots.size() > 2) wall.breakpoints.assign(knots.begin() + 1, knots.end() - 1);
  return wall;
}

// base + extra, merging breakpoints.
Wall add_walls(const Wall& base, const Wall& extra, const std::string& description) {
  Wall wall;
  wall.value = [b = base.value, e = extra.value](double x) { return b(x) + e(x); };
  wall.slope = [b = base.slope, e = extra.slope](double x) { return b(x) + e(x); };
  wall.description = description;
  wall.breakpoints = base.breakpoints;
  wall.breakpoints.insert(wall.breakpoints.end(), extra.breakpoints.begin(), extra.breakpoints.end());
  std::sort(wall.breakpoints.begin(), wall.breakpoints.end());
  return wall;
}

Wall reflect_wall(const Wall& wall, double length) {
  Wall out;
  out.value = [f = wall.value, length](double x) { return f(length - x); };
  out.slope = [f = wall.slope, length](double x) { return -f(length - x); };
  out.description = "mirror(" + wall.description + ")";
  for (double b : wall.breakpoints) out.breakpoints.push_back(length - b);
  std::sort(out.breakpoints.begin(), out.breakpoints.end());
  return out;
}

void require_grid(int grid_size) {
  if (grid_size < 2 || !is_power_of_two(grid_size)) {
    throw InvalidInput("grid size must be a power of two >= 2, got " + std::to_string(grid_size));
  }
}

}  // namespace

bool is_power_of_two(long long n) noexcept { return n > 0 && (n & (n - 1)) == 0; }

BoundaryProfile::BoundaryProfile(double length, Wall upper, Wall lower, int grid_size)
    : length_(length), grid_size_(grid_size), upper_(std::move(upper)), lower_(std::move(lower)) {
  if (!(length_ > 0.0) || !std::isfinite(length_)) throw InvalidInput("profile length must be positive");
  require_grid(grid_size_);
  if (!upper_.value || !upper_.slope || !lower_.value || !lower_.slope) {
    throw InvalidInput("profile walls need value and slope functions");
  }
  samples_ = sample(GridKind::Midpoint);
  for (std::size_t i = 0; i < samples_.J.size(); ++i) {
    if (!(samples_.J[i] > 0.0) || !std::isfinite(samples_.J[i])) {
      throw InvalidInput("cavity pinches shut: J = " + format_double(samples_.J[i]) +
                         " at x = " + format_double(samples_.u[i]));
    }
  }
  const double j0 = width(0.0);
  const double jl = width(length_);
  if (!(j0 > 0.0) || !(jl > 0.0)) throw InvalidInput("cavity mouth has non-positive width");
  if (std::abs(j0 - jl) > 1e-9 * std::max(1.0, j0)) {
    throw InvalidInput("lead mouths differ: J(0) = " + format_double(j0) + ", J(L) = " + format_double(jl));
  }
  lead_width_ = j0;
  nominal_lead_width_ = j0;
}

ProfileSamples BoundaryProfile::sample(GridKind kind) const {
  ProfileSamples s;
  s.kind = kind;
  const int count = kind == GridKind::Midpoint ? grid_size_ : grid_size_ + 1;
  s.spacing = length_ / grid_size_;
  s.u.resize(count);
  s.P.resize(count);
  s.Q.resize(count);
  s.J.resize(count);
  s.Qu.resize(count);
  s.Ju.resize(count);
  const double offset = kind == GridKind::Midpoint ? 0.5 : 0.0;
  for (int i = 0; i < count; ++i) {
    const double u = (kind == GridKind::Endpoint && i == count - 1) ? length_ : (i + offset) * s.spacing;
    s.u[i] = u;
    s.P[i] = upper_.value(u);
    s.Q[i] = lower_.value(u);
    s.J[i] = s.P[i] - s.Q[i];
    s.Qu[i] = lower_.slope(u);
    s.Ju[i] = upper_.slope(u) - s.Qu[i];
  }
  return s;
}

std::vector<double> BoundaryProfile::breakpoints() const {
  std::vector<double> out = upper_.breakpoints;
  out.insert(out.end(), lower_.breakpoints.begin(), lower_.breakpoints.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  std::erase_if(out, [this](double b) { return b <= 0.0 || b >= length_; });
  return out;
}

std::string BoundaryProfile::description() const {
  std::ostringstream os;
  os << "L=" << format_double(length_) << ";M=" << grid_size_ << ";upper=" << upper_.description
     << ";lower=" << lower_.description;
  return os.str();
}

bool BoundaryProfile::contains(double x, double y, double tol) const {
  if (x < -tol || x > length_ + tol) return false;
  const double xc = std::clamp(x, 0.0, length_);
  return y >= lower(xc) - tol && y <= upper(xc) + tol;
}

BoundaryProfile BoundaryProfile::with_grid_size(int grid_size) const {
  BoundaryProfile out(length_, upper_, lower_, grid_size);
  out.nominal_lead_width_ = nominal_lead_width_;
  return out;
}

BoundaryProfile BoundaryProfile::mirrored() const {
  BoundaryProfile out(length_, reflect_wall(upper_, length_), reflect_wall(lower_, length_), grid_size_);
  out.nominal_lead_width_ = nominal_lead_width_;
  return out;
}

void DarmstadtParams::validate() const {
  if (!(gamma > 0.0 && alpha > gamma)) throw InvalidInput("Darmstadt parameters need alpha > gamma > 0");
  if (!(beta > 0.0 && beta < 1.0)) throw InvalidInput("Darmstadt parameters need 0 < beta < 1");
  if (!(lambda > 0.0)) throw InvalidInput("Darmstadt parameters need lambda > 0");
}

BoundaryProfile make_darmstadt(const DarmstadtParams& params, int grid_size) {
  params.validate();
  require_grid(grid_size);
  if (grid_size < 256) throw InvalidInput("Darmstadt profile needs grid size >= 256");
  const double lambda = params.lambda;
  const double length = 10.0 * lambda;
  const double centre = 0.5 * length;
  const double a = params.alpha / (lambda * lambda);
  const double g = params.gamma / lambda;

  Wall upper;
  upper.value = [=](double x) { return lambda * std::exp(-a * (x - centre) * (x - centre)); };
  upper.slope = [=](double x) {
    const double s = x - centre;
    return -2.0 * a * s * lambda * std::exp(-a * s * s);
  };
  Wall lower;
  lower.value = [=](double x) { return params.beta * lambda - g * (x - centre) * (x - centre); };
  lower.slope = [=](double x) { return -2.0 * g * (x - centre); };

  std::ostringstream os;
  os << "darmstadt(alpha=" << format_double(params.alpha) << ",beta=" << format_double(params.beta)
     << ",gamma=" << format_double(params.gamma) << ",lambda=" << format_double(lambda) << ")";
  upper.description = os.str() + ".upper";
  lower.description = os.str() + ".lower";

  BoundaryProfile profile(length, std::move(upper), std::move(lower), grid_size);
  profile.set_nominal_lead_width(1.0);
  return profile;
}

BoundaryProfile make_rectangle(double height, double length, int grid_size) {
  if (!(height > 0.0)) throw InvalidInput("rectangle height must be positive");
  if (!(length > 0.0)) throw InvalidInput("rectangle length must be positive");
  return BoundaryProfile(length, constant_wall(height), constant_wall(0.0), grid_size);
}

BoundaryProfile apply_wiggle(const BoundaryProfile& profile, double amplitude, int cycles, double blend_fraction) {
  if (!std::isfinite(amplitude)) throw InvalidInput("wiggle amplitude must be finite");
  if (!(blend_fraction > 0.0 && blend_fraction < 0.45)) throw InvalidInput("wiggle blend fraction must lie in (0, 0.45)");
  if (amplitude == 0.0) return profile;
  const double length = profile.length();
  const double left = 9.0 * length / 20.0;
  const double right = 11.0 * length / 20.0;
  const double blend = blend_fraction * length;
  const double omega = cycles * std::numbers::pi / length;

  // Window ramps 0 -> 1 on [left - blend, left] and 1 -> 0 on [right, right + blend]
  // with the C2 quintic smoothstep.
  auto window = [=](double x, double& slope) {
    double t;
    double sign;
    if (x <= left - blend || x >= right + blend) {
      slope = 0.0;
      return 0.0;
    }
    if (x >= left && x <= right) {
      slope = 0.0;
      return 1.0;
    }
    if (x < left) {
      t = (x - (left - blend)) / blend;
      sign = 1.0;
    } else {
      t = ((right + blend) - x) / blend;
      sign = -1.0;
    }
    slope = sign * 30.0 * t * t * (1.0 - t) * (1.0 - t) / blend;
    return t * t * t * (10.0 + t * (6.0 * t - 15.0));
  };

  Wall bump;
  bump.value = [=](double x) {
    double ws;
    return amplitude * std::sin(omega * x) * window(x, ws);
  };
  bump.slope = [=](double x) {
    double ws;
    const double w = window(x, ws);
    return amplitude * (omega * std::cos(omega * x) * w + std::sin(omega * x) * ws);
  };
  bump.breakpoints = {left - blend, left, right, right + blend};

  std::ostringstream os;
  os << profile.upper_wall().description << "+wiggle(amplitude=" << format_double(amplitude)
     << ",cycles=" << cycles << ",blend=" << format_double(blend_fraction) << ")";
  BoundaryProfile out(length, add_walls(profile.upper_wall(), bump, os.str()), profile.lower_wall(),
                      profile.grid_size());
  out.set_nominal_lead_width(profile.nominal_lead_width());
  return out;
}

BoundaryProfile apply_surface_disorder(const BoundaryProfile& profile, double eta, int pieces,
                                       std::uint64_t seed, DisorderDistribution distribution) {
  if (pieces < 2) throw InvalidInput("surface disorder needs at least 2 pieces");
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw InvalidInput("surface disorder amplitude must be >= 0");
  if (eta == 0.0) return profile;

  // Raw engine output only; library distributions are not portable.
  std::mt19937_64 engine(seed);
  auto uniform01 = [&engine]() { return static_cast<double>(engine() >> 11) * 0x1.0p-53; };
  auto draw = [&]() {
    if (distribution == DisorderDistribution::Uniform) return eta * (uniform01() - 0.5);
    const double sigma = eta / std::sqrt(12.0);
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  };

  const double length = profile.length();
  std::vector<double> x;
  std::vector<double> shift;
  x.reserve(pieces + 2);
  shift.reserve(pieces + 2);
  x.push_back(0.0);
  shift.push_back(0.0);
  for (int i = 0; i < pieces; ++i) {
    x.push_back((i + 0.5) * length / pieces);
    shift.push_back(draw());
  }
  x.push_back(length);
  shift.push_back(0.0);

  auto spline = std::make_shared<const NaturalSpline>(x, shift);
  std::ostringstream os;
  os << profile.lower_wall().description << "+disorder(eta=" << format_double(eta) << ",pieces=" << pieces
     << ",seed=" << seed << "," << (distribution == DisorderDistribution::Uniform ? "uniform" : "gaussian")
     << ")";
  const Wall displacement = spline_wall(spline, "disorder");
  BoundaryProfile out(length, profile.upper_wall(), add_walls(profile.lower_wall(), displacement, os.str()),
                      profile.grid_size());
  out.set_nominal_lead_width(profile.nominal_lead_width());
  return out;
}

BoundaryProfile load_profile_csv(const std::filesystem::path& path, int grid_size) {
  const CsvTable table = read_csv(path);
  const auto& u = table.column("u");
  const auto& p = table.column("P");
  const auto& q = table.column("Q");
  if (u.size() < 3) throw InvalidInput("tabulated profile needs at least 3 rows");
  if (u.front() != 0.0) throw InvalidInput("tabulated profile must start at u = 0");

  auto upper = std::make_shared<const NaturalSpline>(u, p);
  auto lower = std::make_shared<const NaturalSpline>(u, q);
  const std::string tag = "tabulated(" + hex64(fnv1a64(table.canonical_text())) + ")";
  return BoundaryProfile(u.back(), spline_wall(upper, tag + ".upper"), spline_wall(lower, tag + ".lower"),
                         grid_size);
}

void save_profile_csv(const BoundaryProfile& profile, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << "u,P,Q\n";
  const ProfileSamples s = profile.sample(GridKind::Endpoint);
  for (std::size_t i = 0; i < s.u.size(); ++i) {
    out << format_double(s.u[i]) << ',' << format_double(s.P[i]) << ',' << format_double(s.Q[i]) << '\n';
  }
}

}  // namespace billiard
