#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "billiard/cavity.hpp"
#include "billiard/geometry.hpp"

namespace billiard {

struct GeometryConfig {
  std::string kind = "darmstadt";  // darmstadt | rectangle | csv
  DarmstadtParams darmstadt{};
  double height = 1.0;  // rectangle
  double length = 4.32;
  std::string path;  // csv
  int grid_size = 65536;
};

struct PerturbationConfig {
  std::string kind = "none";  // none | wiggle | disorder
  double amplitude = 0.01;
  int cycles = 10;
  double blend = 0.001;  // wiggle edge ramp, fraction of L
  double eta = 0.2;
  int pieces = 100;
  std::string distribution = "uniform";  // uniform | gaussian
  std::uint64_t seed = 1;
};

struct SweepConfig {
  double k_min = 1.0;
  double k_max = 19.0;
  int points = 1801;
  std::string phase = "interface";  // interface | global
  double skip_tolerance = 1e-6;
};

struct SpectrumWindow {
  double k_min = 6.0;
  double k_max = 9.0;
  int modes = 6;
};

struct SpectrumConfig {
  std::vector<SpectrumWindow> windows{{6.0, 9.0, 6}, {10.0, 13.0, 10}};
  /// Window for the t_11 length spectrum; modes is ignored.
  SpectrumWindow t11{1.0, 19.0, 1};
  /// k step (units pi/w) of the sweeps feeding the transforms.
  double dk = 0.005;
  int zero_pad = 8;
  bool hann = false;
  double max_length = 30.0;
  /// Relative height threshold of the peak finder.
  double peak_threshold = 0.01;
};

struct BarrierConfig {
  double v0 = 1.0;
  int m_trunc = 1000;
  double e_min = 0.1;
  double e_max = 20.0;
  int points = 200;
};

struct TwoBodyConfig {
  std::string potential = "gaussian";  // gaussian | contact | constant
  std::string form = "euclidean";      // euclidean | separate
  double strength = 1.0;
  double range = 0.1;
  int order = 24;
  int u_order = 96;  // 0: same as order
  int states = 8;
  bool check_convergence = false;
};

struct RunConfig {
  GeometryConfig geometry{};
  PerturbationConfig perturbation{};
  BasisSpec basis{};
  SweepConfig sweep{};
  SpectrumConfig spectrum{};
  BarrierConfig barrier{};
  TwoBodyConfig two_body{};
  std::string output_dir = "out";
  bool cache = true;
  unsigned threads = 0;

  /// Checks every value a later stage depends on; throws InvalidInput.
  void validate() const;
  /// Pretty JSON with every key present.
  std::string to_json() const;
  /// Strict parse: unknown keys and wrong types are errors. Missing keys
  /// keep their defaults.
  static RunConfig from_json(std::string_view text);
  static RunConfig load(const std::string& path);

  /// `--set` override, e.g. "basis.m_max=40" or "spectrum.hann=true".
  /// The key must exist; the value is parsed as JSON, falling back to a
  /// string.
  void apply_override(std::string_view assignment);

  /// FNV-1a of the canonical JSON text.
  std::string hash() const;
};

}  // namespace billiard
