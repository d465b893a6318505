#include "billiard/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <ostream>

#include "billiard/error.hpp"
#include "billiard/io.hpp"

namespace billiard {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::filesystem::path prepare_output(const RunConfig& config) {
  std::filesystem::path dir(config.output_dir);
  std::filesystem::create_directories(dir);
  return dir;
}

PhaseReference phase_of(const RunConfig& config) {
  return config.sweep.phase == "global" ? PhaseReference::Global : PhaseReference::Interface;
}

std::string window_tag(const SpectrumWindow& w) { return format_double(w.k_min) + "_" + format_double(w.k_max); }

std::vector<double> stepped_grid(double first, double last, double step) {
  const int points = static_cast<int>(std::llround((last - first) / step)) + 1;
  return uniform_grid(first, last, std::max(points, 2));
}

void write_peaks_csv(const std::vector<Peak>& peaks, const std::filesystem::path& path, const OutputHeader& header) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path.string());
  write_header(out, header);
  out << "L,height\n";
  for (const auto& p : peaks) out << format_double(p.position) << ',' << format_double(p.height) << '\n';
}

}  // namespace

OutputHeader make_header(const RunConfig& config) {
  OutputHeader h;
  h.config_hash = config.hash();
  return h;
}

BoundaryProfile build_profile(const RunConfig& config) {
  const auto& g = config.geometry;
  BoundaryProfile profile = [&] {
    if (g.kind == "darmstadt") return make_darmstadt(g.darmstadt, g.grid_size);
    if (g.kind == "rectangle") return make_rectangle(g.height, g.length, g.grid_size);
    return load_profile_csv(g.path, g.grid_size);
  }();
  const auto& p = config.perturbation;
  if (p.kind == "wiggle") return apply_wiggle(profile, p.amplitude, p.cycles, p.blend);
  if (p.kind == "disorder") {
    const auto dist = p.distribution == "gaussian" ? DisorderDistribution::Gaussian : DisorderDistribution::Uniform;
    return apply_surface_disorder(profile, p.eta, p.pieces, p.seed, dist);
  }
  return profile;
}

std::filesystem::path cache_directory(const RunConfig& config) {
  if (const char* env = std::getenv("BILLIARD_CACHE_DIR"); env != nullptr && *env != '\0') return env;
  return std::filesystem::path(config.output_dir) / "cache";
}

std::string cavity_cache_key(const BoundaryProfile& profile, const BasisSpec& basis) {
  const std::string text = std::string(library_version()) + "|" + profile.description() +
                           "|m_max=" + std::to_string(basis.m_max) + "|n_max=" + std::to_string(basis.n_max) +
                           "|k_keep=" + std::to_string(basis.k_keep);
  return hex64(fnv1a64(text));
}

CavitySolution cmd_solve_cavity(const RunConfig& config, std::ostream& log) {
  config.validate();
  const auto dir = prepare_output(config);
  const BoundaryProfile profile = build_profile(config);
  const std::string key = cavity_cache_key(profile, config.basis);
  const auto cache = cache_directory(config);
  const auto energies_path = cache / (key + ".energies.csv");
  const auto coeff_path = cache / (key + ".coefficients.bin");

  const auto start = std::chrono::steady_clock::now();
  auto solution = [&] {
    if (config.cache && std::filesystem::exists(energies_path) && std::filesystem::exists(coeff_path)) {
      log << "cache hit: " << key << " (" << cache.string() << ")\n";
      return load_solution(profile, energies_path, coeff_path);
    }
    log << "solving cavity: basis " << config.basis.m_max << "x" << config.basis.n_max << ", keeping "
        << config.basis.k_keep << " states\n";
    auto sol = solve_cavity(profile, config.basis);
    if (config.cache) {
      std::filesystem::create_directories(cache);
      save_solution(sol, energies_path, coeff_path);
      log << "cache store: " << key << "\n";
    }
    return sol;
  }();
  log << "cavity ready in " << seconds_since(start) << " s; trusted up to k = "
      << solution.trusted_k_max() * profile.lead_width() / std::numbers::pi << " pi/w\n";

  std::ofstream out(dir / "energies.csv");
  if (!out) throw InvalidInput("cannot write energies.csv");
  write_header(out, make_header(config));
  out << "k,E\n";
  for (int k = 0; k < solution.states(); ++k) out << k << ',' << format_double(solution.energies()[k]) << '\n';
  return solution;
}

SweepResult cmd_sweep(const RunConfig& config, std::ostream& log) {
  const CavitySolution sol = cmd_solve_cavity(config, log);
  const auto dir = prepare_output(config);
  SweepOptions opt;
  opt.phase = phase_of(config);
  opt.skip_tolerance = config.sweep.skip_tolerance;
  opt.threads = config.threads;
  const auto grid = uniform_grid(config.sweep.k_min, config.sweep.k_max, config.sweep.points);
  const auto start = std::chrono::steady_clock::now();
  SweepResult result = sweep(sol, grid, opt);
  log << "sweep: " << grid.size() << " energies in " << seconds_since(start) << " s, " << result.skipped()
      << " skipped\n";
  const auto plateaus = flat_windows(result);
  log << "onset k = " << format_double(conductance_onset(result)) << ", plateau levels:";
  for (int level : plateau_levels(plateaus)) log << ' ' << level;
  log << '\n';
  write_sweep_csv(result, dir / "conductance.csv", make_header(config));
  write_transmission_store(result, dir / "transmission.bin");
  return result;
}

SpectrumReport cmd_spectrum(const RunConfig& config, std::ostream& log) {
  const CavitySolution sol = cmd_solve_cavity(config, log);
  const auto dir = prepare_output(config);
  const auto header = make_header(config);
  SweepOptions opt;
  opt.phase = phase_of(config);
  opt.skip_tolerance = config.sweep.skip_tolerance;
  opt.threads = config.threads;
  SpectrumOptions sopt;
  sopt.zero_pad = config.spectrum.zero_pad;
  sopt.hann = config.spectrum.hann;
  const double max_length = config.spectrum.max_length;

  SpectrumReport report;
  for (const auto& w : config.spectrum.windows) {
    const auto grid = stepped_grid(w.k_min, w.k_max, config.spectrum.dk);
    const SweepResult s = sweep(sol, grid, opt);
    WindowSpectrum ws{w, power_spectrum(s, w.k_min, w.k_max, w.modes, sopt), {}};
    // Paths shorter than the cavity cannot transmit; closer than one
    // resolution element two maxima are not resolved.
    ws.peaks = find_peaks(ws.power.lengths, ws.power.power, sol.profile().length(), max_length,
                          config.spectrum.peak_threshold, ws.power.resolution);
    write_power_spectrum_csv(ws.power, dir / ("power_" + window_tag(w) + ".csv"), header, max_length);
    write_peaks_csv(ws.peaks, dir / ("peaks_" + window_tag(w) + ".csv"), header);
    log << "power spectrum [" << w.k_min << ", " << w.k_max << "] with " << w.modes << " modes: " << ws.peaks.size()
        << " peaks\n";
    report.windows.push_back(std::move(ws));
  }

  const auto& w = config.spectrum.t11;
  const SweepResult s = sweep(sol, stepped_grid(w.k_min, w.k_max, config.spectrum.dk), opt);
  report.t11 = t11_length_spectrum(s, w.k_min, w.k_max, sopt);
  std::vector<double> magnitude(report.t11.amplitude.size());
  for (std::size_t i = 0; i < magnitude.size(); ++i) magnitude[i] = std::abs(report.t11.amplitude[i]);
  report.t11_peaks = find_peaks(report.t11.lengths, magnitude, sol.profile().length(), max_length,
                               config.spectrum.peak_threshold, report.t11.resolution);
  report.t11_onset = onset_length(report.t11);
  write_length_spectrum_csv(report.t11, dir / "t11_length.csv", header, max_length);
  log << "t11 length spectrum [" << w.k_min << ", " << w.k_max << "]: onset at L = " << format_double(report.t11_onset)
      << ", " << report.t11_peaks.size() << " peaks\n";
  return report;
}

double spectrum_self_test(const RunConfig& config, double l0) {
  if (config.spectrum.windows.empty()) throw InvalidInput("self test needs a spectrum window");
  const auto& w = config.spectrum.windows.front();
  const double unit = std::numbers::pi;  // unit lead width
  std::vector<double> k;
  std::vector<std::complex<double>> t;
  for (double kk : stepped_grid(w.k_min, w.k_max, config.spectrum.dk)) {
    k.push_back(kk * unit);
    t.push_back(std::exp(std::complex<double>(0.0, kk * unit * l0)));
  }
  SpectrumOptions sopt;
  sopt.zero_pad = config.spectrum.zero_pad;
  sopt.hann = config.spectrum.hann;
  const auto spec = length_spectrum(k, t, sopt);
  std::vector<double> magnitude(spec.amplitude.size());
  for (std::size_t i = 0; i < magnitude.size(); ++i) magnitude[i] = std::abs(spec.amplitude[i]);
  const auto peaks = leading_peaks(find_peaks(spec.lengths, magnitude, spec.lengths.front(), spec.lengths.back()), 1);
  if (peaks.empty()) throw NumericalError("self test found no peak");
  return peaks.front().position;
}

double cmd_validate_1d(const RunConfig& config, std::ostream& log) {
  config.validate();
  const auto dir = prepare_output(config);
  const auto& b = config.barrier;
  BarrierProblem problem;
  problem.v0 = b.v0;
  problem.m_trunc = b.m_trunc;
  const auto energies = uniform_grid(b.e_min, b.e_max, b.points);
  const auto rows = barrier_table(energies, problem);
  double worst = 0.0;
  std::size_t skipped = 0;
  for (const auto& r : rows) {
    if (r.skipped) {
      ++skipped;
      continue;
    }
    worst = std::max(worst, std::abs(r.rmatrix - r.exact));
  }
  write_barrier_csv(rows, dir / "barrier.csv", make_header(config));
  log << "barrier: max |T_rmatrix - T_exact| = " << format_double(worst) << " over " << rows.size() - skipped
      << " energies (" << skipped << " poles skipped)\n";
  return worst;
}

PairSpectrum cmd_two_body(const RunConfig& config, std::ostream& log) {
  const CavitySolution sol = cmd_solve_cavity(config, log);
  const auto dir = prepare_output(config);
  const auto& t = config.two_body;
  InteractionSpec spec = [&] {
    if (t.potential == "contact") return contact_interaction(t.strength, t.range);
    if (t.potential == "constant") return constant_interaction(t.strength);
    return gaussian_interaction(t.strength, t.range,
                                t.form == "separate" ? PotentialForm::Separate : PotentialForm::Euclidean);
  }();
  spec.order = t.order;
  spec.u_order = t.u_order;
  spec.check_convergence = t.check_convergence;
  std::vector<int> states(t.states);
  for (int i = 0; i < t.states; ++i) states[i] = i;
  if (t.check_convergence) h_ijkl(sol, 0, 0, 0, 0, spec);
  const auto start = std::chrono::steady_clock::now();
  PairSpectrum pairs = interaction_block(sol, states, spec);
  log << "two-body block " << pairs.pairs.size() << " pair states, " << spec.description << ", in "
      << seconds_since(start) << " s\n";

  std::ofstream out(dir / "pair_energies.csv");
  if (!out) throw InvalidInput("cannot write pair_energies.csv");
  write_header(out, make_header(config));
  out << "index,E\n";
  for (Eigen::Index i = 0; i < pairs.energies.size(); ++i) out << i << ',' << format_double(pairs.energies[i]) << '\n';
  return pairs;
}

ValidationReport cmd_validate(const RunConfig& config, const ValidationOptions& options, std::ostream& log) {
  config.validate();
  const auto dir = prepare_output(config);
  ValidationReport report = run_validation(options);
  for (const auto& c : report.checks) {
    log << (c.passed ? "PASS " : "FAIL ") << c.name << " measured=" << format_double(c.measured)
        << " tolerance=" << format_double(c.tolerance) << " (" << c.seconds << " s)\n";
  }
  std::ofstream out(dir / "validation_report.json");
  if (!out) throw InvalidInput("cannot write validation_report.json");
  out << report.to_json() << '\n';
  return report;
}

}  // namespace billiard
