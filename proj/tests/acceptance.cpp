// Acceptance suite: one PASS/FAIL line per criterion. Reference-scale cavity
// solves are cached under the output directory given as the first argument.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "billiard/commands.hpp"
#include "billiard/error.hpp"
#include "billiard/leads.hpp"
#include "billiard/scattering.hpp"
#include "billiard/spectra.hpp"
#include "billiard/spectral_integrals.hpp"
#include "billiard/twobody.hpp"
#include "oracles.hpp"

using namespace billiard;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

fs::path g_out = "acceptance_out";
std::ostringstream g_log;

RunConfig reference(const std::string& perturbation) {
  RunConfig c;
  c.output_dir = (g_out / perturbation).string();
  c.perturbation.kind = perturbation == "clean" ? "none" : perturbation;
  c.sweep.points = 1801;
  return c;
}

const CavitySolution& reference_solution(std::string* timing) {
  static std::string note;
  static const CavitySolution sol = [] {
    const auto t = Clock::now();
    std::ostringstream log;
    auto s = cmd_solve_cavity(reference("clean"), log);
    const bool cached = log.str().find("cache hit") != std::string::npos;
    note = fmt(since(t)) + (cached ? " s (cached eigenpairs)" : " s");
    g_log << log.str();
    return s;
  }();
  *timing = note;
  return sol;
}

const SweepResult& reference_sweep(const std::string& perturbation) {
  static std::map<std::string, SweepResult> cache;
  auto it = cache.find(perturbation);
  if (it == cache.end()) it = cache.emplace(perturbation, cmd_sweep(reference(perturbation), g_log)).first;
  return it->second;
}

// 1. Barrier transmission.
Outcome barrier() {
  const auto t = Clock::now();
  BarrierProblem p;
  std::vector<double> e;
  for (int i = 0; i < 200; ++i) e.push_back(0.1 + 19.9 * i / 199.0);
  const auto rows = barrier_table(e, p);
  double worst = 0.0;
  int used = 0;
  for (const auto& r : rows) {
    if (r.skipped) continue;
    ++used;
    worst = std::max(worst, std::abs(r.rmatrix - r.exact));
  }
  const double secs = since(t);
  return {worst <= 1e-3 && used >= 190 && secs < 1.0,
          "max |dT| = " + fmt(worst) + " over " + std::to_string(used) + " energies, " + fmt(secs) + " s"};
}

// 2. Rectangle spectrum and straight-guide staircase.
Outcome rectangle() {
  const auto t = Clock::now();
  const BasisSpec small{12, 12, 144};
  const auto sol = solve_cavity(make_rectangle(1.0, 2.0, 512), small);
  std::vector<double> exact;
  for (int m = 0; m < 12; ++m)
    for (int n = 1; n <= 12; ++n) exact.push_back(std::pow(m * kPi / 2.0, 2) + std::pow(n * kPi, 2));
  std::sort(exact.begin(), exact.end());
  double eig = 0.0;
  for (int k = 0; k < 144; ++k) eig = std::max(eig, std::abs(sol.energies()[k] - exact[k]) / exact[k]);

  const auto guide = solve_cavity(make_rectangle(1.0, 0.5, 1024), BasisSpec{200, 6, 1200});
  std::vector<double> grid;
  for (int i = 0; i < 50; ++i) grid.push_back(1.0637 + 4.8 * i / 49.0);
  const auto res = sweep(guide, grid);
  double stair = 0.0;
  int used = 0;
  for (const auto& p : res.points) {
    if (p.skipped) continue;
    ++used;
    stair = std::max(stair, std::abs(p.conductance - std::floor(p.k)));
  }
  const double secs = since(t);
  return {eig <= 1e-10 && stair <= 1e-3 && used == 50 && secs < 10.0,
          "eigenvalues rel " + fmt(eig) + ", |T - N| = " + fmt(stair) + " at " + std::to_string(used) +
              " energies, " + fmt(secs) + " s"};
}

// 3. FFT assembly vs original-coordinate quadrature.
Outcome assembly() {
  const auto t = Clock::now();
  const BasisSpec basis{6, 6, 36};
  const auto clean = make_darmstadt(DarmstadtParams{}, 65536);
  const auto rough = apply_surface_disorder(clean, 0.2, 100, 1);
  double worst = 0.0;
  for (const auto* p : {&clean, &rough}) {
    const auto fft = assemble_hamiltonian(*p, basis);
    const auto ref = oracle::hamiltonian(*p, basis, 64, 16, 32);
    worst = std::max(worst, (fft - ref).cwiseAbs().maxCoeff() / ref.cwiseAbs().maxCoeff());
  }
  const double secs = since(t);
  return {worst <= 1e-8 && secs < 30.0, "max rel diff " + fmt(worst) + " (smooth + disordered), " + fmt(secs) + " s"};
}

// 4. Unitarity and reciprocity at reference truncation.
Outcome unitarity() {
  std::string solve_time;
  const auto& sol = reference_solution(&solve_time);
  const double w = sol.profile().lead_width();
  const auto table = overlaps(sol, 16);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> pick(2.0, 15.0);
  double unit = 0.0;
  double recip = 0.0;
  int done = 0;
  double s_secs = 0.0;
  while (done < 20) {
    const double k = pick(rng);
    try {
      const auto t = Clock::now();
      const auto space = channel_space(std::pow(k * kPi / w, 2), w);
      const auto s = s_from_r(r_matrix(sol, table, space), space, sol.profile().length());
      s_secs += since(t);
      unit = std::max(unit, s.unitarity_defect());
      recip = std::max(recip, s.reciprocity_defect());
      ++done;
    } catch (const SingularEnergy&) {
    }
  }
  const double per_energy_ms = 1e3 * s_secs / done;

  // k_keep doubling at reduced basis.
  const auto prof = make_darmstadt(DarmstadtParams{}, 8192);
  const auto h = assemble_hamiltonian(prof, BasisSpec{30, 16, 480});
  const auto a = solve_cavity(prof, h, BasisSpec{30, 16, 120});
  const auto b = solve_cavity(prof, h, BasisSpec{30, 16, 240});
  double da = 0.0;
  double db = 0.0;
  for (double k : {2.31, 3.47, 4.62}) {
    for (const auto* s : {&a, &b}) {
      const auto space = channel_space(std::pow(k * kPi / w, 2), prof.lead_width());
      const auto m = s_from_r(r_matrix(*s, overlaps(*s, space.open()), space), space, prof.length());
      (s == &a ? da : db) = std::max(s == &a ? da : db, m.unitarity_defect());
    }
  }
  const bool shrinks = db <= da || std::max(da, db) < 1e-12;
  return {unit < 1e-3 && recip < 1e-3 && shrinks && per_energy_ms < 1000.0,
          "|SS+ - I| = " + fmt(unit) + ", |S - S^T| = " + fmt(recip) + " at 20 energies; k_keep 120 -> 240: " +
              fmt(da) + " -> " + fmt(db) + "; solve " + solve_time + ", S " + fmt(per_energy_ms) +
              " ms/energy"};
}

// 5. Conductance onset and plateaus.
Outcome onset() {
  const auto& s = reference_sweep("clean");
  const double k0 = conductance_onset(s);
  const auto levels = plateau_levels(flat_windows(s));
  std::string lv;
  for (int l : levels) lv += " " + std::to_string(l);
  return {std::abs(k0 - 3.23) <= 0.2 && levels.size() >= 2,
          "onset k = " + fmt(k0, 4) + ", plateau levels:" + lv};
}

// 6. Power-spectrum peaks and t11 onset.
Outcome echo() {
  auto cfg = reference("clean");
  cfg.spectrum.windows = {{6.0, 9.0, 6}};
  const auto report = cmd_spectrum(cfg, g_log);
  const auto peaks = leading_peaks(report.windows.front().peaks, 5);
  const std::vector<double> target{4.78, 6.65, 8.05, 9.1, 10.2};
  bool ok = peaks.size() == 5;
  std::string list;
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    list += " " + fmt(peaks[i].position, 4);
    if (i < target.size()) ok = ok && std::abs(peaks[i].position - target[i]) <= 0.3;
  }
  ok = ok && std::abs(report.t11_onset - 4.32) <= 0.3;
  return {ok, "leading peaks L =" + list + "; t11 onset L = " + fmt(report.t11_onset, 4)};
}

// 7. Perturbations destroy the high-k plateaus.
Outcome perturbation() {
  auto count = [](const std::string& name) { return plateau_levels(flat_windows(reference_sweep(name), 0.3, 0.15, 10.0)); };
  const auto clean = count("clean");
  const auto wiggle = count("wiggle");
  const auto disorder = count("disorder");
  // Echo-band share of the [6, 9] power spectrum, reported alongside.
  std::string band;
  for (const std::string name : {"clean", "wiggle", "disorder"}) {
    auto cfg = reference(name);
    cfg.spectrum.windows = {{6.0, 9.0, 6}};
    std::ostringstream log;
    const auto report = cmd_spectrum(cfg, log);
    band += " " + name + " " + fmt(band_fraction(report.windows.front().power, 4.0, 12.0));
  }
  return {!clean.empty() && wiggle.empty() && disorder.empty(),
          "conducting plateau levels above k = 10: clean " + std::to_string(clean.size()) + ", wiggle " +
              std::to_string(wiggle.size()) + ", disorder " + std::to_string(disorder.size()) +
              "; P(L) share in [4, 12]:" + band};
}

// 8. Two-body oracles.
Outcome two_body() {
  const auto t = Clock::now();
  const auto rect = solve_cavity(make_rectangle(1.0, 2.0, 1024), BasisSpec{8, 6, 8});
  const auto darm = solve_cavity(make_darmstadt(DarmstadtParams{}, 4096), BasisSpec{20, 10, 8});
  std::vector<int> states{0, 1, 2, 3, 4, 5, 6, 7};
  double constant = 0.0;
  for (const auto* sol : {&rect, &darm}) {
    auto spec = constant_interaction(1.5);
    spec.order = 48;
    const TwoBodyIntegrator c(*sol, states, spec);
    for (int i : states)
      for (int j : states)
        for (int k : states)
          for (int l : states)
            constant = std::max(constant, std::abs(c.element(i, j, k, l) - 1.5 * (i == k) * (j == l)));
  }
  auto spec = gaussian_interaction(1.0, 0.5);
  spec.order = 48;
  const TwoBodyIntegrator rect_integ(rect, states, spec);
  const TwoBodyIntegrator darm_integ(darm, states, spec);
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> pick(0, 7);
  double rel = 0.0;
  for (int n = 0; n < 10; ++n) {
    const auto& sol = n < 5 ? rect : darm;
    const TwoBodyIntegrator& integ = n < 5 ? rect_integ : darm_integ;
    const int i = pick(rng), j = pick(rng), k = pick(rng), l = pick(rng);
    const double ref = oracle::two_body(sol, i, j, k, l, spec.potential, 56);
    const double scale = std::max(std::abs(ref), 1e-3 * std::abs(integ.element(0, 0, 0, 0)));
    rel = std::max(rel, std::abs(integ.element(i, j, k, l) - ref) / scale);
  }
  const double secs = since(t);
  return {constant <= 1e-8 && rel <= 1e-6 && secs < 120.0,
          "V = c error " + fmt(constant) + ", u-v vs x-y rel " + fmt(rel) + " on 10 tuples, " + fmt(secs) + " s"};
}

// 9. Property suite.
Outcome properties() {
  std::vector<std::string> failed;
  const auto d = build_v_tables(12);
  {
    const auto rule = oracle::composite(16, [] {
      std::vector<double> c;
      for (int i = 0; i <= 64; ++i) c.push_back(i / 64.0);
      return c;
    }());
    double worst = 0.0;
    for (int a = 0; a < 12; ++a)
      for (int b = 0; b < 12; ++b) {
        const double n = a + 1;
        const double m = b + 1;
        double i1 = 0, i2 = 0, i3 = 0, i4 = 0, i5 = 0;
        for (std::size_t q = 0; q < rule.x.size(); ++q) {
          const double v = rule.x[q];
          const double w = rule.w[q];
          const double sn = std::sin(n * kPi * v);
          const double cn = std::cos(n * kPi * v);
          const double cm = std::cos(m * kPi * v);
          i1 += w * sn * cm;
          i2 += w * v * sn * cm;
          i3 += w * cn * cm;
          i4 += w * v * cn * cm;
          i5 += w * v * v * cn * cm;
        }
        const double nm = n * m * kPi * kPi;
        worst = std::max({worst, std::abs(d.d1(a, b) - m * kPi * i1), std::abs(d.d2(a, b) - m * kPi * i2),
                          std::abs(d.d3(a, b) - nm * i3), std::abs(d.d4(a, b) - nm * i4),
                          std::abs(d.d5(a, b) - nm * i5)});
      }
    if (worst > 1e-10) failed.push_back("v tables " + fmt(worst));
  }
  {
    const double L = 2.0;
    std::vector<double> f;
    for (int i = 0; i < 4096; ++i) f.push_back(std::exp(-(i + 0.5) * L / 4096));
    const auto c = fft_cosine_integrals(f, L, 8);
    double worst = 0.0;
    for (int p = 0; p < 8; ++p) {
      const double ref =
          oracle::simpson([&](double u) { return std::cos(p * kPi * u / L) * std::exp(-u); }, 0.0, L, 100000);
      worst = std::max(worst, std::abs(c[p] - ref));
    }
    if (worst > 1e-9) failed.push_back("fft integrals " + fmt(worst));
  }
  {
    const auto p = make_darmstadt(DarmstadtParams{}, 16384);
    const auto a = solve_cavity(p, BasisSpec{12, 6, 40});
    const auto b = solve_cavity(p, BasisSpec{18, 9, 40});
    const auto c = solve_cavity(p, BasisSpec{24, 12, 40});
    bool mono = true;
    for (int k = 0; k < 40; ++k)
      mono = mono && b.energies()[k] <= a.energies()[k] * (1 + 1e-12) && c.energies()[k] <= b.energies()[k] * (1 + 1e-12);
    if (!mono) failed.push_back("Rayleigh-Ritz");
  }
  {
    std::vector<double> k;
    std::vector<std::complex<double>> t;
    for (int i = 0; i < 601; ++i) {
      k.push_back(kPi * (6.0 + 0.005 * i));
      t.push_back(std::polar(1.0 / (1.0 + 0.05 * k.back()), 4.78 * k.back() + std::sin(k.back())));
    }
    const auto s = length_spectrum(k, t);
    double lhs = 0.0;
    double rhs = 0.0;
    for (auto v : t) lhs += std::norm(v) * (k[1] - k[0]);
    for (auto a : s.amplitude) rhs += std::norm(a) * s.spacing;
    if (std::abs(rhs / (2 * kPi * lhs) - 1.0) > 1e-6) failed.push_back("Parseval");
  }
  {
    const auto base = make_darmstadt(DarmstadtParams{}, 8192);
    if (apply_surface_disorder(base, 0.2, 100, 1).samples().Q != apply_surface_disorder(base, 0.2, 100, 1).samples().Q)
      failed.push_back("disorder determinism");
  }
  std::string detail = "v tables, FFT integrals, Rayleigh-Ritz, Parseval, seeded disorder";
  if (!failed.empty()) {
    detail = "failed:";
    for (const auto& f : failed) detail += " [" + f + "]";
  }
  return {failed.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_out = argv[1];
  fs::create_directories(g_out);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"barrier transmission", barrier},       {"rectangle limit", rectangle},
      {"assembly oracle", assembly},           {"unitarity and reciprocity", unitarity},
      {"conductance onset", onset},            {"length spectrum", echo},
      {"perturbation sensitivity", perturbation}, {"two-body oracles", two_body},
      {"property suite", properties},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << criteria[i].first
              << "): " << o.detail << " [" << fmt(since(t)) << " s]" << std::endl;
  }
  if (failures) {
    std::cout << "--- log ---\n" << g_log.str();
  }
  return failures == 0 ? 0 : 1;
}
