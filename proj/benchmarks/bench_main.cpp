#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "billiard/cavity.hpp"
#include "billiard/leads.hpp"
#include "billiard/scattering.hpp"
#include "billiard/spectra.hpp"
#include "billiard/spectral_integrals.hpp"
#include "billiard/twobody.hpp"

using namespace billiard;

namespace {

constexpr double kPi = std::numbers::pi;

void BM_CosineIntegrals(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  std::vector<double> f(m);
  for (int i = 0; i < m; ++i) f[i] = std::exp(-(i + 0.5) * 4.32 / m);
  for (auto _ : state) benchmark::DoNotOptimize(fft_cosine_integrals(f, 4.32, 180));
  state.SetItemsProcessed(state.iterations() * m);
}
BENCHMARK(BM_CosineIntegrals)->RangeMultiplier(4)->Range(1 << 10, 1 << 16);

void BM_Assembly(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto profile = make_darmstadt(DarmstadtParams{}, 65536);
  const BasisSpec basis{m, m / 2, 1};
  for (auto _ : state) benchmark::DoNotOptimize(assemble_hamiltonian(profile, basis));
}
BENCHMARK(BM_Assembly)->Arg(20)->Arg(40)->Arg(90)->Unit(benchmark::kMillisecond);

void BM_Eigensolve(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto profile = make_darmstadt(DarmstadtParams{}, 8192);
  const BasisSpec basis{m, m / 2, m * (m / 2)};
  const auto h = assemble_hamiltonian(profile, basis);
  for (auto _ : state) benchmark::DoNotOptimize(solve_cavity(profile, h, basis));
}
BENCHMARK(BM_Eigensolve)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

// One S-matrix from a retained spectrum of `states` levels.
void BM_SMatrix(benchmark::State& state) {
  const auto profile = make_darmstadt(DarmstadtParams{}, 8192);
  const BasisSpec basis{60, 30, static_cast<int>(state.range(0))};
  static const auto sol = solve_cavity(profile, BasisSpec{60, 30, 1800});
  const CavitySolution kept(profile, basis, sol.energies().head(basis.k_keep),
                            sol.coefficients().leftCols(basis.k_keep));
  const double w = profile.lead_width();
  const auto table = overlaps(kept, 16);
  const auto space = channel_space(std::pow(12.37 * kPi / w, 2), w);
  for (auto _ : state) {
    benchmark::DoNotOptimize(s_from_r(r_matrix(kept, table, space), space, profile.length()));
  }
}
BENCHMARK(BM_SMatrix)->Arg(600)->Arg(1800)->Unit(benchmark::kMicrosecond);

void BM_LengthSpectrum(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<double> k(n);
  std::vector<std::complex<double>> t(n);
  for (int i = 0; i < n; ++i) {
    k[i] = kPi * (1.0 + 18.0 * i / (n - 1));
    t[i] = std::exp(std::complex<double>(0.0, 4.32 * k[i]));
  }
  for (auto _ : state) benchmark::DoNotOptimize(length_spectrum(k, t));
}
BENCHMARK(BM_LengthSpectrum)->Arg(601)->Arg(3601);

void BM_TwoBodyElement(benchmark::State& state) {
  const auto sol = solve_cavity(make_darmstadt(DarmstadtParams{}, 4096), BasisSpec{20, 10, 8});
  auto spec = gaussian_interaction(1.0, 0.1);
  spec.order = static_cast<int>(state.range(0));
  const TwoBodyIntegrator integ(sol, {0, 1, 2, 3}, spec);
  for (auto _ : state) benchmark::DoNotOptimize(integ.element(0, 1, 2, 3));
}
BENCHMARK(BM_TwoBodyElement)->Arg(24)->Arg(48)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
