#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "billiard/error.hpp"
#include "billiard/twobody.hpp"
#include "oracles.hpp"

using namespace billiard;

namespace {

const CavitySolution& rectangle() {
  static const CavitySolution sol = solve_cavity(make_rectangle(1.0, 2.0, 1024), BasisSpec{8, 6, 12});
  return sol;
}

const CavitySolution& darmstadt() {
  static const CavitySolution sol = solve_cavity(make_darmstadt(DarmstadtParams{}, 4096), BasisSpec{16, 8, 12});
  return sol;
}

std::vector<int> first(int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

}  // namespace

TEST_CASE("zero and constant potentials") {
  const auto& sol = darmstadt();
  // The u-rule must resolve products of the basis cosines.
  auto c0 = constant_interaction(0.0);
  auto c2 = constant_interaction(2.0);
  c0.u_order = c2.u_order = 40;
  const TwoBodyIntegrator zero(sol, first(6), c0);
  const TwoBodyIntegrator two(sol, first(6), c2);
  double worst = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      for (int k = 0; k < 6; ++k)
        for (int l = 0; l < 6; ++l) {
          CHECK(zero.element(i, j, k, l) == 0.0);
          worst = std::max(worst, std::abs(two.element(i, j, k, l) - 2.0 * (i == k) * (j == l)));
        }
  CHECK(worst < 1e-8);
}

TEST_CASE("rectangle ground-state element against the original-coordinate oracle") {
  const auto& sol = rectangle();
  auto spec = gaussian_interaction(1.0, 0.5);
  spec.order = 16;
  const double ours = h_ijkl(sol, 0, 0, 0, 0, spec);
  const double ref = oracle::two_body(sol, 0, 0, 0, 0, spec.potential, 40);
  CHECK(ours == doctest::Approx(ref).epsilon(1e-6));
}

TEST_CASE("random tuples against the original-coordinate oracle") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> pick(0, 7);
  for (const CavitySolution* sol : {&rectangle(), &darmstadt()}) {
    auto spec = gaussian_interaction(1.0, 0.5);
    spec.order = 40;
    const TwoBodyIntegrator integ(*sol, first(8), spec);
    for (int t = 0; t < 3; ++t) {
      const int i = pick(rng), j = pick(rng), k = pick(rng), l = pick(rng);
      const double ref = oracle::two_body(*sol, i, j, k, l, spec.potential, 40);
      const double scale = std::max(std::abs(ref), 1e-3 * std::abs(integ.element(0, 0, 0, 0)));
      CHECK(std::abs(integ.element(i, j, k, l) - ref) < 1e-6 * scale);
    }
  }
}

TEST_CASE("exchange symmetries hold exactly") {
  const auto& sol = darmstadt();
  const TwoBodyIntegrator integ(sol, first(5), gaussian_interaction(1.0, 0.3));
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      for (int k = 0; k < 5; ++k)
        for (int l = 0; l < 5; ++l) {
          const double v = integ.element(i, j, k, l);
          CHECK(v == integ.element(k, l, i, j));
          CHECK(v == integ.element(j, i, l, k));
        }
}

TEST_CASE("pair spectra") {
  const auto& sol = rectangle();
  const auto states = first(4);
  std::vector<double> bare;
  for (int i : states)
    for (int j : states) bare.push_back(sol.energies()[i] + sol.energies()[j]);
  std::sort(bare.begin(), bare.end());

  const auto free = interaction_block(sol, states, constant_interaction(0.0));
  const auto shifted = interaction_block(sol, states, constant_interaction(3.0));
  REQUIRE(free.energies.size() == 16);
  for (int p = 0; p < 16; ++p) {
    CHECK(free.energies[p] == doctest::Approx(bare[p]).epsilon(1e-12));
    CHECK(shifted.energies[p] == doctest::Approx(bare[p] + 3.0).epsilon(1e-10));
  }
  CHECK((free.hamiltonian - free.hamiltonian.transpose()).cwiseAbs().maxCoeff() == 0.0);

  // First-order perturbation theory for a weak interaction.
  const auto spec = gaussian_interaction(1e-3, 0.3);
  const auto weak = interaction_block(sol, states, spec);
  const double h0000 = h_ijkl(sol, 0, 0, 0, 0, spec);
  double bound = 0.0;
  for (int k : states)
    for (int l : states) {
      if (k == 0 && l == 0) continue;
      const double gap = sol.energies()[k] + sol.energies()[l] - 2.0 * sol.energies()[0];
      bound += std::pow(h_ijkl(sol, 0, 0, k, l, spec), 2) / gap;
    }
  CHECK(std::abs(weak.energies[0] - (2.0 * sol.energies()[0] + h0000)) <= bound + 1e-12);
}

TEST_CASE("convergence check and validation") {
  const auto& sol = darmstadt();
  auto spec = contact_interaction(1.0, 0.02);
  spec.order = 8;
  spec.check_convergence = true;
  CHECK_THROWS_AS(h_ijkl(sol, 0, 0, 0, 0, spec), NumericalError);
  spec.order = 4;
  CHECK_THROWS_AS(spec.validate(), InvalidInput);
  spec.order = 24;
  spec.u_order = 4;
  CHECK_THROWS_AS(spec.validate(), InvalidInput);
  CHECK_THROWS_AS(TwoBodyIntegrator(sol, {0, 40}, gaussian_interaction(1.0, 0.1)), InvalidInput);

  const auto sep = gaussian_interaction(1.0, 0.3, PotentialForm::Separate);
  CHECK(sep.potential(0.0, 0.0) == doctest::Approx(1.0));
  CHECK(sep.potential(10.0, 0.0) == doctest::Approx(0.5));
}
