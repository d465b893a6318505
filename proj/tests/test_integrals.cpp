#include <doctest.h>

#include <cmath>
#include <vector>

#include "billiard/cavity.hpp"
#include "billiard/spectral_integrals.hpp"
#include "oracles.hpp"

using namespace billiard;
using oracle::kPi;

namespace {

std::vector<double> sample(double L, int M, GridKind grid, double (*f)(double)) {
  std::vector<double> s;
  if (grid == GridKind::Midpoint) {
    for (int i = 0; i < M; ++i) s.push_back(f((i + 0.5) * L / M));
  } else {
    for (int i = 0; i <= M; ++i) s.push_back(f(i * L / M));
  }
  return s;
}

}  // namespace

TEST_CASE("cosine integrals of trivial integrands") {
  const double L = 2.0;
  for (auto grid : {GridKind::Midpoint, GridKind::Endpoint}) {
    TransformOptions opt{grid};
    const auto one = fft_cosine_integrals(sample(L, 256, grid, [](double) { return 1.0; }), L, 20, opt);
    CHECK(one[0] == doctest::Approx(L).epsilon(1e-12));
    for (int p = 1; p < 20; ++p) CHECK(std::abs(one[p]) < 1e-12);

    const auto c1 = fft_cosine_integrals(sample(L, 256, grid, [](double u) { return std::cos(kPi * u / 2.0); }), L, 20, opt);
    CHECK(c1[1] == doctest::Approx(L / 2).epsilon(1e-12));
    for (int p = 0; p < 20; ++p)
      if (p != 1) CHECK(std::abs(c1[p]) < 1e-12);
  }
}

TEST_CASE("cosine and sine integrals vs Simpson") {
  const double L = 2.0;
  auto f = [](double u) { return std::exp(-u); };
  auto g = [](double u) { return std::exp(std::sin(u)) / (1.0 + u * u); };
  for (auto grid : {GridKind::Midpoint, GridKind::Endpoint}) {
    TransformOptions opt{grid};
    const auto cf = fft_cosine_integrals(sample(L, 4096, grid, +f), L, 12, opt);
    const auto sf = fft_sine_integrals(sample(L, 4096, grid, +g), L, 12, opt);
    const auto cg = fft_cosine_integrals(sample(L, 4096, grid, +g), L, 12, opt);
    for (int p = 0; p < 12; ++p) {
      const double w = p * kPi / L;
      const double rc = oracle::simpson([&](double u) { return std::cos(w * u) * f(u); }, 0, L, 100000);
      const double rs = oracle::simpson([&](double u) { return std::sin(w * u) * g(u); }, 0, L, 100000);
      const double rg = oracle::simpson([&](double u) { return std::cos(w * u) * g(u); }, 0, L, 100000);
      CHECK(std::abs(cf[p] - rc) < 1e-9);
      CHECK(std::abs(sf[p] - rs) < 1e-9);
      CHECK(std::abs(cg[p] - rg) < 1e-9);
    }
  }
}

TEST_CASE("end corrections matter") {
  const double L = 2.0;
  auto f = [](double u) { return std::exp(-u); };
  const auto s = sample(L, 512, GridKind::Midpoint, +f);
  const double exact = oracle::simpson([&](double u) { return std::cos(3 * kPi * u / L) * f(u); }, 0, L, 100000);
  const auto plain = fft_cosine_integrals(s, L, 4, {GridKind::Midpoint, EndpointCorrection::None});
  const auto corrected = fft_cosine_integrals(s, L, 4, {GridKind::Midpoint, EndpointCorrection::EulerMaclaurin});
  CHECK(std::abs(corrected[3] - exact) < 1e-3 * std::abs(plain[3] - exact));
}

TEST_CASE("v tables against quadrature") {
  const int n_max = 12;
  const auto t = build_v_tables(n_max);
  const auto rule = oracle::composite(16, [] {
    std::vector<double> c;
    for (int i = 0; i <= 64; ++i) c.push_back(i / 64.0);
    return c;
  }());
  auto integral = [&](auto&& f) {
    double s = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) s += rule.w[i] * f(rule.x[i]);
    return s;
  };
  double worst = 0.0;
  for (int i = 0; i < n_max; ++i) {
    for (int j = 0; j < n_max; ++j) {
      const double n = i + 1;
      const double np = j + 1;
      auto S = [&](double v) { return std::sin(n * kPi * v); };
      auto C = [](double k, double v) { return std::cos(k * kPi * v); };
      const double d1 = np * kPi * integral([&](double v) { return S(v) * C(np, v); });
      const double d2 = np * kPi * integral([&](double v) { return v * S(v) * C(np, v); });
      const double d3 = n * np * kPi * kPi * integral([&](double v) { return C(n, v) * C(np, v); });
      const double d4 = n * np * kPi * kPi * integral([&](double v) { return v * C(n, v) * C(np, v); });
      const double d5 = n * np * kPi * kPi * integral([&](double v) { return v * v * C(n, v) * C(np, v); });
      worst = std::max({worst, std::abs(t.d1(i, j) - d1), std::abs(t.d2(i, j) - d2), std::abs(t.d3(i, j) - d3),
                        std::abs(t.d4(i, j) - d4), std::abs(t.d5(i, j) - d5)});
    }
    CHECK(t.d2(i, i) == doctest::Approx(-0.25));
    CHECK(t.d3(i, i) == doctest::Approx((i + 1) * (i + 1) * kPi * kPi / 2));
  }
  CHECK(worst < 1e-10);
  CHECK(t.d3.isDiagonal(0.0));
}

TEST_CASE("oracle Gauss-Legendre is exact for polynomials") {
  const auto r = oracle::gauss_legendre(10, -1.0, 2.0);
  double s = 0.0;
  for (int i = 0; i < 10; ++i) s += r.w[i] * std::pow(r.x[i], 19);
  CHECK(s == doctest::Approx((std::pow(2.0, 20) - 1.0) / 20).epsilon(1e-13));
}
