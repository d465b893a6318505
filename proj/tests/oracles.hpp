#pragma once

// Reference computations for the tests. Nothing here calls into the library
// numerics: quadrature rules, the Hamiltonian and the two-body integrals are
// evaluated in the original (x, y) coordinates from first principles.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "billiard/cavity.hpp"
#include "billiard/geometry.hpp"

namespace oracle {

constexpr double kPi = std::numbers::pi;

struct Rule {
  std::vector<double> x;
  std::vector<double> w;
};

// Gauss-Legendre nodes by Newton iteration on P_n.
inline Rule gauss_legendre(int n, double a, double b) {
  auto legendre = [n](double z, double& dp) {
    double p0 = 1.0;
    double p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    return p1;
  };
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double dz = legendre(z, dp) / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    legendre(z, dp);
    r.x[i] = 0.5 * (a + b) - 0.5 * (b - a) * z;
    r.w[i] = (b - a) / ((1.0 - z * z) * dp * dp);
  }
  return r;
}

inline Rule composite(int n, const std::vector<double>& cuts) {
  Rule out;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const auto r = gauss_legendre(n, cuts[c], cuts[c + 1]);
    out.x.insert(out.x.end(), r.x.begin(), r.x.end());
    out.w.insert(out.w.end(), r.w.begin(), r.w.end());
  }
  return out;
}

inline double simpson(const std::function<double(double)>& f, double a, double b, int intervals) {
  if (intervals % 2) ++intervals;
  const double h = (b - a) / intervals;
  double s = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

inline double golden_min(const std::function<double(double)>& f, double a, double b, double tol = 1e-12) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  while (b - a > tol) {
    if (f(c) < f(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - g * (b - a);
    d = a + g * (b - a);
  }
  return 0.5 * (a + b);
}

// u-range cuts: the wall breakpoints plus `panels` equal pieces.
inline std::vector<double> cuts(const billiard::BoundaryProfile& p, int panels) {
  std::vector<double> c;
  for (int i = 0; i <= panels; ++i) c.push_back(p.length() * i / panels);
  for (double b : p.breakpoints()) c.push_back(b);
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end(), [](double a, double b) { return std::abs(a - b) < 1e-14; }), c.end());
  return c;
}

// Basis function psi_{m,n}(x, y) = c_m(x) s_n(v) / sqrt(J(x)) and its
// Cartesian gradient, v = (y - Q(x)) / J(x).
struct BasisValue {
  double f, fx, fy;
};

inline BasisValue basis_function(const billiard::BoundaryProfile& p, int m, int n, double x, double y) {
  const double L = p.length();
  const double Q = p.lower(x);
  const double J = p.width(x);
  const double Qx = p.lower_slope(x);
  const double Jx = p.width_slope(x);
  const double v = (y - Q) / J;
  const double norm = std::sqrt((m == 0 ? 1.0 : 2.0) / L);
  const double c = norm * std::cos(m * kPi * x / L);
  const double cx = -norm * (m * kPi / L) * std::sin(m * kPi * x / L);
  const double s = std::sqrt(2.0) * std::sin(n * kPi * v);
  const double sv = std::sqrt(2.0) * n * kPi * std::cos(n * kPi * v);
  const double vx = -(Qx + v * Jx) / J;
  const double vy = 1.0 / J;
  const double r = 1.0 / std::sqrt(J);
  const double rx = -0.5 * Jx * r / J;
  return {c * s * r, cx * s * r + c * sv * vx * r + c * s * rx, c * sv * vy * r};
}

// \int\int grad psi_l . grad psi_l' dx dy over the cavity, y on [Q(x), P(x)].
inline Eigen::MatrixXd hamiltonian(const billiard::BoundaryProfile& p, const billiard::BasisSpec& basis, int panels,
                                   int order, int y_order) {
  const auto xr = composite(order, cuts(p, panels));
  const int size = basis.size();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(size, size);
  std::vector<BasisValue> vals(size);
  for (std::size_t a = 0; a < xr.x.size(); ++a) {
    const double x = xr.x[a];
    const auto yr = gauss_legendre(y_order, p.lower(x), p.upper(x));
    for (int b = 0; b < y_order; ++b) {
      for (int n = 1; n <= basis.n_max; ++n)
        for (int m = 0; m < basis.m_max; ++m) vals[basis.index(m, n)] = basis_function(p, m, n, x, yr.x[b]);
      const double w = xr.w[a] * yr.w[b];
      for (int i = 0; i < size; ++i)
        for (int j = i; j < size; ++j) h(i, j) += w * (vals[i].fx * vals[j].fx + vals[i].fy * vals[j].fy);
    }
  }
  return h.selfadjointView<Eigen::Upper>();
}

// \int psi_l psi_l' dx dy (identity for a correct basis).
inline Eigen::MatrixXd overlap(const billiard::BoundaryProfile& p, const billiard::BasisSpec& basis, int panels,
                               int order, int y_order) {
  const auto xr = composite(order, cuts(p, panels));
  const int size = basis.size();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(size, size);
  Eigen::VectorXd vals(size);
  for (std::size_t a = 0; a < xr.x.size(); ++a) {
    const auto yr = gauss_legendre(y_order, p.lower(xr.x[a]), p.upper(xr.x[a]));
    for (int b = 0; b < y_order; ++b) {
      for (int n = 1; n <= basis.n_max; ++n)
        for (int m = 0; m < basis.m_max; ++m) vals[basis.index(m, n)] = basis_function(p, m, n, xr.x[a], yr.x[b]).f;
      s.noalias() += xr.w[a] * yr.w[b] * vals * vals.transpose();
    }
  }
  return s;
}

// Cavity eigenfunction k at (x, y) in original coordinates.
inline double eigenfunction(const billiard::CavitySolution& sol, int k, double x, double y) {
  const auto& basis = sol.basis();
  double sum = 0.0;
  for (int n = 1; n <= basis.n_max; ++n)
    for (int m = 0; m < basis.m_max; ++m)
      sum += sol.coefficients()(basis.index(m, n), k) * basis_function(sol.profile(), m, n, x, y).f;
  return sum;
}

// H_ijkl = \int psi_i(r1) psi_j(r2) V(r1 - r2) psi_k(r1) psi_l(r2) d^2r1 d^2r2
// with Gauss rules in x and in y on [Q(x), P(x)].
inline double two_body(const billiard::CavitySolution& sol, int i, int j, int k, int l,
                       const std::function<double(double, double)>& V, int order) {
  const auto& p = sol.profile();
  const auto xr = gauss_legendre(order, 0.0, p.length());
  std::vector<double> px, py, a, b;
  for (int s = 0; s < order; ++s) {
    const auto yr = gauss_legendre(order, p.lower(xr.x[s]), p.upper(xr.x[s]));
    for (int t = 0; t < order; ++t) {
      const double x = xr.x[s];
      const double y = yr.x[t];
      const double w = xr.w[s] * yr.w[t];
      px.push_back(x);
      py.push_back(y);
      a.push_back(w * eigenfunction(sol, i, x, y) * eigenfunction(sol, k, x, y));
      b.push_back(w * eigenfunction(sol, j, x, y) * eigenfunction(sol, l, x, y));
    }
  }
  double sum = 0.0;
  for (std::size_t s = 0; s < px.size(); ++s)
    for (std::size_t t = 0; t < px.size(); ++t) sum += a[s] * V(px[s] - px[t], py[s] - py[t]) * b[t];
  return sum;
}

// Barrier of height v0 on [0, 1]: integrate psi'' = (V - E) psi backwards from
// the transmitted wave exp(ik(x - 1)) with RK4 and read off the incident
// amplitude at x = 0.
inline double barrier_transmission(double E, double v0, int steps) {
  using C = std::complex<double>;
  const double k = std::sqrt(E);
  const C ik(0.0, k);
  C psi = 1.0;
  C dpsi = ik;
  const double h = -1.0 / steps;
  auto rhs = [&](C y, C dy) { return std::pair<C, C>{dy, (v0 - E) * y}; };
  for (int s = 0; s < steps; ++s) {
    const auto [k1a, k1b] = rhs(psi, dpsi);
    const auto [k2a, k2b] = rhs(psi + 0.5 * h * k1a, dpsi + 0.5 * h * k1b);
    const auto [k3a, k3b] = rhs(psi + 0.5 * h * k2a, dpsi + 0.5 * h * k2b);
    const auto [k4a, k4b] = rhs(psi + h * k3a, dpsi + h * k3b);
    psi += h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
    dpsi += h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
  }
  const C incident = 0.5 * (psi + dpsi / ik);
  return 1.0 / std::norm(incident);
}

}  // namespace oracle
