#include "billiard/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>

#include <json.hpp>

#include "billiard/error.hpp"
#include "billiard/leads.hpp"
#include "billiard/oned.hpp"
#include "billiard/quadrature.hpp"
#include "billiard/scattering.hpp"
#include "billiard/spectra.hpp"

namespace billiard {

namespace {

constexpr double kPi = std::numbers::pi;

// max that keeps a NaN once one appears
void raise(double& worst, double value) {
  if (!(value <= worst)) worst = value;
}

}  // namespace

Eigen::MatrixXd assemble_hamiltonian_quadrature(const BoundaryProfile& profile, const BasisSpec& basis, int panels,
                                                int order, int v_order) {
  const double length = profile.length();
  std::vector<double> cuts;
  for (int p = 0; p <= panels; ++p) cuts.push_back(length * p / panels);
  for (double b : profile.breakpoints()) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(), [](double a, double b) { return std::abs(a - b) < 1e-14; }),
             cuts.end());
  const QuadratureRule ru = composite_gauss_legendre(order, cuts);
  const QuadratureRule rv = gauss_legendre(v_order, 0.0, 1.0);

  const int size = basis.size();
  const int mm = basis.m_max;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(size, size);
  Eigen::VectorXd c(mm), dc(mm), s(basis.n_max), ds(basis.n_max);
  Eigen::MatrixXd dx(size, static_cast<Eigen::Index>(rv.nodes.size()));
  Eigen::MatrixXd dy(size, static_cast<Eigen::Index>(rv.nodes.size()));
  for (std::size_t a = 0; a < ru.nodes.size(); ++a) {
    const double u = ru.nodes[a];
    const double j = profile.width(u);
    const double ju = profile.width_slope(u);
    const double qu = profile.lower_slope(u);
    const double root = std::sqrt(j);
    for (int m = 0; m < mm; ++m) {
      const double norm = std::sqrt((m == 0 ? 1.0 : 2.0) / length);
      const double w = m * kPi / length;
      c[m] = norm * std::cos(w * u);
      dc[m] = -norm * w * std::sin(w * u);
    }
    for (std::size_t b = 0; b < rv.nodes.size(); ++b) {
      const double v = rv.nodes[b];
      const double slope = (qu + v * ju) / j;
      for (int n = 1; n <= basis.n_max; ++n) {
        s[n - 1] = std::sqrt(2.0) * std::sin(n * kPi * v);
        ds[n - 1] = std::sqrt(2.0) * n * kPi * std::cos(n * kPi * v);
      }
      for (int n = 1; n <= basis.n_max; ++n) {
        for (int m = 0; m < mm; ++m) {
          const double psi_u = (dc[m] - 0.5 * c[m] * ju / j) * s[n - 1] / root;
          const double psi_v = c[m] * ds[n - 1] / root;
          const int l = basis.index(m, n);
          dx(l, static_cast<Eigen::Index>(b)) = psi_u - slope * psi_v;
          dy(l, static_cast<Eigen::Index>(b)) = psi_v / j;
        }
      }
    }
    Eigen::VectorXd weight(rv.nodes.size());
    for (std::size_t b = 0; b < rv.nodes.size(); ++b) weight[b] = ru.weights[a] * rv.weights[b] * j;
    h.noalias() += dx * weight.asDiagonal() * dx.transpose();
    h.noalias() += dy * weight.asDiagonal() * dy.transpose();
  }
  return h;
}

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string ValidationReport::to_json() const {
  nlohmann::json j;
  j["passed"] = passed();
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    j["checks"].push_back({{"name", c.name},
                           {"detail", c.detail},
                           {"measured", c.measured},
                           {"tolerance", c.tolerance},
                           {"passed", c.passed},
                           {"seconds", c.seconds}});
  }
  return j.dump(2);
}

namespace {

double relative_max_difference(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff();
}

CheckResult barrier_check() {
  BarrierProblem problem;
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double e = 0.1 + (20.0 - 0.1) * i / 199.0;
    try {
      raise(worst, std::abs(rmatrix_transmission(e, problem) - exact_transmission(e, problem.v0)));
    } catch (const SingularEnergy&) {
    }
  }
  return {"barrier_1d", "R-matrix vs analytic step transmission, 200 energies in [0.1, 20], m_trunc 1000", worst,
          1e-3};
}

CheckResult rectangle_eigenvalue_check() {
  const double length = 2.0;
  const BasisSpec basis{12, 12, 144};
  const auto sol = solve_cavity(make_rectangle(1.0, length, 512), basis);
  std::vector<double> exact;
  for (int m = 0; m < 12; ++m) {
    for (int n = 1; n <= 12; ++n) exact.push_back(std::pow(m * kPi / length, 2) + std::pow(n * kPi, 2));
  }
  std::sort(exact.begin(), exact.end());
  double worst = 0.0;
  for (int k = 0; k < basis.k_keep; ++k) {
    raise(worst, std::abs(sol.energies()[k] - exact[k]) / exact[k]);
  }
  return {"rectangle_eigenvalues", "12x12 basis on a 1 x 2 rectangle vs (m pi/L)^2 + (n pi)^2", worst, 1e-10};
}

CheckResult straight_guide_check(unsigned threads) {
  const BasisSpec basis{400, 6, 2400};
  const auto sol = solve_cavity(make_rectangle(1.0, 1.0, 1024), basis);
  std::vector<double> grid;
  for (int i = 0; i < 50; ++i) grid.push_back(1.05 + 4.8 * i / 49.0 + 0.0137);
  SweepOptions opt;
  opt.threads = threads;
  const auto result = sweep(sol, grid, opt);
  double worst = 0.0;
  for (const auto& p : result.points) {
    if (p.skipped) continue;
    raise(worst, std::abs(p.conductance - std::floor(p.k)));
  }
  return {"straight_guide_conductance", "unit square guide, 50 energies in k = 1..6 pi/w, |T - N_open|", worst,
          1e-3};
}

CheckResult assembly_check(const BoundaryProfile& profile, const std::string& name, bool fault) {
  const BasisSpec basis{6, 6, 36};
  AssemblyOptions opt;
  opt.inject_cross_term_fault = fault;
  const Eigen::MatrixXd fft = assemble_hamiltonian(profile, basis, opt);
  const Eigen::MatrixXd quad = assemble_hamiltonian_quadrature(profile, basis);
  return {name, "6x6 basis, FFT assembly vs direct 2D Gauss-Legendre, max |diff| / max |H|",
          relative_max_difference(fft, quad), 1e-8};
}

CheckResult unitarity_check(bool fault, unsigned threads) {
  const BasisSpec basis{40, 16, 640};
  AssemblyOptions opt;
  opt.inject_cross_term_fault = fault;
  const auto sol = solve_cavity(make_darmstadt({}, 4096), basis, opt);
  std::vector<double> grid{2.113, 2.517, 3.331, 4.207, 4.771};
  SweepOptions sopt;
  sopt.threads = threads;
  const auto result = sweep(sol, grid, sopt);
  double worst = 0.0;
  for (const auto& p : result.points) {
    raise(worst, p.unitarity_defect);
    raise(worst, p.reciprocity_defect);
  }
  return {"s_matrix_unitarity", "Darmstadt cavity, 40x16 basis, 5 energies, max of |SS^+ - I| and |S - S^T|", worst,
          1e-10};
}

CheckResult parseval_check() {
  std::vector<double> k;
  std::vector<std::complex<double>> t;
  for (int i = 0; i < 601; ++i) {
    const double kk = 6.0 * kPi + 3.0 * kPi * i / 600.0;
    k.push_back(kk);
    t.push_back(std::polar(0.3 + 0.2 * std::cos(kk), 4.78 * kk) + std::polar(0.1, 9.1 * kk));
  }
  const auto spec = length_spectrum(k, t);
  const double dk = k[1] - k[0];
  double lhs = 0.0;
  double rhs = 0.0;
  for (const auto& a : spec.amplitude) lhs += std::norm(a) * spec.spacing;
  for (const auto& a : t) rhs += 2.0 * kPi * std::norm(a) * dk;
  return {"spectrum_parseval", "sum |t(L)|^2 dL vs 2 pi sum |t(k)|^2 dk on a synthetic signal",
          std::abs(lhs - rhs) / rhs, 1e-6};
}

void timed(ValidationReport& report, const std::function<CheckResult()>& body) {
  const auto start = std::chrono::steady_clock::now();
  CheckResult r = body();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.passed = std::isfinite(r.measured) && r.measured <= r.tolerance;
  report.checks.push_back(std::move(r));
}

}  // namespace

ValidationReport run_validation(const ValidationOptions& options) {
  ValidationReport report;
  const bool fault = options.inject_cross_term_fault;
  timed(report, barrier_check);
  timed(report, rectangle_eigenvalue_check);
  timed(report, [&] { return straight_guide_check(options.threads); });
  timed(report, [&] { return assembly_check(make_darmstadt({}, 65536), "assembly_darmstadt", fault); });
  timed(report, [&] {
    const auto rough = apply_surface_disorder(make_darmstadt({}, 65536), 0.2, 100, 1);
    return assembly_check(rough, "assembly_disordered", fault);
  });
  timed(report, [&] { return unitarity_check(fault, options.threads); });
  timed(report, parseval_check);
  return report;
}

}  // namespace billiard
