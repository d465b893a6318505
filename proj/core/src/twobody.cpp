#include "billiard/twobody.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "billiard/error.hpp"
#include "billiard/io.hpp"
#include "billiard/quadrature.hpp"

namespace billiard {

void InteractionSpec::validate() const {
  if (!potential) throw InvalidInput("interaction potential is not set");
  if (order < 8) throw InvalidInput("two-body quadrature order must be >= 8");
  if (u_order != 0 && u_order < 8) throw InvalidInput("two-body u quadrature order must be 0 or >= 8");
  if (!(convergence_tolerance > 0.0)) throw InvalidInput("convergence tolerance must be positive");
}

InteractionSpec gaussian_interaction(double strength, double range, PotentialForm form) {
  if (!(range > 0.0)) throw InvalidInput("interaction range must be positive");
  InteractionSpec spec;
  const double inv = 1.0 / (range * range);
  if (form == PotentialForm::Euclidean) {
    spec.potential = [strength, inv](double dx, double dy) { return strength * std::exp(-(dx * dx + dy * dy) * inv); };
    spec.description = "gaussian(" + format_double(strength) + "," + format_double(range) + ")";
  } else {
    spec.potential = [strength, inv](double dx, double dy) {
      return 0.5 * strength * (std::exp(-dx * dx * inv) + std::exp(-dy * dy * inv));
    };
    spec.description = "gaussian_separate(" + format_double(strength) + "," + format_double(range) + ")";
  }
  return spec;
}

InteractionSpec contact_interaction(double strength, double width) {
  if (!(width > 0.0)) throw InvalidInput("contact width must be positive");
  InteractionSpec spec = gaussian_interaction(strength / (std::numbers::pi * width * width), width);
  spec.description = "contact(" + format_double(strength) + "," + format_double(width) + ")";
  return spec;
}

InteractionSpec constant_interaction(double value) {
  InteractionSpec spec;
  spec.potential = [value](double, double) { return value; };
  spec.description = "constant(" + format_double(value) + ")";
  return spec;
}

TwoBodyIntegrator::TwoBodyIntegrator(const CavitySolution& solution, std::vector<int> states,
                                     const InteractionSpec& spec)
    : states_(std::move(states)) {
  spec.validate();
  if (states_.empty()) throw InvalidInput("two-body state set is empty");
  for (int s : states_) {
    if (s < 0 || s >= solution.states()) throw InvalidInput("two-body state index out of range");
  }
  const auto& profile = solution.profile();
  const auto& basis = solution.basis();
  const double length = profile.length();
  const int qu = spec.u_order > 0 ? spec.u_order : spec.order;
  const int qv = spec.order;
  const QuadratureRule ru = gauss_legendre(qu, 0.0, length);
  const QuadratureRule rv = gauss_legendre(qv, 0.0, 1.0);

  Eigen::MatrixXd c(qu, basis.m_max);
  for (int a = 0; a < qu; ++a) {
    for (int m = 0; m < basis.m_max; ++m) {
      const double norm = std::sqrt((m == 0 ? 1.0 : 2.0) / length);
      c(a, m) = norm * std::cos(m * std::numbers::pi * ru.nodes[a] / length);
    }
  }
  Eigen::MatrixXd s(qv, basis.n_max);
  for (int b = 0; b < qv; ++b) {
    for (int n = 1; n <= basis.n_max; ++n) s(b, n - 1) = std::sqrt(2.0) * std::sin(n * std::numbers::pi * rv.nodes[b]);
  }

  // Grid point g = a * qv + b for (u_a, v_b).
  const int points = qu * qv;
  values_.resize(points, static_cast<Eigen::Index>(states_.size()));
  for (std::size_t col = 0; col < states_.size(); ++col) {
    const Eigen::Map<const Eigen::MatrixXd> b(solution.coefficients().col(states_[col]).data(), basis.m_max,
                                              basis.n_max);
    const Eigen::MatrixXd phi = c * b * s.transpose();  // q_u x q_v
    for (int a = 0; a < qu; ++a) {
      for (int bb = 0; bb < qv; ++bb) values_(a * qv + bb, static_cast<Eigen::Index>(col)) = phi(a, bb);
    }
  }

  weights_.resize(points);
  std::vector<double> x(points), y(points);
  for (int a = 0; a < qu; ++a) {
    const double u = ru.nodes[a];
    const double lower = profile.lower(u);
    const double width = profile.width(u);
    for (int bb = 0; bb < qv; ++bb) {
      const int g = a * qv + bb;
      weights_[g] = ru.weights[a] * rv.weights[bb];
      x[g] = u;
      y[g] = lower + rv.nodes[bb] * width;
    }
  }
  potential_.resize(points, points);
  for (int g = 0; g < points; ++g) {
    for (int h = 0; h <= g; ++h) {
      const double v = spec.potential(x[g] - x[h], y[g] - y[h]);
      potential_(g, h) = v;
      potential_(h, g) = v;
    }
  }
}

int TwoBodyIntegrator::slot(int state) const {
  const auto it = std::find(states_.begin(), states_.end(), state);
  if (it == states_.end()) throw InvalidInput("state " + std::to_string(state) + " was not tabulated");
  return static_cast<int>(it - states_.begin());
}

Eigen::VectorXd TwoBodyIntegrator::density(int i, int k) const {
  if (i > k) std::swap(i, k);
  return weights_.cwiseProduct(values_.col(slot(i))).cwiseProduct(values_.col(slot(k)));
}

double TwoBodyIntegrator::element(int i, int j, int k, int l) const {
  // Symmetric in the two particles so H_ijkl = H_jilk = H_klij bit for bit.
  const Eigen::VectorXd a = density(i, k);
  const Eigen::VectorXd b = density(j, l);
  return 0.5 * (a.dot(potential_ * b) + b.dot(potential_ * a));
}

double h_ijkl(const CavitySolution& solution, int i, int j, int k, int l, const InteractionSpec& spec) {
  std::vector<int> states{i, j, k, l};
  std::sort(states.begin(), states.end());
  states.erase(std::unique(states.begin(), states.end()), states.end());
  const double value = TwoBodyIntegrator(solution, states, spec).element(i, j, k, l);
  if (spec.check_convergence) {
    InteractionSpec fine = spec;
    fine.order = 2 * spec.order;
    fine.u_order = 2 * spec.u_order;
    fine.check_convergence = false;
    const double refined = TwoBodyIntegrator(solution, states, fine).element(i, j, k, l);
    const double scale = std::abs(refined);
    if (std::abs(refined - value) > spec.convergence_tolerance * std::max(scale, 1e-12)) {
      throw NumericalError("two-body quadrature not converged: order " + std::to_string(spec.order) + " gives " +
                           format_double(value) + ", order " + std::to_string(fine.order) + " gives " +
                           format_double(refined));
    }
    return refined;
  }
  return value;
}

PairSpectrum interaction_block(const CavitySolution& solution, const std::vector<int>& states,
                               const InteractionSpec& spec) {
  const TwoBodyIntegrator integrator(solution, states, spec);
  const std::size_t s = states.size();
  PairSpectrum out;
  for (int i : states) {
    for (int j : states) out.pairs.emplace_back(i, j);
  }
  // densities[a * s + b] = w phi^{states[a]} phi^{states[b]}
  std::vector<Eigen::VectorXd> densities(s * s);
  std::vector<Eigen::VectorXd> folded(s * s);
  for (std::size_t a = 0; a < s; ++a) {
    for (std::size_t b = 0; b < s; ++b) {
      densities[a * s + b] = integrator.density(states[a], states[b]);
      folded[a * s + b] = integrator.potential_matrix() * densities[a * s + b];
    }
  }
  const Eigen::Index n = static_cast<Eigen::Index>(s * s);
  out.hamiltonian.resize(n, n);
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) {
      for (std::size_t k = 0; k < s; ++k) {
        for (std::size_t l = 0; l < s; ++l) {
          out.hamiltonian(static_cast<Eigen::Index>(i * s + j), static_cast<Eigen::Index>(k * s + l)) =
              densities[i * s + k].dot(folded[j * s + l]);
        }
      }
    }
  }
  out.hamiltonian = 0.5 * (out.hamiltonian + out.hamiltonian.transpose()).eval();
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) {
      const auto p = static_cast<Eigen::Index>(i * s + j);
      out.hamiltonian(p, p) += solution.energies()[states[i]] + solution.energies()[states[j]];
    }
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(out.hamiltonian, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalError("pair Hamiltonian diagonalisation failed");
  out.energies = eig.eigenvalues();
  return out;
}

}  // namespace billiard
