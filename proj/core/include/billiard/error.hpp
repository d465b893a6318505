#pragma once

#include <stdexcept>
#include <string>

namespace billiard {

/// Violated precondition on user-supplied data (geometry, basis, config).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Energy sits on a channel threshold or an R-matrix pole. Sweeps catch
/// this and skip the point; direct callers should shift the energy.
class SingularEnergy : public std::runtime_error {
 public:
  enum class Reason { Threshold, Pole, IllConditioned };

  SingularEnergy(Reason reason, double energy, const std::string& what)
      : std::runtime_error(what), reason_(reason), energy_(energy) {}

  Reason reason() const noexcept { return reason_; }
  double energy() const noexcept { return energy_; }

 private:
  Reason reason_;
  double energy_;
};

const char* to_string(SingularEnergy::Reason reason) noexcept;

/// Numerical failure: eigensolver, quadrature convergence, I/O corruption.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace billiard
