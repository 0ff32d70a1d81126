#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ringlab {

/// Argument outside the domain of a special function or operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// invert_product target below min E(m)K(m) = pi^2/4.
class InfeasibleTarget : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Coupling below the critical value pi/2: no inhomogeneous branch.
class BelowCritical : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Modified time reversal requested where 2*alpha is not an integer.
class NonIntegerImage : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Rejected configuration (grid size, time step, tolerances, ...).
class InvalidConfig : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Iterative relaxation hit its step cap before reaching the tolerance.
class NoConvergence : public std::runtime_error {
 public:
  NoConvergence(const std::string& what, std::size_t steps, double last_change)
      : std::runtime_error(what), steps_(steps), last_change_(last_change) {}

  std::size_t steps() const noexcept { return steps_; }
  double last_change() const noexcept { return last_change_; }

 private:
  std::size_t steps_;
  double last_change_;
};

/// Drift fit requested on snapshots without a discernible lump.
class NoLump : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ringlab
