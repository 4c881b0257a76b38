#pragma once

#include <stdexcept>
#include <string>

namespace ergodize {

// Argument outside the mathematical domain of a function (non-finite x,
// negative coupling, p outside (0,1), N < 2, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// A numerical procedure failed to reach its contract: quadrature tolerance,
// eigensolver convergence, root bracketing.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class QuadratureError : public NumericalError {
public:
  QuadratureError(const std::string& what, double achieved)
      : NumericalError(what), achieved_(achieved) {}
  double achieved_tolerance() const noexcept { return achieved_; }

private:
  double achieved_;
};

// QR iteration did not converge, or an eigenpair failed its residual audit.
// Carries enough to regenerate the offending matrix.
class SolverError : public NumericalError {
public:
  SolverError(const std::string& what, unsigned long long seed, long long index)
      : NumericalError(what), seed_(seed), index_(index) {}
  unsigned long long seed() const noexcept { return seed_; }
  long long sample_index() const noexcept { return index_; }

private:
  unsigned long long seed_;
  long long index_;
};

// No eigenvalues fell in the spectral window.
class EmptyWindowError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// The |c| = 0 limit has no density (two point masses at p = 0 and p = 1).
class DegenerateCouplingError : public DomainError {
public:
  using DomainError::DomainError;
};

}  // namespace ergodize
