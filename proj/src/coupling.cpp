#include "ergodize/coupling.hpp"

#include <cmath>

#include "ergodize/errors.hpp"

namespace ergodize {

Coupling::Coupling(std::complex<double> c) : c_(c), magnitude_sq_(std::norm(c)) {
  if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
    throw DomainError("Coupling: non-finite value");
}

Coupling Coupling::from_magnitude_sq(double magnitude_sq) {
  if (!std::isfinite(magnitude_sq) || magnitude_sq < 0.0)
    throw DomainError("Coupling: |c|^2 must be finite and >= 0");
  Coupling out{std::complex<double>(std::sqrt(magnitude_sq), 0.0)};
  out.magnitude_sq_ = magnitude_sq;  // exact, not sqrt(.)^2
  return out;
}

const char* to_string(Regime r) noexcept {
  switch (r) {
    case Regime::fixed_c:
      return "fixed_c";
    case Regime::extensive:
      return "extensive";
  }
  return "unknown";
}

NormPoint NormPoint::on_simplex(double p1) {
  if (!(p1 >= 0.0 && p1 <= 1.0)) throw DomainError("NormPoint: p1 must lie in [0, 1]");
  return {p1, 1.0 - p1};
}

NormPoint NormPoint::checked(double p1, double p2) {
  if (!(p1 >= 0.0 && p1 <= 1.0 && p2 >= 0.0 && p2 <= 1.0))
    throw DomainError("NormPoint: coordinates must lie in [0, 1]");
  if (std::abs(p1 + p2 - 1.0) > 1e-14) throw DomainError("NormPoint: p1 + p2 != 1");
  return {p1, p2};
}

}  // namespace ergodize
