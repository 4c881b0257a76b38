#include "ergodize/analytic_limit.hpp"

#include <cmath>
#include <numbers>

#include "ergodize/errors.hpp"
#include "ergodize/specfun.hpp"

namespace ergodize::limit {

using specfun::bessel_i_scaled;

JpdValue jpd_limit(const Coupling& coupling, const NormPoint& point) {
  if (coupling.is_zero())
    throw DegenerateCouplingError(
        "jpd_limit: |c| = 0 has no density (limit is two point masses at p = 0, 1)");
  if (point.on_boundary()) return {0.0, true};
  const double s = coupling.magnitude_sq();
  const double r = point.ratio_sum();
  // e^{-s r} I_n(2s) = e^{-s (r - 2)} * [e^{-2s} I_n(2s)], with r >= 2.
  const double i0 = bessel_i_scaled(0, 2.0 * s);
  const double i1 = bessel_i_scaled(1, 2.0 * s);
  const double value =
      s / (point.p1 * point.p2) * std::exp(-s * (r - 2.0)) * (i1 + 0.5 * r * i0);
  return {value, false};
}

double marginal_density(const Coupling& coupling, double p) {
  return jpd_limit(coupling, NormPoint::on_simplex(p)).value;
}

double midpoint_curvature(const Coupling& coupling) {
  if (coupling.is_zero()) throw DegenerateCouplingError("midpoint_curvature: |c| = 0");
  const double k = 2.0 * coupling.magnitude_sq();
  const double i0 = bessel_i_scaled(0, k);
  const double i1 = bessel_i_scaled(1, k);
  return 0.5 - k + i0 / (i0 + i1);
}

double density_at_origin_limit() noexcept { return 2.0 / std::numbers::pi; }

double density_at_origin_extensive(double ctilde_sq) {
  if (!std::isfinite(ctilde_sq) || ctilde_sq < 0.0)
    throw DomainError("density_at_origin_extensive: |c~|^2 must be finite and >= 0");
  if (ctilde_sq >= 1.0) return 0.0;
  return 2.0 / std::numbers::pi * (1.0 - ctilde_sq);
}

}  // namespace ergodize::limit
