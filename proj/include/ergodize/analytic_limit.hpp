#pragma once

#include "ergodize/coupling.hpp"

// Closed-form N -> infinity quantities at the spectral origin, fixed |c|.
namespace ergodize::limit {

struct JpdValue {
  double value = 0.0;
  bool boundary = false;  // p1 or p2 == 0; value is the continuous extension 0
};

// Limiting joint density of (p1, p2) w.r.t. delta(p1 + p2 - 1) dp1 dp2:
//
//   |c|^2 / (p1 p2) exp(-|c|^2 (p1/p2 + p2/p1))
//       * [I1(2|c|^2) + (p1/p2 + p2/p1) I0(2|c|^2) / 2]
//
// Throws DegenerateCouplingError for c = 0.
JpdValue jpd_limit(const Coupling& coupling, const NormPoint& point);

// Marginal density P(p) = jpd_limit at (p, 1 - p). Zero at p in {0, 1}.
double marginal_density(const Coupling& coupling, double p);

// 1/2 - k + I0(k) / (I0(k) + I1(k)), k = 2|c|^2: the x^2 coefficient of
// P(1/2 + x) relative to P(1/2), up to a factor 4. Positive means p = 1/2 is
// a local minimum (two symmetric maxima).
double midpoint_curvature(const Coupling& coupling);

// Mean eigenvalue density at the origin, 2/pi, for any fixed |c|.
double density_at_origin_limit() noexcept;

// Extensive coupling c = sqrt(N) c~: (2/pi)(1 - |c~|^2) for |c~|^2 < 1, else 0.
double density_at_origin_extensive(double ctilde_sq);

}  // namespace ergodize::limit
