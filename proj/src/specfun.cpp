#include "ergodize/specfun.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ergodize/errors.hpp"

namespace ergodize::specfun {

namespace {

void check_order(int n) {
  if (n < 0) throw DomainError("bessel: negative order " + std::to_string(n));
}

void check_finite_nonneg(double x, const char* who) {
  if (!std::isfinite(x) || x < 0.0)
    throw DomainError(std::string(who) + ": argument must be finite and >= 0");
}

// Trapezoid nodes on the full period. Aliasing error is of size
// I_{M-n}(x) / I_n(x), negligible once M^2 / (2x) exceeds ~40.
int periodic_nodes(double x) {
  return 32 + static_cast<int>(std::ceil(std::sqrt(80.0 * x)));
}

constexpr double kKStep = 1.0 / 16.0;
constexpr double kKTailLog = 42.0;  // e^{-42} < 1e-18

}  // namespace

namespace detail {

double bessel_i_series(int n, double x) {
  check_order(n);
  const double half = 0.5 * x;
  double term = 1.0;
  for (int k = 1; k <= n; ++k) term *= half / k;
  if (term == 0.0) return 0.0;
  const double q = half * half;
  double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * (k + n));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

double bessel_i_scaled_trapezoid(int n, double x) {
  check_order(n);
  const int m = periodic_nodes(x);
  const double step = 2.0 * std::numbers::pi / m;
  double sum = 0.0;
  for (int j = 0; j < m; ++j) {
    const double theta = j * step;
    sum += std::exp(x * (std::cos(theta) - 1.0)) * std::cos(n * theta);
  }
  return sum / m;
}

}  // namespace detail

double bessel_i(int n, double x) {
  check_order(n);
  check_finite_nonneg(x, "bessel_i");
  if (x <= kBesselISeriesCrossover) return detail::bessel_i_series(n, x);
  return std::exp(x) * detail::bessel_i_scaled_trapezoid(n, x);
}

double bessel_i_scaled(int n, double x) {
  check_order(n);
  check_finite_nonneg(x, "bessel_i_scaled");
  if (x <= kBesselISeriesCrossover) return std::exp(-x) * detail::bessel_i_series(n, x);
  return detail::bessel_i_scaled_trapezoid(n, x);
}

double bessel_k_scaled(int n, double x) {
  check_order(n);
  if (!std::isfinite(x) || x <= 0.0)
    throw DomainError("bessel_k: argument must be finite and > 0");
  // Integrand is even in a, so the half-weighted trapezoid at a = 0 is the
  // infinite-line rule; convergence is geometric in 1/h.
  double sum = 0.5;
  for (int j = 1;; ++j) {
    const double a = j * kKStep;
    const double log_f = -x * (std::cosh(a) - 1.0);
    const double f = std::exp(log_f) * std::cosh(n * a);
    sum += f;
    if (a > 1.0 && -log_f - n * a > kKTailLog) break;
  }
  return kKStep * sum;
}

double bessel_k(int n, double x) { return std::exp(-x) * bessel_k_scaled(n, x); }

double identity_threshold() {
  // Curvature coefficient at the midpoint; zero at the threshold.
  const auto g = [](double s) {
    const double i0 = bessel_i_scaled(0, 2.0 * s);
    const double i1 = bessel_i_scaled(1, 2.0 * s);
    return 0.5 - 2.0 * s + i0 / (i0 + i1);
  };
  double lo = 1e-6, hi = 2.0;
  // Both sides are monotone on the bracket; verify before trusting a single root.
  double prev = g(lo);
  for (int k = 1; k <= 200; ++k) {
    const double s = lo + (hi - lo) * k / 200.0;
    const double v = g(s);
    if (!(v < prev)) throw NumericalError("identity_threshold: curvature not monotone on bracket");
    prev = v;
  }
  double glo = g(lo);
  const double ghi = g(hi);
  if (!(glo > 0.0 && ghi < 0.0))
    throw NumericalError("identity_threshold: bracket does not straddle a sign change");
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace ergodize::specfun
