#include <cmath>
#include <numbers>

#include <doctest.h>

#include "ergodize/errors.hpp"
#include "ergodize/quadrature.hpp"
#include "ergodize/specfun.hpp"

using namespace ergodize;
using specfun::bessel_i;
using specfun::bessel_k;
using specfun::bessel_k_scaled;

namespace {

// I_n(x) = (1/pi) \int_0^pi e^{x cos t} cos(n t) dt, adaptive Gauss-Kronrod.
double i_oracle(int n, double x) {
  quad::AdaptiveOptions o;
  o.abs_tol = 1e-300;
  o.rel_tol = 1e-13;
  const auto r = quad::gauss_kronrod([&](double t) { return std::exp(x * std::cos(t)) * std::cos(n * t); },
                                     0.0, std::numbers::pi, o);
  return r.value / std::numbers::pi;
}

// K_n(x) = \int_0^A e^{-x cosh a} cosh(n a) da with the tail below 1e-30.
double k_oracle(int n, double x) {
  const double a_max = std::acosh(1.0 + 80.0 / x) + 1.0;
  quad::AdaptiveOptions o;
  o.abs_tol = 1e-300;
  o.rel_tol = 1e-13;
  return quad::gauss_kronrod([&](double a) { return std::exp(-x * std::cosh(a)) * std::cosh(n * a); },
                             0.0, a_max, o)
      .value;
}

}  // namespace

TEST_CASE("bessel_i special values") {
  CHECK(bessel_i(0, 0.0) == 1.0);
  CHECK(bessel_i(1, 0.0) == 0.0);
  CHECK(bessel_i(0, 2.0) == doctest::Approx(2.2795853).epsilon(1e-7));
  CHECK(std::abs(bessel_i(0, 2.0) / i_oracle(0, 2.0) - 1.0) < 1e-12);
}

TEST_CASE("bessel_i against the integral oracle on [0, 50]") {
  for (int n : {0, 1})
    for (double x : {0.01, 0.5, 1.0, 3.0, 7.5, 11.9, 12.0, 12.1, 20.0, 35.0, 50.0})
      CHECK(std::abs(bessel_i(n, x) / i_oracle(n, x) - 1.0) < 1e-12);
}

TEST_CASE("bessel_i agrees with libstdc++") {
  for (int n : {0, 1})
    for (double x = 0.05; x <= 50.0; x *= 1.37)
      CHECK(std::abs(bessel_i(n, x) / std::cyl_bessel_i(double(n), x) - 1.0) < 1e-12);
}

TEST_CASE("bessel_i branches agree across the crossover") {
  for (int n : {0, 1})
    for (double x : {10.0, 11.0, 11.5, 12.0, 12.5, 13.0, 14.0}) {
      const double series = specfun::detail::bessel_i_series(n, x);
      const double trap = specfun::detail::bessel_i_scaled_trapezoid(n, x) * std::exp(x);
      CHECK(std::abs(series / trap - 1.0) < 1e-10);
    }
}

TEST_CASE("bessel_k values") {
  CHECK(bessel_k(0, 2.0) == doctest::Approx(0.1138938).epsilon(1e-6));
  for (int n : {0, 1})
    for (double x : {1e-3, 0.01, 0.3, 1.0, 2.0, 5.0, 17.0, 50.0}) {
      CHECK(std::abs(bessel_k(n, x) / k_oracle(n, x) - 1.0) < 1e-10);
      CHECK(std::abs(bessel_k(n, x) / std::cyl_bessel_k(double(n), x) - 1.0) < 1e-10);
    }
}

TEST_CASE("bessel_k large-x asymptote") {
  double prev = 0.0;
  for (double x : {10.0, 20.0, 40.0, 50.0}) {
    const double ratio = bessel_k_scaled(0, x) * std::sqrt(2.0 * x / std::numbers::pi);
    CHECK(std::abs(ratio - 1.0) < std::abs(prev - 1.0));
    CHECK(std::abs(ratio - 1.0) < 1.0 / (7.0 * x));
    prev = ratio;
  }
}

TEST_CASE("Wronskian") {
  CHECK(bessel_i(1, 2.0) * bessel_k(0, 2.0) + bessel_i(0, 2.0) * bessel_k(1, 2.0) ==
        doctest::Approx(0.5).epsilon(1e-12));
  for (int k = 0; k < 50; ++k) {
    const double x = 0.1 * std::pow(400.0, k / 49.0);
    const double w = bessel_i(1, x) * bessel_k(0, x) + bessel_i(0, x) * bessel_k(1, x);
    CHECK(std::abs(w - 1.0 / x) <= 1e-9);
  }
}

TEST_CASE("monotonicity and ordering") {
  double i0 = 1.0, i1 = 0.0, k0 = 1e300, k1 = 1e300;
  for (double x = 0.01; x < 50.0; x *= 1.1) {
    CHECK(bessel_i(0, x) > i0);
    CHECK(bessel_i(1, x) > i1);
    CHECK(bessel_k(0, x) < k0);
    CHECK(bessel_k(1, x) < k1);
    CHECK(bessel_i(0, x) > bessel_i(1, x));
    i0 = bessel_i(0, x), i1 = bessel_i(1, x), k0 = bessel_k(0, x), k1 = bessel_k(1, x);
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(bessel_i(0, -1.0), DomainError);
  CHECK_THROWS_AS(bessel_i(0, NAN), DomainError);
  CHECK_THROWS_AS(bessel_k(0, 0.0), DomainError);
  CHECK_THROWS_AS(bessel_k(1, -2.0), DomainError);
  CHECK_THROWS_AS(bessel_i(-1, 1.0), DomainError);
}

TEST_CASE("identity threshold") {
  const double th = specfun::identity_threshold();
  CHECK(th == doctest::Approx(0.583).epsilon(1e-3 / 0.583));
  CHECK(std::abs(th - 0.5828789968694) < 1e-8);
  auto g = [](double s) {
    const double i0 = bessel_i(0, 2 * s), i1 = bessel_i(1, 2 * s);
    return i0 / (i0 + i1) - (2 * s - 0.5);
  };
  CHECK(g(0.1) > 0.0);
  CHECK(g(1.0) < 0.0);
  int changes = 0;
  for (int k = 1; k < 2000; ++k)
    if ((g(k * 1e-3) > 0) != (g((k + 1) * 1e-3) > 0)) ++changes;
  CHECK(changes == 1);
}
