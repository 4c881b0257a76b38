#pragma once

// Modified Bessel functions of integer order and the subsystem identity
// threshold. Self-contained: no external special-function library.

namespace ergodize::specfun {

// Argument below which I_n uses its power series; above it the scaled
// trapezoid evaluation of the integral representation takes over.
inline constexpr double kBesselISeriesCrossover = 12.0;

// I_n(x), n >= 0, x >= 0 finite. Relative error <= 1e-12 on [0, 50].
double bessel_i(int n, double x);

// e^{-x} I_n(x); finite for all x >= 0.
double bessel_i_scaled(int n, double x);

// K_n(x), n >= 0, x > 0, from
//   K_n(x) = \int_0^\infty e^{-x cosh a} cosh(n a) da
// by trapezoid quadrature on the truncated half-line.
double bessel_k(int n, double x);

// e^{x} K_n(x).
double bessel_k_scaled(int n, double x);

// Root of I0(2s) / (I0(2s) + I1(2s)) = 2s - 1/2 on (0, 2): the coupling |c|^2
// where the limiting norm density switches from bimodal to unimodal.
double identity_threshold();

namespace detail {
// Both evaluation paths of I_n, exposed for the crossover agreement test.
double bessel_i_series(int n, double x);
double bessel_i_scaled_trapezoid(int n, double x);
}  // namespace detail

}  // namespace ergodize::specfun
