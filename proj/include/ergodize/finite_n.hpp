#pragma once

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Core>

#include "ergodize/coupling.hpp"

// Exact finite-N joint density of the subsystem norms at z = 0, and the mean
// eigenvalue density there, by two independent routes:
//
//   * closed sum: expand both kernels (q1 conj(q2) + |c|^2)^{N-2} binomially,
//     multiply by each monomial of U and integrate term by term with the
//     Gaussian moment identity  \int e^{-|q|^2} q^m conj(q)^k d^2q / pi = m! delta_mk;
//   * quadrature: polar coordinates q_i = sqrt(N R_i) e^{i theta_i}, the
//     integrand depends on R1, R2 and theta = theta1 - theta2 only.
namespace ergodize::finite_n {

// Largest N for the closed sum. Terms are all non-negative, so this is a
// supported-range guard rather than a precision limit.
inline constexpr int kMaxClosedN = 500;
// Largest N accepted by the 3D quadrature oracle.
inline constexpr int kMaxQuadratureN = 60;

struct FiniteNConfig {
  int n = 2;
  Coupling coupling;
  Regime regime = Regime::fixed_c;
  double ctilde_sq = 0.0;  // only meaningful for Regime::extensive

  static FiniteNConfig fixed(int n, const Coupling& c);
  // c = sqrt(N) c~, so |c|^2 = N |c~|^2.
  static FiniteNConfig extensive(int n, double ctilde_sq);

  double magnitude_sq() const noexcept { return coupling.magnitude_sq(); }
  void validate() const;
};

// Arguments of U: |q1|^2, |q2|^2, conj(q1) q2, conj(q2) q1.
struct QPairings {
  double abs_q1_sq = 0.0;
  double abs_q2_sq = 0.0;
  std::complex<double> q1bar_q2{0.0, 0.0};
  std::complex<double> q2bar_q1{0.0, 0.0};
};

// The polynomial U multiplying the Gaussian kernels in the finite-N density.
std::complex<double> u_kernel(const FiniteNConfig& config, double p1, const QPairings& q);

// One monomial q1^a conj(q1)^b q2^c conj(q2)^d of U. Its coefficient is split
// on the basis {1, p1/p2, p2/p1}.
struct KernelTerm {
  int q1 = 0, q1bar = 0, q2 = 0, q2bar = 0;
  std::array<double, 3> coefficient{};
};
std::vector<KernelTerm> u_monomials(const FiniteNConfig& config);

// E[Pi_N(0, p1, p2)] = exp(-|c|^2 r) / (p1 p2) * (T0 + T1 p1/p2 + T2 p2/p1),
// with T_j stored as log|T_j| and sign. T_j equals N_N * I_{j,N}.
struct ClosedCoefficients {
  std::array<double, 3> log_abs{};
  std::array<int, 3> sign{};
  bool zero = false;  // c = 0: U vanishes identically
};
ClosedCoefficients closed_coefficients(const FiniteNConfig& config);

// E[Pi_N(0, p1, 1 - p1)] by the closed Gaussian-moment sum. p1 in (0, 1).
double jpd_finite_closed(const FiniteNConfig& config, double p1);
// Same, precomputed coefficients.
double jpd_finite_closed(const FiniteNConfig& config, const ClosedCoefficients& coeffs,
                         double p1);

struct PolarQuadratureOptions {
  double rel_tol = 1e-9;
  int theta_nodes = 512;
  int max_theta_nodes = 8192;
  int panel_order = 16;
  int max_refinements = 4;
};

// E[Pi_N(0, p1, 1 - p1)] by 3D quadrature in (R1, R2, theta). N <= kMaxQuadratureN.
// Throws QuadratureError if rel_tol is not reached within max_refinements.
double jpd_finite_quadrature(const FiniteNConfig& config, double p1,
                             const PolarQuadratureOptions& opts = {});

// E[rho_N(0)] = \int_0^1 E[Pi_N(0, p, 1 - p)] dp, adaptive quadrature of the closed sum.
// For c = 0 the exact decoupled value 2/pi.
double density_finite_n(const FiniteNConfig& config);

// Normalized finite-N density pi_N(0, p, 1 - p) = E[Pi_N] / E[rho_N].
double jpd_ratio(const FiniteNConfig& config, double p1);

// pi_N(0, p, 1 - p) with the closed-sum coefficients and E[rho_N(0)] cached,
// for repeated evaluation on a grid.
class NormalizedJpd {
public:
  explicit NormalizedJpd(const FiniteNConfig& config);
  double operator()(double p1) const;
  double density() const noexcept { return density_; }
  const FiniteNConfig& config() const noexcept { return config_; }

private:
  FiniteNConfig config_;
  ClosedCoefficients coeffs_;
  double density_ = 0.0;
};

// Large-N decomposition of the density at the origin:
//   E[rho_N(0)] = prefactor * (I0N J0 + (I1N + I2N) J1)
struct AsymptoticPieces {
  double i0n = 0.0, i1n = 0.0, i2n = 0.0;
  double j0 = 0.0, j1 = 0.0;  // 2 K0(2|c|^2), 2 K1(2|c|^2)
  double log_prefactor = 0.0;
  double prefactor = 0.0;  // 2 N^{2N-2} e^{-2N} / ((N-1)! (N-2)!)
  double density() const { return prefactor * (i0n * j0 + (i1n + i2n) * j1); }
};
AsymptoticPieces asymptotic_pieces(const FiniteNConfig& config,
                                   const PolarQuadratureOptions& opts = {});

// Extensive-regime action
//   L = R1 + R2 - 2(1 - t) - ln(R1 R2 + 2 t sqrt(R1 R2) cos(theta) + t^2),  t = |c~|^2.
double extensive_action(double r1, double r2, double theta, double ctilde_sq);

struct LaplaceData {
  bool interior = true;  // false for |c~| >= 1: minimum on the boundary R1 = R2 = 0
  double r_min = 0.0;    // 1 - |c~|^2
  double action_min = 0.0;
  Eigen::Matrix3d hessian = Eigen::Matrix3d::Zero();  // in (R1, R2, theta)
  double hessian_det = 0.0;
};
LaplaceData extensive_laplace_data(double ctilde_sq);

}  // namespace ergodize::finite_n
