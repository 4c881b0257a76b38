#include "ergodize/finite_n.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/LU>

#include "ergodize/errors.hpp"
#include "ergodize/log_math.hpp"
#include "ergodize/quadrature.hpp"
#include "ergodize/specfun.hpp"

namespace ergodize::finite_n {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_p(double p1, const char* who) {
  if (!(p1 >= 0.0 && p1 <= 1.0)) throw DomainError(std::string(who) + ": p1 must lie in [0, 1]");
}

double log_closed_jpd(const FiniteNConfig& config, const ClosedCoefficients& t, double p1) {
  const double p2 = 1.0 - p1;
  if (t.zero || p1 <= 0.0 || p2 <= 0.0) return kNegInf;
  const double s = config.magnitude_sq();
  const double log_rho = std::log(p1) - std::log(p2);
  LogSum bracket;
  bracket.add(t.log_abs[0], t.sign[0]);
  bracket.add(t.log_abs[1] + log_rho, t.sign[1]);
  bracket.add(t.log_abs[2] - log_rho, t.sign[2]);
  if (bracket.sign() < 0) throw NumericalError("jpd_finite_closed: negative density");
  return -s * (p1 / p2 + p2 / p1) - std::log(p1 * p2) + bracket.log_abs();
}

// log E[rho_N(0)], integrating exp(log jpd - ref) so that extensive-regime
// magnitudes stay in range.
double log_density_closed(const FiniteNConfig& config, const ClosedCoefficients& t) {
  if (t.zero) return kNegInf;
  const double ref = log_closed_jpd(config, t, 0.5);
  const auto f = [&](double p) {
    const double l = log_closed_jpd(config, t, p);
    return l == kNegInf ? 0.0 : std::exp(l - ref);
  };
  quad::AdaptiveOptions opts;
  opts.abs_tol = 1e-300;
  opts.rel_tol = 1e-12;
  opts.max_intervals = 4000;
  const double left = quad::gauss_kronrod(f, 0.0, 0.5, opts).value;
  const double right = quad::gauss_kronrod(f, 0.5, 1.0, opts).value;
  return ref + std::log(left + right);
}

// Radial support [lo, hi] in u = sqrt(R) outside which the polar integrand is
// below e^{-46} of its peak. Coarse scan of an upper envelope taken at theta = 0.
struct Support {
  double lo, hi;
};

Support radial_support(int n, double sigma) {
  const double hi_scan = std::sqrt(4.0 * (1.0 + sigma) + 160.0 / n) + 1.0;
  constexpr int kScan = 400;
  const double h = hi_scan / kScan;
  std::vector<double> best(kScan + 1, kNegInf);
  double global = kNegInf;
  for (int a = 1; a <= kScan; ++a) {
    const double u1 = a * h;
    for (int b = 1; b <= kScan; ++b) {
      const double u2 = b * h;
      const double rsum = u1 * u1 + u2 * u2;
      double l = -n * rsum + std::log(4.0 * u1 * u2) + 4.0 * std::log1p(rsum);
      if (n > 2) l += 2.0 * (n - 2) * std::log(u1 * u2 + sigma);
      best[a] = std::max(best[a], l);
    }
    global = std::max(global, best[a]);
  }
  int first = kScan, last = 1;
  for (int a = 1; a <= kScan; ++a) {
    if (best[a] >= global - 46.0) {
      first = std::min(first, a);
      last = std::max(last, a);
    }
  }
  if (last == kScan) throw NumericalError("radial_support: scan window too small");
  return {std::max(0.0, (first - 2) * h), (last + 2) * h};
}

double ipow(double x, int e) {
  double r = 1.0;
  while (e > 0) {
    if (e & 1) r *= x;
    x *= x;
    e >>= 1;
  }
  return r;
}

// Integrates, for each of K real integrands g_k,
//
//   \int\int dR1 dR2 \int_0^{2pi} dtheta/(2pi)
//       exp(log_const - N (R1 + R2)) |sqrt(R1 R2) + (|c|^2/N) e^{i theta}|^{2(N-2)} g_k
//
// with R = u^2, composite Gauss-Legendre in u and the periodic trapezoid in theta.
// Each g_k must be even in theta, so only [0, pi] is visited. Radial panels
// double until successive levels agree to rel_tol; theta nodes double while
// the full and every-other-node sums disagree.
template <std::size_t K, class G>
std::array<double, K> polar_integrate(int n, double s, double log_const, G&& g,
                                      const PolarQuadratureOptions& opts) {
  const double sigma = s / n;
  const Support sup = radial_support(n, sigma);
  // Panel width ~ the Laplace width 1/sqrt(2N) of the peak at u = 1.
  const int base_panels =
      std::max(4, static_cast<int>(std::ceil((sup.hi - sup.lo) * std::sqrt(2.0 * n) / 1.5)));

  int theta_nodes = opts.theta_nodes;
  if (theta_nodes < 4 || theta_nodes % 4 != 0)
    throw DomainError("polar quadrature: theta_nodes must be a positive multiple of 4");
  std::array<double, K> previous{};
  double achieved = std::numeric_limits<double>::infinity();

  for (int level = 0; level <= opts.max_refinements; ++level) {
    const int panels = base_panels << level;
    const quad::GaussLegendre rule =
        quad::composite_gauss_legendre(sup.lo, sup.hi, panels, opts.panel_order);
    const Eigen::Index nodes = rule.nodes.size();

    // Radial envelope at theta = 0, used to drop nodes that cannot contribute.
    Eigen::MatrixXd log_env(nodes, nodes);
    double env_max = -std::numeric_limits<double>::infinity();
    for (Eigen::Index a = 0; a < nodes; ++a) {
      for (Eigen::Index b = 0; b < nodes; ++b) {
        const double u1 = rule.nodes[a], u2 = rule.nodes[b];
        double l = log_const - n * (u1 * u1 + u2 * u2) +
                   std::log(rule.weights[a] * rule.weights[b] * 4.0 * u1 * u2);
        if (n > 2) l += 2.0 * (n - 2) * std::log(u1 * u2 + sigma);
        log_env(a, b) = l;
        env_max = std::max(env_max, l);
      }
    }

    std::array<double, K> full{}, half{};
    for (;;) {
      const int top = theta_nodes / 2;
      std::vector<double> cos_t(top + 1), sin_t(top + 1);
      for (int m = 0; m <= top; ++m) {
        const double th = 2.0 * std::numbers::pi * m / theta_nodes;
        cos_t[m] = std::cos(th);
        sin_t[m] = std::sin(th);
      }
      full.fill(0.0);
      half.fill(0.0);
      for (Eigen::Index a = 0; a < nodes; ++a) {
        const double r1 = rule.nodes[a] * rule.nodes[a];
        for (Eigen::Index b = 0; b < nodes; ++b) {
          if (log_env(a, b) < env_max - 60.0) continue;
          const double r2 = rule.nodes[b] * rule.nodes[b];
          const double prod = rule.nodes[a] * rule.nodes[b];
          const double scale = std::exp(log_env(a, b));
          const double ref = (prod + sigma) * (prod + sigma);
          for (int m = 0; m <= top; ++m) {
            // (|.|^2 / ref)^{N-2} <= 1
            double w = scale;
            if (n > 2) w *= ipow((r1 * r2 + 2.0 * sigma * prod * cos_t[m] + sigma * sigma) / ref, n - 2);
            if (m != 0 && m != top) w *= 2.0;
            const std::array<double, K> vals = g(r1, r2, prod, cos_t[m], sin_t[m]);
            for (std::size_t k = 0; k < K; ++k) {
              full[k] += w * vals[k];
              if (m % 2 == 0) half[k] += w * vals[k];
            }
          }
        }
      }
      double scale = 0.0, diff = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        full[k] /= theta_nodes;
        half[k] /= theta_nodes / 2;
        scale = std::max(scale, std::abs(full[k]));
        diff = std::max(diff, std::abs(full[k] - half[k]));
      }
      if (diff <= opts.rel_tol * scale || theta_nodes >= opts.max_theta_nodes) break;
      theta_nodes *= 2;
    }
    if (level > 0) {
      double scale = 0.0, diff = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        scale = std::max(scale, std::abs(full[k]));
        diff = std::max(diff, std::abs(full[k] - previous[k]));
      }
      achieved = scale > 0.0 ? diff / scale : diff;
      if (achieved <= opts.rel_tol) return full;
    }
    previous = full;
  }
  throw QuadratureError("polar quadrature: tolerance " + std::to_string(opts.rel_tol) +
                            " not reached, achieved " + std::to_string(achieved),
                        achieved);
}

}  // namespace

FiniteNConfig FiniteNConfig::fixed(int n, const Coupling& c) {
  FiniteNConfig cfg{n, c, Regime::fixed_c, 0.0};
  cfg.validate();
  return cfg;
}

FiniteNConfig FiniteNConfig::extensive(int n, double ctilde_sq) {
  if (!std::isfinite(ctilde_sq) || ctilde_sq < 0.0)
    throw DomainError("FiniteNConfig: |c~|^2 must be finite and >= 0");
  FiniteNConfig cfg{n, Coupling::from_magnitude_sq(n * ctilde_sq), Regime::extensive, ctilde_sq};
  cfg.validate();
  return cfg;
}

void FiniteNConfig::validate() const {
  if (n < 2) throw DomainError("FiniteNConfig: N must be >= 2, got " + std::to_string(n));
}

std::complex<double> u_kernel(const FiniteNConfig& config, double p1, const QPairings& q) {
  config.validate();
  if (!(p1 > 0.0 && p1 < 1.0)) throw DomainError("u_kernel: p1 must lie in (0, 1)");
  const double n = config.n;
  const double s = config.magnitude_sq();
  const double p2 = 1.0 - p1;
  const double r = p1 / p2 + p2 / p1;
  const std::complex<double> q1_q2bar = q.q2bar_q1;
  const std::complex<double> q2_q1bar = q.q1bar_q2;

  const std::complex<double> order1 =
      s * ((q.abs_q1_sq * q1_q2bar + q.abs_q2_sq * q2_q1bar) / n +
           q.abs_q1_sq * q.abs_q2_sq * r / (n - 1.0));
  const std::complex<double> order2 =
      s * s *
      (q1_q2bar * (r / (n - 1.0) - (p2 / p1) / n) + q2_q1bar * (r / (n - 1.0) - (p1 / p2) / n) +
       (q.abs_q1_sq + q.abs_q2_sq) / n);
  const double order3 = s * s * s * r / (n * (n - 1.0));
  return order1 + order2 + order3;
}

std::vector<KernelTerm> u_monomials(const FiniteNConfig& config) {
  config.validate();
  const double n = config.n;
  const double s = config.magnitude_sq();
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double a = 1.0 / (n - 1.0);
  const double b = 1.0 / n;
  // Exponents are (q1, conj q1, q2, conj q2); coefficients on {1, p1/p2, p2/p1}.
  return {
      {2, 1, 0, 1, {s * b, 0.0, 0.0}},             // q1 |q1|^2 conj(q2)
      {0, 1, 2, 1, {s * b, 0.0, 0.0}},             // q2 |q2|^2 conj(q1)
      {1, 1, 1, 1, {0.0, s * a, s * a}},           // |q1|^2 |q2|^2
      {1, 0, 0, 1, {0.0, s2 * a, s2 * (a - b)}},   // q1 conj(q2)
      {0, 1, 1, 0, {0.0, s2 * (a - b), s2 * a}},   // q2 conj(q1)
      {1, 1, 0, 0, {s2 * b, 0.0, 0.0}},            // |q1|^2
      {0, 0, 1, 1, {s2 * b, 0.0, 0.0}},            // |q2|^2
      {0, 0, 0, 0, {0.0, s3 * a * b, s3 * a * b}}, // 1
  };
}

ClosedCoefficients closed_coefficients(const FiniteNConfig& config) {
  config.validate();
  if (config.n > kMaxClosedN)
    throw DomainError("closed_coefficients: N above supported cap " + std::to_string(kMaxClosedN));
  ClosedCoefficients out;
  const double s = config.magnitude_sq();
  if (s == 0.0) {
    out.zero = true;
    out.log_abs.fill(kNegInf);
    out.sign.fill(0);
    return out;
  }
  const int m = config.n - 2;
  const double log_s = std::log(s);
  const double log_norm =
      std::log(std::numbers::pi) + log_factorial(config.n - 1) + log_factorial(config.n - 2);
  std::array<LogSum, 3> sums;
  for (const KernelTerm& term : u_monomials(config)) {
    // (q1 conj q2)^j (q2 conj q1)^k pairs with the monomial iff the powers of
    // q_i and conj(q_i) match.
    const int shift = term.q1 - term.q1bar;
    if (shift != term.q2bar - term.q2) throw NumericalError("u_monomials: unbalanced monomial");
    for (int j = 0; j <= m; ++j) {
      const int k = j + shift;
      if (k < 0 || k > m) continue;
      const double log_moment = log_binomial(m, j) + log_binomial(m, k) + (2 * m - j - k) * log_s +
                                log_factorial(term.q1 + j) + log_factorial(term.q2 + k);
      for (int basis = 0; basis < 3; ++basis) {
        const double c = term.coefficient[basis];
        if (c == 0.0) continue;
        sums[basis].add(std::log(std::abs(c)) + log_moment, c > 0.0 ? 1 : -1);
      }
    }
  }
  for (int basis = 0; basis < 3; ++basis) {
    out.log_abs[basis] = sums[basis].log_abs() - log_norm;
    out.sign[basis] = sums[basis].sign();
  }
  return out;
}

double jpd_finite_closed(const FiniteNConfig& config, const ClosedCoefficients& coeffs,
                         double p1) {
  check_p(p1, "jpd_finite_closed");
  const double l = log_closed_jpd(config, coeffs, p1);
  const double v = std::exp(l);
  if (std::isinf(v)) throw NumericalError("jpd_finite_closed: overflow");
  return v;
}

double jpd_finite_closed(const FiniteNConfig& config, double p1) {
  return jpd_finite_closed(config, closed_coefficients(config), p1);
}

double density_finite_n(const FiniteNConfig& config) {
  const ClosedCoefficients t = closed_coefficients(config);
  // c = 0: two decoupled Ginibre blocks, each with density exactly 1/pi at the
  // origin; the eigenvector mass sits on p in {0, 1}, outside the closed sum.
  if (t.zero) return 2.0 / std::numbers::pi;
  return std::exp(log_density_closed(config, t));
}

double jpd_ratio(const FiniteNConfig& config, double p1) {
  check_p(p1, "jpd_ratio");
  const ClosedCoefficients t = closed_coefficients(config);
  if (t.zero) throw DegenerateCouplingError("jpd_ratio: |c| = 0 has no density");
  const double l = log_closed_jpd(config, t, p1);
  if (l == kNegInf) return 0.0;
  return std::exp(l - log_density_closed(config, t));
}

NormalizedJpd::NormalizedJpd(const FiniteNConfig& config)
    : config_(config), coeffs_(closed_coefficients(config)) {
  if (coeffs_.zero) throw DegenerateCouplingError("NormalizedJpd: |c| = 0 has no density");
  density_ = std::exp(log_density_closed(config_, coeffs_));
}

double NormalizedJpd::operator()(double p1) const {
  return jpd_finite_closed(config_, coeffs_, p1) / density_;
}

double jpd_finite_quadrature(const FiniteNConfig& config, double p1,
                             const PolarQuadratureOptions& opts) {
  config.validate();
  check_p(p1, "jpd_finite_quadrature");
  if (config.n > kMaxQuadratureN)
    throw DomainError("jpd_finite_quadrature: N above oracle range " +
                      std::to_string(kMaxQuadratureN));
  const double s = config.magnitude_sq();
  const double p2 = 1.0 - p1;
  if (s == 0.0 || p1 <= 0.0 || p2 <= 0.0) return 0.0;
  const int n = config.n;
  const double log_const = (2.0 * n - 2.0) * std::log(static_cast<double>(n)) -
                           std::log(std::numbers::pi) - log_factorial(n - 1) -
                           log_factorial(n - 2) - s * (p1 / p2 + p2 / p1) - std::log(p1 * p2);
  const auto g = [&](double r1, double r2, double prod, double c, double sn) {
    // conj(q1) q2 = N sqrt(R1 R2) e^{-i theta}
    const std::complex<double> q1bar_q2 = n * prod * std::complex<double>(c, -sn);
    const QPairings q{n * r1, n * r2, q1bar_q2, std::conj(q1bar_q2)};
    return std::array<double, 1>{u_kernel(config, p1, q).real()};
  };
  return polar_integrate<1>(n, s, log_const, g, opts)[0];
}

AsymptoticPieces asymptotic_pieces(const FiniteNConfig& config,
                                   const PolarQuadratureOptions& opts) {
  config.validate();
  if (config.n > kMaxClosedN)
    throw DomainError("asymptotic_pieces: N above supported cap " + std::to_string(kMaxClosedN));
  const int n = config.n;
  const double nd = n;
  const double s = config.magnitude_sq();
  AsymptoticPieces out;
  out.log_prefactor = std::log(2.0) + (2.0 * nd - 2.0) * std::log(nd) - 2.0 * nd -
                      log_factorial(n - 1) - log_factorial(n - 2);
  out.prefactor = std::exp(out.log_prefactor);
  if (s == 0.0) return out;
  out.j0 = 2.0 * specfun::bessel_k(0, 2.0 * s);
  out.j1 = 2.0 * specfun::bessel_k(1, 2.0 * s);

  const double log_const = 2.0 * nd + std::log(nd / (2.0 * std::numbers::pi));
  const double s2 = s * s;
  const auto g = [&](double r1, double r2, double prod, double c, double) {
    // Real parts of U_{0,N}, U_{1,N}, U_{2,N}; imaginary parts cancel under theta -> -theta.
    const double u0 = s * prod * (r1 + r2) * c + s2 * (r1 + r2) / nd;
    const double u12 = s * nd / (nd - 1.0) * r1 * r2 +
                       (2.0 * s2 / (nd - 1.0) - s2 / nd) * prod * c +
                       s2 * s / (nd * nd * (nd - 1.0));
    return std::array<double, 3>{u0, u12, u12};
  };
  const std::array<double, 3> ij = polar_integrate<3>(n, s, log_const, g, opts);
  out.i0n = ij[0];
  out.i1n = ij[1];
  out.i2n = ij[2];
  return out;
}

double extensive_action(double r1, double r2, double theta, double ctilde_sq) {
  if (!(r1 >= 0.0 && r2 >= 0.0)) throw DomainError("extensive_action: R must be >= 0");
  const double t = ctilde_sq;
  const double arg = r1 * r2 + 2.0 * t * std::sqrt(r1 * r2) * std::cos(theta) + t * t;
  if (!(arg > 0.0)) throw DomainError("extensive_action: log of non-positive argument");
  return r1 + r2 - 2.0 * (1.0 - t) - std::log(arg);
}

LaplaceData extensive_laplace_data(double ctilde_sq) {
  if (!std::isfinite(ctilde_sq) || ctilde_sq < 0.0)
    throw DomainError("extensive_laplace_data: |c~|^2 must be finite and >= 0");
  const double t = ctilde_sq;
  LaplaceData out;
  if (t >= 1.0) {
    out.interior = false;
    out.r_min = 0.0;
    out.action_min = 2.0 * (t - 1.0 - std::log(t));
    return out;
  }
  const double rm = 1.0 - t;
  const double off = t / (2.0 * rm);
  out.r_min = rm;
  out.action_min = extensive_action(rm, rm, 0.0, t);
  out.hessian << 1.0 + off, -off, 0.0,  //
      -off, 1.0 + off, 0.0,             //
      0.0, 0.0, 2.0 * t * rm;
  out.hessian_det = out.hessian.determinant();
  return out;
}

}  // namespace ergodize::finite_n
