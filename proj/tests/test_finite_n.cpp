#include <cmath>
#include <complex>
#include <numbers>

#include <doctest.h>

#include "ergodize/analytic_limit.hpp"
#include "ergodize/errors.hpp"
#include "ergodize/finite_n.hpp"

using namespace ergodize;
using namespace ergodize::finite_n;
using cd = std::complex<double>;

namespace {

FiniteNConfig fixed(int n, double s) { return FiniteNConfig::fixed(n, Coupling::from_magnitude_sq(s)); }

QPairings pairings(cd q1, cd q2) {
  return {std::norm(q1), std::norm(q2), std::conj(q1) * q2, std::conj(q2) * q1};
}

cd ipow(cd z, int k) {
  cd r = 1.0;
  for (int i = 0; i < k; ++i) r *= z;
  return r;
}

}  // namespace

TEST_CASE("u_kernel hand-expanded point") {
  // N = 3, |c|^2 = 1, p1 = 1/2, all pairings 1:
  // 1/3 + 1/3 + 1 + 2/3 + 2/3 + 1/3 + 1/3 + 1/3 = 4.
  const QPairings ones{1.0, 1.0, 1.0, 1.0};
  CHECK(u_kernel(fixed(3, 1.0), 0.5, ones).real() == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(u_kernel(fixed(3, 1.0), 0.5, ones).imag() == 0.0);
}

TEST_CASE("u_kernel vanishes at c = 0") {
  const auto cfg = FiniteNConfig::fixed(5, Coupling{});
  CHECK(std::abs(u_kernel(cfg, 0.3, pairings({0.4, -1.1}, {2.0, 0.3}))) == 0.0);
}

TEST_CASE("u_kernel swap symmetry") {
  const auto cfg = fixed(7, 0.8);
  const cd q1(0.3, -1.2), q2(-0.7, 0.4);
  for (double p : {0.1, 0.35, 0.5}) {
    const cd a = u_kernel(cfg, p, pairings(q1, q2));
    const cd b = u_kernel(cfg, 1.0 - p, pairings(q2, q1));
    CHECK(std::abs(a - b) < 1e-13 * std::abs(a));
  }
}

TEST_CASE("u_monomials reproduce u_kernel") {
  for (int n : {2, 3, 9})
    for (double s : {0.25, 1.0, 3.0}) {
      const auto cfg = fixed(n, s);
      const cd q1(0.8, -0.3), q2(-0.2, 1.1);
      for (double p : {0.2, 0.6}) {
        const double rho = p / (1.0 - p);
        cd sum = 0.0;
        for (const auto& t : u_monomials(cfg)) {
          const double coef = t.coefficient[0] + t.coefficient[1] * rho + t.coefficient[2] / rho;
          sum += coef * ipow(q1, t.q1) * ipow(std::conj(q1), t.q1bar) * ipow(q2, t.q2) *
                 ipow(std::conj(q2), t.q2bar);
        }
        const cd direct = u_kernel(cfg, p, pairings(q1, q2));
        CHECK(std::abs(sum - direct) < 1e-13 * std::abs(direct));
      }
    }
}

TEST_CASE("closed sum agrees with polar quadrature") {
  for (int n : {3, 6})
    for (double s : {0.25, 4.0})
      for (double p : {0.2, 0.5}) {
        const auto cfg = fixed(n, s);
        const double a = jpd_finite_closed(cfg, p);
        const double b = jpd_finite_quadrature(cfg, p);
        CHECK(std::abs(a / b - 1.0) < 1e-6);
      }
}

TEST_CASE("closed sum symmetry and positivity") {
  for (int n : {2, 3, 20, 200})
    for (double s : {0.25, 1.0, 4.0})
      for (double p = 0.02; p < 0.5; p += 0.048) {
        const auto cfg = fixed(n, s);
        const double a = jpd_finite_closed(cfg, p), b = jpd_finite_closed(cfg, 1.0 - p);
        CHECK(a >= 0.0);
        CHECK(std::abs(a - b) <= 1e-12 * a);
      }
  CHECK(jpd_finite_closed(fixed(4, 1.0), 0.0) == 0.0);
  CHECK_THROWS_AS(jpd_finite_closed(fixed(4, 1.0), 1.5), DomainError);
  CHECK_THROWS_AS(FiniteNConfig::fixed(1, Coupling::from_magnitude_sq(1.0)).validate(), DomainError);
}

TEST_CASE("zero coupling") {
  const auto cfg = FiniteNConfig::fixed(10, Coupling{});
  CHECK(jpd_finite_closed(cfg, 0.4) == 0.0);
  CHECK(density_finite_n(cfg) == doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-15));
}

TEST_CASE("density at the origin approaches 2/pi") {
  CHECK(std::abs(density_finite_n(fixed(100, 1.0)) / (2.0 / std::numbers::pi) - 1.0) < 0.03);
  double prev = 1e9;
  for (int n : {20, 50, 100}) {
    const double gap = std::abs(density_finite_n(fixed(n, 0.25)) - density_finite_n(fixed(n, 4.0)));
    CHECK(gap < prev);
    prev = gap;
  }
}

TEST_CASE("normalized jpd integrates to one") {
  const NormalizedJpd f(fixed(30, 1.0));
  double sum = 0.0;
  const int m = 4000;
  for (int k = 0; k < m; ++k) sum += f((k + 0.5) / m) / m;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("extensive regime density") {
  const double d = density_finite_n(FiniteNConfig::extensive(200, 0.25));
  CHECK(std::abs(d - limit::density_at_origin_extensive(0.25)) < 0.01 * 0.4775);
  CHECK(density_finite_n(FiniteNConfig::extensive(200, 2.25)) < 1e-6);
}

TEST_CASE("asymptotic decomposition matches the closed sum") {
  for (int n : {10, 20}) {
    const auto cfg = fixed(n, 1.0);
    const auto pieces = asymptotic_pieces(cfg);
    CHECK(std::abs(pieces.density() / density_finite_n(cfg) - 1.0) < 1e-6);
  }
  // N_N -> 1/pi by Stirling.
  CHECK(std::abs(asymptotic_pieces(fixed(400, 1.0)).prefactor * std::numbers::pi - 1.0) < 0.01);
}

TEST_CASE("extensive action: minimum and Hessian") {
  const double t = 0.5;
  // Zooming grid search.
  double r1 = 1.0, r2 = 1.0, th = 0.0, h = 0.5, ht = 1.5;
  for (int round = 0; round < 40; ++round) {
    double best = extensive_action(r1, r2, th, t), b1 = r1, b2 = r2, bt = th;
    for (int i = -5; i <= 5; ++i)
      for (int j = -5; j <= 5; ++j)
        for (int k = -5; k <= 5; ++k) {
          const double x = r1 + i * h / 5, y = r2 + j * h / 5, z = th + k * ht / 5;
          if (x <= 0 || y <= 0) continue;
          const double v = extensive_action(x, y, z, t);
          if (v < best) best = v, b1 = x, b2 = y, bt = z;
        }
    r1 = b1, r2 = b2, th = bt;
    h *= 0.6;
    ht *= 0.6;
  }
  CHECK(std::abs(r1 - 0.5) < 1e-6);
  CHECK(std::abs(r2 - 0.5) < 1e-6);
  CHECK(std::abs(th) < 1e-6);

  const LaplaceData lap = extensive_laplace_data(t);
  CHECK(lap.interior);
  CHECK(lap.r_min == doctest::Approx(0.5));
  CHECK(lap.hessian_det == doctest::Approx(2.0 * t).epsilon(1e-12));
  // Finite-difference Hessian of the action at the minimum.
  const double e = 1e-4;
  const double x0[3] = {0.5, 0.5, 0.0};
  auto f = [&](int a, double da, int b, double db) {
    double x[3] = {x0[0], x0[1], x0[2]};
    x[a] += da;
    x[b] += db;
    return extensive_action(x[0], x[1], x[2], t);
  };
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const double fd = (f(a, e, b, e) - f(a, e, b, -e) - f(a, -e, b, e) + f(a, -e, b, -e)) / (4 * e * e);
      CHECK(std::abs(fd - lap.hessian(a, b)) < 1e-5);
    }
}

TEST_CASE("extensive action beyond |c~| = 1") {
  const double t = 4.0;
  const double edge = extensive_action(1e-14, 1e-14, 0.3, t);
  CHECK(edge == doctest::Approx(2.0 * (t - 1.0 - std::log(t))).epsilon(1e-9));
  CHECK(edge > 0.0);
  const LaplaceData lap = extensive_laplace_data(t);
  CHECK_FALSE(lap.interior);
  CHECK(lap.action_min == doctest::Approx(2.0 * (t - 1.0 - std::log(t))));
  CHECK_THROWS_AS(extensive_action(0.5, 0.5, std::numbers::pi, 0.5), DomainError);
}
