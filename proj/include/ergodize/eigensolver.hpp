#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Core>

#include "ergodize/errors.hpp"

// Building blocks for the general complex eigenproblem on an upper Hessenberg
// matrix: eigenvalues by single-shift implicit QR restricted to the active
// block (no Schur vectors), eigenvectors by inverse iteration.
namespace ergodize::eig {

template <class Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Scalar>
inline typename Scalar::value_type abs1(const Scalar& z) {
  return std::abs(z.real()) + std::abs(z.imag());
}

// Complex Givens rotation G = [[c, s], [-conj(s), c]] with G [a; b] = [r; 0].
template <class Scalar>
struct Givens {
  typename Scalar::value_type c = 1;
  Scalar s{0};

  static Givens make(const Scalar& a, const Scalar& b) {
    using Real = typename Scalar::value_type;
    Givens g;
    const Real na = std::abs(a), nb = std::abs(b);
    if (nb == Real(0)) return g;
    if (na == Real(0)) {
      g.c = 0;
      g.s = Scalar(1);
      return g;
    }
    const Real norm = std::hypot(na, nb);
    g.c = na / norm;
    g.s = (a / na) * std::conj(b) / norm;
    return g;
  }
};

// Eigenvalues of the upper Hessenberg h (overwritten). Deflation when
// |h(k,k-1)| <= eps (|h(k-1,k-1)| + |h(k,k)|); Wilkinson shifts with
// exceptional shifts after 10 and 20 stalled sweeps. Throws NumericalError
// after 30 max(10, n) sweeps in total.
template <class Scalar>
VectorX<Scalar> hessenberg_eigenvalues(MatrixX<Scalar>& h) {
  using Real = typename Scalar::value_type;
  const int n = static_cast<int>(h.rows());
  VectorX<Scalar> w(n);
  if (n == 0) return w;
  const Real eps = std::numeric_limits<Real>::epsilon();
  const Real safe_min = std::numeric_limits<Real>::min();
  const long max_sweeps = 30L * std::max(10, n);
  long sweeps = 0;
  int stalled = 0;

  int hi = n - 1;
  while (hi >= 0) {
    int lo = 0;
    for (int k = hi; k > 0; --k) {
      Real scale = abs1(h(k - 1, k - 1)) + abs1(h(k, k));
      if (scale == Real(0)) scale = h.block(k - 1, k - 1, hi - k + 2, hi - k + 2).cwiseAbs().sum();
      if (abs1(h(k, k - 1)) <= std::max(eps * scale, safe_min)) {
        h(k, k - 1) = Scalar(0);
        lo = k;
        break;
      }
    }
    if (lo == hi) {
      w[hi] = h(hi, hi);
      --hi;
      stalled = 0;
      continue;
    }
    if (++sweeps > max_sweeps) throw NumericalError("hessenberg_eigenvalues: QR did not converge");

    Scalar mu;
    if (stalled == 10 || stalled == 20) {
      mu = h(hi, hi) + Scalar(Real(0.75) * std::abs(h(hi, hi - 1).real()));
    } else {
      const Scalar a = h(hi - 1, hi - 1), b = h(hi - 1, hi), c = h(hi, hi - 1), d = h(hi, hi);
      const Scalar t = Real(0.5) * (a - d);
      Scalar disc = std::sqrt(t * t + b * c);
      if ((std::conj(t) * disc).real() < Real(0)) disc = -disc;
      const Scalar denom = t + disc;
      mu = abs1(denom) > Real(0) ? d - b * c / denom : d;
    }
    ++stalled;

    // Bulge chase on the active block [lo, hi].
    for (int k = lo; k < hi; ++k) {
      Givens<Scalar> g = (k == lo) ? Givens<Scalar>::make(h(lo, lo) - mu, h(lo + 1, lo))
                                   : Givens<Scalar>::make(h(k, k - 1), h(k + 1, k - 1));
      if (k > lo) {
        h(k, k - 1) = g.c * h(k, k - 1) + g.s * h(k + 1, k - 1);
        h(k + 1, k - 1) = Scalar(0);
      }
      for (int j = k; j <= hi; ++j) {
        const Scalar t1 = h(k, j), t2 = h(k + 1, j);
        h(k, j) = g.c * t1 + g.s * t2;
        h(k + 1, j) = -std::conj(g.s) * t1 + g.c * t2;
      }
      const int last = std::min(k + 2, hi);
      for (int i = lo; i <= last; ++i) {
        const Scalar t1 = h(i, k), t2 = h(i, k + 1);
        h(i, k) = g.c * t1 + std::conj(g.s) * t2;
        h(i, k + 1) = -g.s * t1 + g.c * t2;
      }
    }
  }
  return w;
}

// LU with partial pivoting of (H - z I) for upper Hessenberg H. Zero pivots
// are replaced by `tiny` so the factorization always exists.
template <class Scalar>
class ShiftedHessenbergLU {
public:
  ShiftedHessenbergLU(const MatrixX<Scalar>& h, const Scalar& z, typename Scalar::value_type tiny)
      : lu_(h), swap_(h.rows(), false), mult_(h.rows()) {
    const int n = static_cast<int>(h.rows());
    lu_.diagonal().array() -= z;
    for (int k = 0; k < n - 1; ++k) {
      if (abs1(lu_(k + 1, k)) > abs1(lu_(k, k))) {
        lu_.row(k).segment(k, n - k).swap(lu_.row(k + 1).segment(k, n - k));
        swap_[k] = true;
      }
      if (abs1(lu_(k, k)) < tiny) lu_(k, k) = Scalar(tiny);
      mult_[k] = lu_(k + 1, k) / lu_(k, k);
      lu_.row(k + 1).segment(k + 1, n - k - 1) -= mult_[k] * lu_.row(k).segment(k + 1, n - k - 1);
      lu_(k + 1, k) = Scalar(0);
    }
    if (n > 0 && abs1(lu_(n - 1, n - 1)) < tiny) lu_(n - 1, n - 1) = Scalar(tiny);
  }

  VectorX<Scalar> solve(VectorX<Scalar> b) const {
    const int n = static_cast<int>(lu_.rows());
    for (int k = 0; k < n - 1; ++k) {
      if (swap_[k]) std::swap(b[k], b[k + 1]);
      b[k + 1] -= mult_[k] * b[k];
    }
    return lu_.template triangularView<Eigen::Upper>().solve(b);
  }

private:
  MatrixX<Scalar> lu_;
  std::vector<bool> swap_;
  VectorX<Scalar> mult_;
};

// Unit right eigenvector of the Hessenberg h for the (computed) eigenvalue z:
// inverse iteration from the all-ones vector until ||h y - z y|| <= target.
// Returns the achieved residual through `residual`.
template <class Scalar>
VectorX<Scalar> hessenberg_eigenvector(const MatrixX<Scalar>& h, const Scalar& z,
                                       typename Scalar::value_type target,
                                       typename Scalar::value_type& residual,
                                       int max_iterations = 4) {
  using Real = typename Scalar::value_type;
  const Real hnorm = h.norm();
  const Real tiny = std::max(std::numeric_limits<Real>::epsilon() * hnorm,
                             std::numeric_limits<Real>::min());
  const ShiftedHessenbergLU<Scalar> lu(h, z, tiny);
  VectorX<Scalar> y = VectorX<Scalar>::Ones(h.rows()).normalized();
  residual = std::numeric_limits<Real>::infinity();
  for (int it = 0; it < max_iterations; ++it) {
    y = lu.solve(y);
    const Real norm = y.norm();
    if (!(norm > Real(0)) || !std::isfinite(norm)) break;
    y /= norm;
    residual = (h * y - z * y).norm();
    if (residual <= target) break;
  }
  return y;
}

}  // namespace ergodize::eig
