#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "ergodize/coupling.hpp"
#include "ergodize/eigensolver.hpp"
#include "ergodize/errors.hpp"
#include "ergodize/finite_n.hpp"
#include "ergodize/norm_distribution.hpp"
#include "ergodize/rng.hpp"
#include "ergodize/stats_compare.hpp"

namespace ergodize::mc {

// Largest matrix the eigensolver accepts.
inline constexpr int kMaxMatrixSize = 2048;

struct EnsembleConfig {
  int n = 200;
  Coupling coupling;  // used in Regime::fixed_c
  Regime regime = Regime::fixed_c;
  double ctilde_sq = 0.0;  // used in Regime::extensive, c = sqrt(N) c~
  int samples = 100;
  double window_radius = 2.0;
  std::uint64_t master_seed = 0x5eed;
  double solver_tolerance = 1e-8;
  int bins = kDefaultBins;
  int batches = kDefaultBatches;

  // The c placed in the off-diagonal blocks.
  Coupling effective_coupling() const;
  finite_n::FiniteNConfig finite_n_config() const;
  // Throws DomainError on N < 2, samples < 1, radius outside (0, sqrt(N)/4], ...
  void validate() const;
};

struct EigenRecord {
  std::complex<double> z;
  double p1 = 0.0;
  double p2 = 0.0;
  double residual = 0.0;  // ||X v - z v||_2 / ||X||_F
  int sample_index = 0;
};

template <class Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// [[G1, c 1], [conj(c) 1, G2]] with E|G_jk|^2 = 1. Philox keyed by the master
// seed, stream = sample_index; G1 is filled column-major, then G2.
template <class Scalar = std::complex<double>>
MatrixX<Scalar> sample_matrix(const EnsembleConfig& config, int sample_index) {
  using Real = typename Scalar::value_type;
  const int n = config.n;
  MatrixX<Scalar> x = MatrixX<Scalar>::Zero(2 * n, 2 * n);
  Philox4x32 eng(config.master_seed, static_cast<std::uint64_t>(sample_index));
  ComplexNormal<Real> normal;
  for (int block = 0; block < 2; ++block)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const auto [re, im] = normal(eng);
        x(block * n + i, block * n + j) = Scalar(re, im);
      }
  const std::complex<double> c = config.effective_coupling().value();
  const Scalar cs(static_cast<Real>(c.real()), static_cast<Real>(c.imag()));
  for (int i = 0; i < n; ++i) {
    x(i, n + i) = cs;
    x(n + i, i) = std::conj(cs);
  }
  return x;
}

template <class Scalar>
struct EigenPair {
  Scalar value;
  VectorX<Scalar> vector;  // unit 2-norm
  typename Scalar::value_type residual;  // ||X v - z v|| / ||X||_F
};

template <class Scalar>
struct Spectrum {
  VectorX<Scalar> eigenvalues;           // all of them, deflation order
  std::vector<int> selected;             // indices with an eigenvector
  std::vector<EigenPair<Scalar>> pairs;  // aligned with `selected`
};

// Hessenberg reduction X = Q H Q*, eigenvalues of H by implicitly shifted QR,
// then eigenvectors by inverse iteration on H for the eigenvalues accepted by
// `select`, mapped back through Q. Every returned pair is audited:
// ||X v - z v||_2 <= tolerance ||X||_F, else SolverError.
template <class Scalar>
Spectrum<Scalar> eigendecompose_selected(const MatrixX<Scalar>& x,
                                         typename Scalar::value_type tolerance,
                                         const std::function<bool(Scalar)>& select,
                                         std::uint64_t seed = 0, long long index = -1) {
  using Real = typename Scalar::value_type;
  if (x.rows() != x.cols()) throw DomainError("eigendecompose: matrix must be square");
  if (x.rows() < 1 || x.rows() > kMaxMatrixSize)
    throw DomainError("eigendecompose: size must be in [1, 2048]");
  if (!(tolerance > 0)) throw DomainError("eigendecompose: tolerance must be positive");

  const Eigen::HessenbergDecomposition<MatrixX<Scalar>> hess(x);
  const MatrixX<Scalar> h = hess.matrixH();
  MatrixX<Scalar> work = h;
  Spectrum<Scalar> out;
  try {
    out.eigenvalues = eig::hessenberg_eigenvalues<Scalar>(work);
  } catch (const NumericalError& e) {
    throw SolverError(e.what(), seed, index);
  }

  const Real frob = x.norm();
  for (int k = 0; k < out.eigenvalues.size(); ++k) {
    const Scalar z = out.eigenvalues[k];
    if (!select(z)) continue;
    Real h_residual;
    const VectorX<Scalar> y =
        eig::hessenberg_eigenvector<Scalar>(h, z, Real(1e-3) * tolerance * frob, h_residual);
    VectorX<Scalar> v = hess.matrixQ() * y;
    v.normalize();
    const Real residual = frob > 0 ? (x * v - z * v).norm() / frob : Real(0);
    if (!(residual <= tolerance))
      throw SolverError("eigendecompose: eigenpair failed the residual audit", seed, index);
    out.selected.push_back(k);
    out.pairs.push_back({z, std::move(v), residual});
  }
  return out;
}

template <class Scalar>
std::vector<EigenPair<Scalar>> eigendecompose(const MatrixX<Scalar>& x,
                                              typename Scalar::value_type tolerance) {
  return eigendecompose_selected<Scalar>(x, tolerance, [](Scalar) { return true; }).pairs;
}

// Window eigenpairs of one sample as records. Asserts p1 + p2 = 1 within 1e-12.
std::vector<EigenRecord> sample_window(const EnsembleConfig& config, int sample_index);

struct WindowResult {
  NormDistribution distribution;
  double density = 0.0;  // hits / (samples pi r^2)
  double density_stderr = 0.0;  // batch-mean over sample batches
  std::vector<EigenRecord> records;  // ordered by sample index, then Schur order
  std::int64_t total_hits() const noexcept { return distribution.total_hits(); }
};

// Runs all samples on `workers` threads. Results do not depend on the worker
// count. Throws EmptyWindowError if no eigenvalue lands in the window.
WindowResult collect_window(const EnsembleConfig& config, unsigned workers);

// Hits per batch, batch b holding samples [b S / B, (b + 1) S / B).
int batch_of_sample(int sample_index, int samples, int batches);

struct HistogramComparison {
  double ks = 0.0;
  Eigen::VectorXd reference;  // curve at bin centers
  Eigen::VectorXd z_scores;   // (empirical - reference) / stderr, NaN where stderr is 0/NaN
  double max_abs_z = 0.0;
};
// KS against reference_cdf on raw p1 values, z-scores against `curve`.
HistogramComparison histogram_vs_analytic(const NormDistribution& dist,
                                          const stats::DensityCurve& curve,
                                          const std::function<double(double)>& reference_cdf);

// CSV: sample_index,re_z,im_z,p1,p2,residual
void write_records_csv(std::ostream& os, const std::vector<EigenRecord>& records);

}  // namespace ergodize::mc
