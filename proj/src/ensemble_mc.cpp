#include "ergodize/ensemble_mc.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "ergodize/parallel.hpp"

namespace ergodize::mc {

Coupling EnsembleConfig::effective_coupling() const {
  if (regime == Regime::extensive) return Coupling::from_magnitude_sq(n * ctilde_sq);
  return coupling;
}

finite_n::FiniteNConfig EnsembleConfig::finite_n_config() const {
  return regime == Regime::extensive ? finite_n::FiniteNConfig::extensive(n, ctilde_sq)
                                     : finite_n::FiniteNConfig::fixed(n, coupling);
}

void EnsembleConfig::validate() const {
  if (n < 2) throw DomainError("EnsembleConfig: N must be >= 2");
  if (2 * n > kMaxMatrixSize) throw DomainError("EnsembleConfig: 2N exceeds the solver cap");
  if (samples < 1) throw DomainError("EnsembleConfig: samples must be >= 1");
  if (!(window_radius > 0.0)) throw DomainError("EnsembleConfig: window radius must be positive");
  if (window_radius > 0.25 * std::sqrt(static_cast<double>(n)) + 1e-12)
    throw DomainError("EnsembleConfig: window radius must not exceed sqrt(N)/4");
  if (!(solver_tolerance > 0.0)) throw DomainError("EnsembleConfig: solver tolerance must be positive");
  if (regime == Regime::extensive && !(ctilde_sq >= 0.0 && std::isfinite(ctilde_sq)))
    throw DomainError("EnsembleConfig: |c~|^2 must be finite and >= 0");
  if (bins < 1 || batches < 1) throw DomainError("EnsembleConfig: bins and batches must be >= 1");
}

int batch_of_sample(int sample_index, int samples, int batches) {
  const int b = std::min(batches, samples);
  return static_cast<int>(static_cast<long long>(sample_index) * b / samples);
}

std::vector<EigenRecord> sample_window(const EnsembleConfig& config, int sample_index) {
  using Scalar = std::complex<double>;
  const MatrixX<Scalar> x = sample_matrix<Scalar>(config, sample_index);
  const double r = config.window_radius;
  const Spectrum<Scalar> spec = eigendecompose_selected<Scalar>(
      x, config.solver_tolerance, [r](Scalar z) { return std::abs(z) <= r; },
      config.master_seed, sample_index);

  const int n = config.n;
  std::vector<EigenRecord> out;
  out.reserve(spec.pairs.size());
  for (const auto& pair : spec.pairs) {
    const double a = pair.vector.head(n).squaredNorm();
    const double b = pair.vector.tail(n).squaredNorm();
    if (std::abs(a + b - 1.0) > 1e-12)
      throw SolverError("sample_window: eigenvector norm split does not sum to 1",
                        config.master_seed, sample_index);
    // Rescaling by the sum keeps both inside [0, 1] exactly.
    out.push_back({pair.value, a / (a + b), b / (a + b), pair.residual, sample_index});
  }
  return out;
}

WindowResult collect_window(const EnsembleConfig& config, unsigned workers) {
  config.validate();
  std::vector<std::vector<EigenRecord>> per_sample(config.samples);
  parallel_for(static_cast<std::size_t>(config.samples), workers,
               [&](std::size_t i) { per_sample[i] = sample_window(config, static_cast<int>(i)); });

  const int batches = std::min(config.batches, config.samples);
  WindowResult res;
  std::vector<double> p1;
  std::vector<int> labels;
  Eigen::VectorXd batch_hits = Eigen::VectorXd::Zero(batches);
  Eigen::VectorXd batch_samples = Eigen::VectorXd::Zero(batches);
  for (int s = 0; s < config.samples; ++s) {
    const int b = batch_of_sample(s, config.samples, batches);
    batch_samples[b] += 1.0;
    batch_hits[b] += static_cast<double>(per_sample[s].size());
    for (const auto& rec : per_sample[s]) {
      p1.push_back(rec.p1);
      labels.push_back(b);
      res.records.push_back(rec);
    }
  }
  if (res.records.empty()) {
    std::ostringstream msg;
    msg << "no eigenvalues within |z| <= " << config.window_radius << " over " << config.samples
        << " samples; increase --window-radius or --samples";
    throw EmptyWindowError(msg.str());
  }

  res.distribution = NormDistribution::build(p1, labels, config.bins, batches);
  const double area = std::numbers::pi * config.window_radius * config.window_radius;
  res.density = static_cast<double>(res.records.size()) / (config.samples * area);
  if (batches >= 2) {
    const Eigen::VectorXd per_batch = batch_hits.cwiseQuotient(batch_samples) / area;
    const double mean = per_batch.mean();
    const double var = (per_batch.array() - mean).square().sum() / (batches - 1);
    res.density_stderr = std::sqrt(var / batches);
  } else {
    res.density_stderr = std::numeric_limits<double>::quiet_NaN();
  }
  return res;
}

HistogramComparison histogram_vs_analytic(const NormDistribution& dist,
                                          const stats::DensityCurve& curve,
                                          const std::function<double(double)>& reference_cdf) {
  if (dist.empty()) throw EmptyWindowError("histogram_vs_analytic: empty distribution");
  curve.validate();
  HistogramComparison out;
  out.ks = stats::ks_distance(dist, reference_cdf);
  out.reference = stats::resample(curve, dist.centers()).values;
  const Eigen::VectorXd emp = dist.density();
  const Eigen::VectorXd& se = dist.density_stderr();
  out.z_scores.resize(dist.bins());
  for (int b = 0; b < dist.bins(); ++b) {
    if (std::isfinite(se[b]) && se[b] > 0.0) {
      out.z_scores[b] = (emp[b] - out.reference[b]) / se[b];
      out.max_abs_z = std::max(out.max_abs_z, std::abs(out.z_scores[b]));
    } else {
      out.z_scores[b] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return out;
}

void write_records_csv(std::ostream& os, const std::vector<EigenRecord>& records) {
  os << "sample_index,re_z,im_z,p1,p2,residual\n";
  os << std::setprecision(17);
  for (const auto& r : records)
    os << r.sample_index << ',' << r.z.real() << ',' << r.z.imag() << ',' << r.p1 << ',' << r.p2
       << ',' << r.residual << '\n';
}

}  // namespace ergodize::mc
