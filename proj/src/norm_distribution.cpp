#include "ergodize/norm_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ergodize/errors.hpp"

namespace ergodize {

namespace {

int bin_of(double p, int bins) {
  const int b = static_cast<int>(p * bins);
  return std::clamp(b, 0, bins - 1);  // p = 1 goes to the last bin
}

}  // namespace

NormDistribution NormDistribution::build(std::span<const double> values,
                                         std::span<const int> batch_of, int bins, int batches) {
  if (bins < 1) throw DomainError("NormDistribution: bins must be >= 1");
  if (batches < 1) throw DomainError("NormDistribution: batches must be >= 1");
  if (values.size() != batch_of.size())
    throw DomainError("NormDistribution: values and batch labels differ in length");

  NormDistribution d;
  d.edges_ = Eigen::VectorXd::LinSpaced(bins + 1, 0.0, 1.0);
  d.counts_.assign(bins, 0);
  d.values_.assign(values.begin(), values.end());
  Eigen::MatrixXd batch_counts = Eigen::MatrixXd::Zero(batches, bins);
  Eigen::VectorXd batch_totals = Eigen::VectorXd::Zero(batches);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double p = values[i];
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("NormDistribution: value outside [0, 1]");
    if (batch_of[i] < 0 || batch_of[i] >= batches)
      throw DomainError("NormDistribution: batch label out of range");
    const int b = bin_of(p, bins);
    ++d.counts_[b];
    batch_counts(batch_of[i], b) += 1.0;
    batch_totals[batch_of[i]] += 1.0;
  }
  d.total_ = static_cast<std::int64_t>(values.size());

  // Batch-mean error: spread of per-batch normalized densities. Batches
  // without hits carry no shape information and are left out.
  d.stderr_ = Eigen::VectorXd::Constant(bins, std::numeric_limits<double>::quiet_NaN());
  std::vector<int> used;
  for (int k = 0; k < batches; ++k)
    if (batch_totals[k] > 0) used.push_back(k);
  if (used.size() >= 2) {
    const double width = 1.0 / bins;
    const double m = static_cast<double>(used.size());
    for (int b = 0; b < bins; ++b) {
      double mean = 0.0;
      for (int k : used) mean += batch_counts(k, b) / (batch_totals[k] * width);
      mean /= m;
      double var = 0.0;
      for (int k : used) {
        const double dev = batch_counts(k, b) / (batch_totals[k] * width) - mean;
        var += dev * dev;
      }
      var /= (m - 1.0);
      d.stderr_[b] = std::sqrt(var / m);
    }
  }
  return d;
}

Eigen::VectorXd NormDistribution::centers() const {
  const int n = bins();
  Eigen::VectorXd c(n);
  for (int b = 0; b < n; ++b) c[b] = 0.5 * (edges_[b] + edges_[b + 1]);
  return c;
}

Eigen::VectorXd NormDistribution::density() const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(bins());
  if (total_ == 0) return out;
  const double scale = 1.0 / (static_cast<double>(total_) * bin_width());
  for (int b = 0; b < bins(); ++b) out[b] = static_cast<double>(counts_[b]) * scale;
  return out;
}

std::vector<double> NormDistribution::sorted_values() const {
  std::vector<double> v = values_;
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace ergodize
