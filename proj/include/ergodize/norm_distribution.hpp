#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace ergodize {

inline constexpr int kDefaultBins = 50;
inline constexpr int kDefaultBatches = 10;

// Binned empirical density of p1 on [0, 1], with batch-mean error bars.
// Raw values are kept so CDF comparisons need not go through the bins.
class NormDistribution {
public:
  NormDistribution() = default;

  // values[i] belongs to batch batch_of[i] in [0, batches).
  static NormDistribution build(std::span<const double> values, std::span<const int> batch_of,
                                int bins = kDefaultBins, int batches = kDefaultBatches);

  int bins() const noexcept { return static_cast<int>(counts_.size()); }
  const Eigen::VectorXd& edges() const noexcept { return edges_; }
  Eigen::VectorXd centers() const;
  double bin_width() const noexcept { return 1.0 / bins(); }
  const std::vector<std::int64_t>& counts() const noexcept { return counts_; }
  std::int64_t total_hits() const noexcept { return total_; }
  bool empty() const noexcept { return total_ == 0; }

  // counts / (total * width); integrates to 1 over [0, 1].
  Eigen::VectorXd density() const;
  // Standard error of density() from the spread of per-batch densities.
  const Eigen::VectorXd& density_stderr() const noexcept { return stderr_; }

  const std::vector<double>& values() const noexcept { return values_; }
  std::vector<double> sorted_values() const;

private:
  Eigen::VectorXd edges_;
  std::vector<std::int64_t> counts_;
  std::int64_t total_ = 0;
  Eigen::VectorXd stderr_;
  std::vector<double> values_;
};

}  // namespace ergodize
