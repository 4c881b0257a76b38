#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "ergodize/norm_distribution.hpp"

namespace ergodize::stats {

enum class CurveKind { analytic_limit, finite_n, empirical };
const char* to_string(CurveKind k) noexcept;

// A density p -> f(p) sampled on a strictly increasing grid in [0, 1].
struct DensityCurve {
  Eigen::VectorXd grid;
  Eigen::VectorXd values;
  CurveKind kind = CurveKind::analytic_limit;

  // Throws DomainError unless the grid is strictly increasing inside [0, 1],
  // sizes match and values are finite and non-negative.
  void validate() const;
  double trapezoid_integral() const;
};

// n uniform interior points k / (n + 1), k = 1..n.
Eigen::VectorXd interior_grid(int n);

DensityCurve sample_curve(const Eigen::VectorXd& grid, const std::function<double(double)>& f,
                          CurveKind kind);

// Piecewise-linear interpolation onto new_grid; zero outside the source grid.
DensityCurve resample(const DensityCurve& curve, const Eigen::VectorXd& new_grid);

// CDF of a curve at its own grid points: cumulative trapezoid, including the
// linear ramp from p = 0, normalized so the value at p = 1 is 1.
Eigen::VectorXd curve_cdf(const DensityCurve& curve);

// CDF of a density on [0, 1] tabulated by adaptive quadrature on `intervals`
// equal cells and interpolated linearly between cell edges.
class TabulatedCdf {
public:
  TabulatedCdf(const std::function<double(double)>& density, int intervals = 2000);
  double operator()(double p) const;
  // Integral of the density before normalization.
  double raw_total() const noexcept { return raw_total_; }

private:
  Eigen::VectorXd cumulative_;
  double raw_total_ = 0.0;
};

// sup |F_emp - F_ref| over the data points and the distribution's bin edges.
// Throws DomainError for empty data or a reference that is not a CDF on [0, 1].
double ks_distance(const NormDistribution& empirical,
                   const std::function<double(double)>& reference_cdf);
double ks_distance(std::span<const double> samples,
                   const std::function<double(double)>& reference_cdf,
                   std::span<const double> extra_points = {});

// L1 distance between the CDFs of two curves. b is resampled onto a's grid.
double wasserstein1(const DensityCurve& a, const DensityCurve& b);

// Two-sample KS distance between raw samples.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

// Mode structure of a binned density, after a 3-bin moving average.
struct ModeSummary {
  int argmax_bin = -1;        // global
  int left_argmax_bin = -1;   // bins entirely below 1/2
  int right_argmax_bin = -1;  // bins entirely above 1/2
  double center_level = 0.0;  // smoothed density in the bins touching 1/2
  double left_peak = 0.0, right_peak = 0.0;
};
ModeSummary mode_summary(const Eigen::VectorXd& binned_density);

// Two maxima, one on each side of 1/2, at mirror-image bins (within `slack`
// bins), each at least `contrast` times the smoothed level at the midpoint.
bool is_bimodal(const ModeSummary& m, int bins, int slack = 2, double contrast = 1.5);
// Global maximum in a bin touching p = 1/2.
bool is_unimodal_at_half(const ModeSummary& m, int bins);

}  // namespace ergodize::stats
