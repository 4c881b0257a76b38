#include "ergodize/stats_compare.hpp"

#include <algorithm>
#include <cmath>

#include "ergodize/errors.hpp"
#include "ergodize/quadrature.hpp"

namespace ergodize::stats {

const char* to_string(CurveKind k) noexcept {
  switch (k) {
    case CurveKind::analytic_limit:
      return "analytic_limit";
    case CurveKind::finite_n:
      return "finite_n";
    case CurveKind::empirical:
      return "empirical";
  }
  return "unknown";
}

void DensityCurve::validate() const {
  if (grid.size() < 2) throw DomainError("DensityCurve: need at least two grid points");
  if (grid.size() != values.size()) throw DomainError("DensityCurve: grid/values size mismatch");
  if (grid[0] < 0.0 || grid[grid.size() - 1] > 1.0)
    throw DomainError("DensityCurve: grid must lie in [0, 1]");
  for (Eigen::Index i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw DomainError("DensityCurve: grid not strictly increasing");
  for (Eigen::Index i = 0; i < values.size(); ++i)
    if (!std::isfinite(values[i]) || values[i] < 0.0)
      throw DomainError("DensityCurve: values must be finite and >= 0");
}

double DensityCurve::trapezoid_integral() const {
  double sum = 0.0;
  for (Eigen::Index i = 1; i < grid.size(); ++i)
    sum += 0.5 * (values[i] + values[i - 1]) * (grid[i] - grid[i - 1]);
  return sum;
}

Eigen::VectorXd interior_grid(int n) {
  if (n < 1) throw DomainError("interior_grid: n must be >= 1");
  Eigen::VectorXd g(n);
  for (int k = 0; k < n; ++k) g[k] = static_cast<double>(k + 1) / (n + 1);
  return g;
}

DensityCurve sample_curve(const Eigen::VectorXd& grid, const std::function<double(double)>& f,
                          CurveKind kind) {
  DensityCurve c{grid, Eigen::VectorXd(grid.size()), kind};
  for (Eigen::Index i = 0; i < grid.size(); ++i) c.values[i] = f(grid[i]);
  c.validate();
  return c;
}

DensityCurve resample(const DensityCurve& curve, const Eigen::VectorXd& new_grid) {
  curve.validate();
  DensityCurve out{new_grid, Eigen::VectorXd::Zero(new_grid.size()), curve.kind};
  const auto& g = curve.grid;
  for (Eigen::Index i = 0; i < new_grid.size(); ++i) {
    const double x = new_grid[i];
    if (x < g[0] || x > g[g.size() - 1]) continue;
    const auto it = std::upper_bound(g.data(), g.data() + g.size(), x);
    Eigen::Index hi = std::min<Eigen::Index>(it - g.data(), g.size() - 1);
    const Eigen::Index lo = hi - 1;
    const double t = (x - g[lo]) / (g[hi] - g[lo]);
    out.values[i] = (1.0 - t) * curve.values[lo] + t * curve.values[hi];
  }
  out.validate();
  return out;
}

Eigen::VectorXd curve_cdf(const DensityCurve& curve) {
  curve.validate();
  const auto& g = curve.grid;
  const auto& v = curve.values;
  const Eigen::Index n = g.size();
  Eigen::VectorXd cdf(n);
  // Linear ramp from 0 at p = 0 to the first value, and down to 0 at p = 1.
  double acc = 0.5 * v[0] * g[0];
  cdf[0] = acc;
  for (Eigen::Index i = 1; i < n; ++i) {
    acc += 0.5 * (v[i] + v[i - 1]) * (g[i] - g[i - 1]);
    cdf[i] = acc;
  }
  const double total = acc + 0.5 * v[n - 1] * (1.0 - g[n - 1]);
  if (!(total > 0.0)) throw DomainError("curve_cdf: curve has zero mass");
  return cdf / total;
}

TabulatedCdf::TabulatedCdf(const std::function<double(double)>& density, int intervals)
    : cumulative_(intervals + 1) {
  if (intervals < 1) throw DomainError("TabulatedCdf: intervals must be >= 1");
  quad::AdaptiveOptions opts;
  opts.abs_tol = 1e-14;
  opts.rel_tol = 1e-12;
  cumulative_[0] = 0.0;
  for (int i = 0; i < intervals; ++i) {
    const double a = static_cast<double>(i) / intervals;
    const double b = static_cast<double>(i + 1) / intervals;
    cumulative_[i + 1] = cumulative_[i] + quad::gauss_kronrod(density, a, b, opts).value;
  }
  raw_total_ = cumulative_[intervals];
  if (!(raw_total_ > 0.0)) throw DomainError("TabulatedCdf: density has zero mass");
  cumulative_ /= raw_total_;
}

double TabulatedCdf::operator()(double p) const {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  const Eigen::Index n = cumulative_.size() - 1;
  const double x = p * n;
  const Eigen::Index i = std::min<Eigen::Index>(static_cast<Eigen::Index>(x), n - 1);
  const double t = x - i;
  return (1.0 - t) * cumulative_[i] + t * cumulative_[i + 1];
}

double ks_distance(std::span<const double> samples,
                   const std::function<double(double)>& reference_cdf,
                   std::span<const double> extra_points) {
  if (samples.empty()) throw DomainError("ks_distance: empty sample");
  if (std::abs(reference_cdf(0.0)) > 1e-9 || std::abs(reference_cdf(1.0) - 1.0) > 1e-9)
    throw DomainError("ks_distance: reference must satisfy F(0) = 0 and F(1) = 1");
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());

  // Monotonicity of the reference on every point it is evaluated at.
  std::vector<double> probe = x;
  probe.insert(probe.end(), extra_points.begin(), extra_points.end());
  probe.push_back(0.0);
  probe.push_back(1.0);
  std::sort(probe.begin(), probe.end());
  double last = -1.0;
  for (double p : probe) {
    const double f = reference_cdf(p);
    if (f < last - 1e-12) throw DomainError("ks_distance: reference CDF is not monotone");
    last = f;
  }

  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = reference_cdf(x[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  for (double e : extra_points) {
    const double emp =
        static_cast<double>(std::upper_bound(x.begin(), x.end(), e) - x.begin()) / n;
    d = std::max(d, std::abs(emp - reference_cdf(e)));
  }
  return d;
}

double ks_distance(const NormDistribution& empirical,
                   const std::function<double(double)>& reference_cdf) {
  if (empirical.empty()) throw DomainError("ks_distance: empty distribution");
  const auto& e = empirical.edges();
  return ks_distance(empirical.values(), reference_cdf,
                     std::span<const double>(e.data(), static_cast<std::size_t>(e.size())));
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_two_sample: empty sample");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size()), ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double t = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= t) ++i;
    while (j < y.size() && y[j] <= t) ++j;
    d = std::max(d, std::abs(i / nx - j / ny));
  }
  return d;
}

double wasserstein1(const DensityCurve& a, const DensityCurve& b) {
  a.validate();
  b.validate();
  const DensityCurve bb = (a.grid.size() == b.grid.size() && a.grid == b.grid) ? b : resample(b, a.grid);
  if (bb.grid.size() != a.grid.size()) throw DomainError("wasserstein1: grid mismatch");
  const Eigen::VectorXd fa = curve_cdf(a);
  const Eigen::VectorXd fb = curve_cdf(bb);
  const auto& g = a.grid;
  const Eigen::Index n = g.size();
  // CDF difference is linear on the end ramps: |d| at the inner point times half the ramp.
  double sum = 0.5 * std::abs(fa[0] - fb[0]) * g[0];
  for (Eigen::Index i = 1; i < n; ++i)
    sum += 0.5 * (std::abs(fa[i] - fb[i]) + std::abs(fa[i - 1] - fb[i - 1])) * (g[i] - g[i - 1]);
  sum += 0.5 * std::abs(fa[n - 1] - fb[n - 1]) * (1.0 - g[n - 1]);
  return sum;
}

ModeSummary mode_summary(const Eigen::VectorXd& binned_density) {
  const Eigen::Index n = binned_density.size();
  if (n < 4) throw DomainError("mode_summary: need at least 4 bins");
  Eigen::VectorXd smooth(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index lo = std::max<Eigen::Index>(0, i - 1);
    const Eigen::Index hi = std::min<Eigen::Index>(n - 1, i + 1);
    smooth[i] = binned_density.segment(lo, hi - lo + 1).mean();
  }
  ModeSummary m;
  Eigen::Index idx;
  smooth.maxCoeff(&idx);
  m.argmax_bin = static_cast<int>(idx);
  // Bins entirely below / above 1/2.
  const Eigen::Index half = n / 2;
  const Eigen::Index left_end = half;                   // [0, left_end)
  const Eigen::Index right_begin = (n % 2 == 0) ? half : half + 1;
  m.left_peak = smooth.head(left_end).maxCoeff(&idx);
  m.left_argmax_bin = static_cast<int>(idx);
  m.right_peak = smooth.tail(n - right_begin).maxCoeff(&idx);
  m.right_argmax_bin = static_cast<int>(right_begin + idx);
  m.center_level = (n % 2 == 0) ? 0.5 * (smooth[half - 1] + smooth[half]) : smooth[half];
  return m;
}

bool is_bimodal(const ModeSummary& m, int bins, int slack, double contrast) {
  const int mirror = bins - 1 - m.left_argmax_bin;
  const bool symmetric = std::abs(mirror - m.right_argmax_bin) <= slack;
  return symmetric && m.left_peak >= contrast * m.center_level &&
         m.right_peak >= contrast * m.center_level;
}

bool is_unimodal_at_half(const ModeSummary& m, int bins) {
  // Bins touching p = 1/2: the two around the edge (even count) or the center one.
  if (bins % 2 == 0) return m.argmax_bin == bins / 2 - 1 || m.argmax_bin == bins / 2;
  return m.argmax_bin == bins / 2;
}

}  // namespace ergodize::stats
