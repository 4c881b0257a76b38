#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

namespace ergodize::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  int intervals = 0;
};

struct AdaptiveOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-12;
  int max_intervals = 2000;
};

// Globally adaptive 15-point Gauss-Kronrod on [a, b]. The Kronrod nodes are
// interior, so integrable endpoint behaviour is never evaluated directly.
// Throws QuadratureError if the tolerance is not met within max_intervals.
Result gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                     const AdaptiveOptions& opts = {});

// n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};
GaussLegendre gauss_legendre(int n);

// Composite Gauss-Legendre nodes/weights on [a, b] with `panels` equal panels.
GaussLegendre composite_gauss_legendre(double a, double b, int panels, int order);

}  // namespace ergodize::quad
