#pragma once

#include <cmath>
#include <limits>

namespace ergodize {

inline double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

inline double log_binomial(int n, int k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

// Running sum of signed terms given as (sign, log|term|). Keeps a floating
// reference exponent so magnitudes far outside double range are fine.
class LogSum {
public:
  void add(double log_magnitude, int sign = 1) {
    if (sign == 0 || log_magnitude == -std::numeric_limits<double>::infinity()) return;
    if (sign_sum_ == 0.0) {
      ref_ = log_magnitude;
      sign_sum_ = sign;
      return;
    }
    if (log_magnitude > ref_) {
      sign_sum_ = sign_sum_ * std::exp(ref_ - log_magnitude) + sign;
      ref_ = log_magnitude;
    } else {
      sign_sum_ += sign * std::exp(log_magnitude - ref_);
    }
  }

  int sign() const noexcept { return (sign_sum_ > 0) - (sign_sum_ < 0); }
  double log_abs() const noexcept {
    if (sign_sum_ == 0.0) return -std::numeric_limits<double>::infinity();
    return ref_ + std::log(std::abs(sign_sum_));
  }
  double value() const noexcept { return sign_sum_ == 0.0 ? 0.0 : sign_sum_ * std::exp(ref_); }

private:
  double ref_ = 0.0;
  double sign_sum_ = 0.0;
};

}  // namespace ergodize
