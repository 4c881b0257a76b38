#pragma once

#include <complex>

namespace ergodize {

// Off-diagonal coupling c of the block matrix [[G1, c 1], [conj(c) 1, G2]].
// Limiting quantities depend on |c|^2 only.
class Coupling {
public:
  Coupling() = default;
  explicit Coupling(std::complex<double> c);

  // Real positive c with the given |c|^2.
  static Coupling from_magnitude_sq(double magnitude_sq);

  std::complex<double> value() const noexcept { return c_; }
  double magnitude_sq() const noexcept { return magnitude_sq_; }
  bool is_zero() const noexcept { return magnitude_sq_ == 0.0; }

private:
  std::complex<double> c_{0.0, 0.0};
  double magnitude_sq_ = 0.0;
};

enum class Regime { fixed_c, extensive };

const char* to_string(Regime r) noexcept;

// A point (p1, p2) on the simplex p1 + p2 = 1.
struct NormPoint {
  double p1 = 0.5;
  double p2 = 0.5;

  // Validates p1 in [0, 1] and sets p2 = 1 - p1.
  static NormPoint on_simplex(double p1);
  // Validates both coordinates and |p1 + p2 - 1| <= 1e-14.
  static NormPoint checked(double p1, double p2);

  bool on_boundary() const noexcept { return p1 <= 0.0 || p2 <= 0.0; }
  // p1/p2 + p2/p1
  double ratio_sum() const noexcept { return p1 / p2 + p2 / p1; }
};

}  // namespace ergodize
