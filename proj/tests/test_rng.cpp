#include <cmath>

#include <doctest.h>

#include "ergodize/rng.hpp"

using namespace ergodize;

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using A = std::array<std::uint32_t, 4>;
  CHECK(Philox4x32(0, 0).generate(0) == A{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32(~0ULL, ~0ULL).generate(~0ULL) == A{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32(0x299f31d0a4093822ULL, 0x0370734413198a2eULL).generate(0x85a308d3243f6a88ULL) ==
        A{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are deterministic and distinct") {
  Philox4x32 a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  bool differs_c = false, differs_d = false;
  for (int i = 0; i < 64; ++i) {
    const auto x = a();
    CHECK(x == b());
    differs_c |= x != c();
    differs_d |= x != d();
  }
  CHECK(differs_c);
  CHECK(differs_d);
}

TEST_CASE("uniform stays inside (0, 1)") {
  Philox4x32 g(1, 2);
  double lo = 1.0, hi = 0.0, sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = g.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  CHECK(lo > 0.0);
  CHECK(hi < 1.0);
  CHECK(std::abs(sum / n - 0.5) < 0.005);
}

TEST_CASE("complex normal moments") {
  Philox4x32 g(2024, 0);
  ComplexNormal<double> normal;
  const int n = 1000000;
  double abs2 = 0.0, re = 0.0, im = 0.0, re2 = 0.0, cross = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto [x, y] = normal(g);
    abs2 += x * x + y * y;
    re += x;
    im += y;
    re2 += x * x;
    cross += x * y;
  }
  CHECK(std::abs(abs2 / n - 1.0) < 0.005);
  CHECK(std::abs(re2 / n - 0.5) < 0.005);
  CHECK(std::abs(re / n) < 0.005);
  CHECK(std::abs(im / n) < 0.005);
  CHECK(std::abs(cross / n) < 0.005);
}
