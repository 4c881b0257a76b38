#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace ergodize {

// Philox4x32-10 (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3").
// The key is the master seed, the high counter words the stream (sample index),
// the low words the position within the stream. Any (seed, stream) pair gives
// an independent sequence with no shared state.
class Philox4x32 {
public:
  using result_type = std::uint32_t;

  Philox4x32(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    if (index_ == 4) {
      block_ = generate(position_++);
      index_ = 0;
    }
    return block_[index_++];
  }

  // Uniform double in (0, 1) with 53 random bits.
  double uniform() noexcept {
    const std::uint64_t hi = (*this)() >> 5;  // 27 bits
    const std::uint64_t lo = (*this)() >> 6;  // 26 bits
    return (static_cast<double>((hi << 26) | lo) + 0.5) * 0x1.0p-53;
  }

  std::array<std::uint32_t, 4> generate(std::uint64_t position) const noexcept {
    std::array<std::uint32_t, 4> ctr{static_cast<std::uint32_t>(position),
                                     static_cast<std::uint32_t>(position >> 32),
                                     static_cast<std::uint32_t>(stream_),
                                     static_cast<std::uint32_t>(stream_ >> 32)};
    std::array<std::uint32_t, 2> key = key_;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }

private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t position_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int index_ = 4;
};

// Standard complex normal N_C(0, 1): real and imaginary parts iid N(0, 1/2),
// E|z|^2 = 1. Box-Muller on the generator's own uniforms, so the stream is
// identical across standard libraries.
template <class Real = double>
struct ComplexNormal {
  template <class Engine>
  std::array<Real, 2> operator()(Engine& eng) const {
    const double u1 = eng.uniform();
    const double u2 = eng.uniform();
    const double radius = std::sqrt(-std::log(u1));  // sqrt(-2 ln u * 1/2)
    const double angle = 2.0 * std::numbers::pi * u2;
    return {static_cast<Real>(radius * std::cos(angle)), static_cast<Real>(radius * std::sin(angle))};
  }
};

}  // namespace ergodize
