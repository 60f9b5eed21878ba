#pragma once

/**
 * Counter-based random number generator.
 *
 * Every draw is a pure function of (seed, stream, counter), so random data is
 * reproducible independent of evaluation order and thread count. The mixing
 * function is the SplitMix64 finalizer; streams separate independent uses of
 * the same seed (one stream per experiment purpose).
 */

#include <cmath>
#include <cstdint>

#include "core/common.hpp"

namespace cylstokes {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : base_(splitmix64(seed ^ splitmix64(stream * 0x9E3779B97F4A7C15ull + 1))) {}

  /// Raw 64-bit word for counter value i.
  std::uint64_t word(std::uint64_t i) const {
    return splitmix64(base_ ^ (i * 0xD1B54A32D192ED03ull + 0x8BB84B93962EACC9ull));
  }

  /// Uniform in [0, 1), 53-bit resolution.
  Real uniform(std::uint64_t i) const {
    return static_cast<Real>(word(i) >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller on counter slots (2i, 2i+1).
  Real normal(std::uint64_t i) const {
    const Real u1 = uniform(2 * i);
    const Real u2 = uniform(2 * i + 1);
    const Real rho = std::sqrt(-2.0 * std::log(1.0 - u1));
    return rho * std::cos(2.0 * kPi * u2);
  }

  /// Complex with independent standard normal real and imaginary parts.
  Complex cnormal(std::uint64_t i) const {
    return {normal(2 * i), normal(2 * i + 1)};
  }

 private:
  std::uint64_t base_;
};

}  // namespace cylstokes
