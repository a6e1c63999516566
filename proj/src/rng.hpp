// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>

namespace ztdyn::rng {

inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

// splitmix64 finalizer (Steele/Lea/Flood; Vigna's fixed-increment variant).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Stateless child-seed derivation.  Coupling draws are keyed by the pair
// {i,j}, experiment streams by (master seed, tag, trial, replica), so every
// result is independent of iteration order and scheduling.
constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t a) {
  return mix64((seed + kGamma) ^ mix64(a + kGamma));
}
constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return derive(derive(seed, a), b);
}
constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                               std::uint64_t c) {
  return derive(derive(seed, a, b), c);
}

// Purpose tags keeping sibling streams of one trial apart.
enum StreamTag : std::uint64_t {
  kTagCouplings = 0x636f7570ull,
  kTagInitial = 0x696e6974ull,
  kTagDynamics = 0x64796e30ull,
  kTagSearch = 0x73726368ull,
};

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += kGamma);
    return mix64(z);
  }

  // Uniform in [0,1).
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in (0,1]; safe to feed to inverse transforms with a pole at 0.
  double next_unit_open() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  // Unbiased uniform in [0, bound) via Lemire's multiply-shift with rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    std::uint64_t x = next();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < bound) {
      const std::uint64_t t = -bound % bound;
      while (lo < t) {
        x = next();
        m = static_cast<__uint128_t>(x) * bound;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Fair coin as a spin value.
  int next_sign() { return (next() & 1u) ? +1 : -1; }

 private:
  std::uint64_t state_;
};

// Pareto variate by inverse transform: P(X >= x) = (x/scale)^{-alpha} for
// x >= scale, u in (0,1].
inline double pareto_from_unit(double u, double alpha, double scale) {
  return scale * std::pow(u, -1.0 / alpha);
}

}  // namespace ztdyn::rng
