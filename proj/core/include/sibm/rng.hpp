#pragma once

#include <cmath>
#include <cstdint>

#include "sibm/stats.hpp"

namespace sibm::rng {

// SplitMix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// Stream identifiers absorbed into keys so draws for different purposes never
// alias even when their counters coincide.
enum Stream : std::uint64_t {
  kPathStream = 1,
  kFieldStream = 2,
  kCommonFactorStream = 3,
  kExitUniformStream = 4,
  kReplicateStream = 5,
  kLatticeStream = 6,
  kRunStream = 7,
};

// A counter-based key. Forking absorbs one word; for a fixed prefix the map
// word -> state is injective, so distinct counters give distinct streams.
// Draws are pure functions of the key: generation order and threading cannot
// change the sample.
struct Key {
  std::uint64_t state;

  explicit constexpr Key(std::uint64_t seed) noexcept : state(mix64(seed + kGolden)) {}

  constexpr Key fork(std::uint64_t word) const noexcept {
    Key k = *this;
    k.state = mix64(k.state + kGolden + word);
    return k;
  }
};

// Uniform on (0,1): 53 mantissa bits, offset half a grid step so that the
// endpoints are unreachable and the inverse normal CDF stays finite.
inline double uniform(Key k) noexcept {
  return (static_cast<double>(k.state >> 11) + 0.5) * 0x1.0p-53;
}

inline double normal(Key k) { return stats::inverse_normal_cdf(uniform(k)); }

// Poisson by CDF inversion. Means above 16 are split into chunks so the
// sequential search stays short; each chunk consumes one keyed uniform.
inline std::int64_t poisson(Key k, double mean) {
  if (mean < 0) return 0;
  const int chunks = mean > 16.0 ? static_cast<int>(std::ceil(mean / 16.0)) : 1;
  const double m = mean / chunks;
  std::int64_t total = 0;
  for (int c = 0; c < chunks; ++c) {
    const double u = uniform(k.fork(static_cast<std::uint64_t>(c)));
    double p = std::exp(-m);
    double cdf = p;
    std::int64_t x = 0;
    while (u > cdf && x < 4000) {
      ++x;
      p *= m / static_cast<double>(x);
      cdf += p;
    }
    total += x;
  }
  return total;
}

}  // namespace sibm::rng
