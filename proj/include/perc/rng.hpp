#pragma once

#include <cstdint>

namespace perc {

// Counter-based generator: every output is a pure function of (key,
// counter), so sites, sweeps, and trials can be generated independently,
// in any order, and from any thread. The mixer is the 64-bit finalizer
// with constants 0xBF58476D1CE4E5B9 / 0x94D049BB133111EB (shifts 30, 27,
// 31); counters are spaced by the golden-ratio increment before mixing.
// docs/formats.md restates the scheme bit-exactly.

inline constexpr std::uint64_t kRngGamma = 0x9E3779B97F4A7C15ull;
inline constexpr std::uint64_t kStreamGamma = 0xD1B54A32D192ED03ull;

constexpr std::uint64_t rng_mix(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t rng_u64(std::uint64_t key, std::uint64_t counter) {
  return rng_mix(key + kRngGamma * (counter + 1));
}

// Derives the key of a numbered substream; used to hand each trial its
// own independent counter sequence.
constexpr std::uint64_t stream_key(std::uint64_t master, std::uint64_t stream) {
  return rng_mix(master ^ (kStreamGamma * (stream + 1)));
}

// Uniform in [0,1): the top 53 bits scaled by 2^-53.
constexpr double to_unit_double(std::uint64_t x) {
  return (double)(x >> 11) * 0x1p-53;
}

// Convenience stateful wrapper over the pure functions.
struct CounterRng {
  std::uint64_t key = 0;
  std::uint64_t counter = 0;

  std::uint64_t next_u64() { return rng_u64(key, counter++); }
  double next_double() { return to_unit_double(next_u64()); }
  // Bounded draw by 128-bit multiply-shift; the bias is negligible for
  // bounds far below 2^64 and the result is platform-independent.
  std::uint64_t next_below(std::uint64_t n) {
    return (std::uint64_t)(((unsigned __int128)next_u64() * n) >> 64);
  }
};

}  // namespace perc
