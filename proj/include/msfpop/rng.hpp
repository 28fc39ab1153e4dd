#pragma once

#include <cstdint>

namespace msfpop {

// splitmix64 output function: bijective avalanche mix of a 64-bit word.
inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

// Fold keys into a stream seed; order-sensitive.
inline std::uint64_t derive_seed(std::uint64_t a) { return mix64(a + 0x9E3779B97F4A7C15ULL); }
inline std::uint64_t derive_seed(std::uint64_t a, std::uint64_t b) {
  return derive_seed(derive_seed(a) ^ (b + 0x9E3779B97F4A7C15ULL));
}
inline std::uint64_t derive_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return derive_seed(derive_seed(a, b) ^ (c + 0x9E3779B97F4A7C15ULL));
}

// Deterministic counter-based generator: draw i of stream k is a pure
// function of (k, i), so results do not depend on platform, library
// version, thread schedule, or call interleaving across streams.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}
  CounterRng(std::uint64_t k1, std::uint64_t k2) : key_(derive_seed(k1, k2)) {}
  CounterRng(std::uint64_t k1, std::uint64_t k2, std::uint64_t k3)
      : key_(derive_seed(k1, k2, k3)) {}

  std::uint64_t next_u64() { return mix64(key_ + (++ctr_) * 0x9E3779B97F4A7C15ULL); }

  // Uniform on [0,1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0,1]; safe as a log argument.
  double next_unit_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; caches the second draw of each pair.
  double next_normal();

  // Uniform integer in [0, m); rejection sampling, no modulo bias.
  int next_below(int m);

 private:
  std::uint64_t key_ = 0;
  std::uint64_t ctr_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace msfpop
