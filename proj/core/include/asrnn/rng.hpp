#pragma once

#include <cmath>
#include <cstdint>

namespace asrnn {

// Counter-based deterministic random stream. Each draw is a pure function
// of (seed, counter), so any draw can be reproduced from the pair alone and
// disjoint streams never interact. The mixer is SplitMix64, which is
// integer-only and therefore identical on every platform.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t counter = 0)
      : seed_(seed), counter_(counter) {}

  std::uint64_t next_u64() {
    std::uint64_t x = seed_ + (++counter_) * 0x9E3779B97F4A7C15ULL;
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
  }

  // Uniform on the open interval (0, 1); both endpoints unreachable.
  double uniform_open01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform on [a, b).
  double uniform(double a, double b) {
    double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    return a + (b - a) * u;
  }

  // Uniform integer in [0, n). Lemire's multiply-shift; bias is below
  // 2^-64 for the small n used here.
  std::uint64_t uniform_int(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Standard Gumbel(0,1) via inverse CDF of a (0,1)-open uniform draw.
  double gumbel() { return -std::log(-std::log(uniform_open01())); }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

// Stable seed derivation for independent substreams (shuffling, noise,
// per-example generation) hanging off one master seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t x = seed ^ (tag * 0xD1B54A32D192ED03ULL + 0x9E3779B97F4A7C15ULL);
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

}  // namespace asrnn
