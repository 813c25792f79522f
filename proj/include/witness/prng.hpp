#pragma once

// Deterministic seeded PRNG for reproducible instance generation and
// sampling. splitmix64 (Steele, Lea, Flood 2014 public-domain constants):
// the sequence depends only on the 64-bit seed, so runs are bit-for-bit
// reproducible across platforms, unlike std:: distribution objects.

#include <cstdint>

namespace witness {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform value in [0, n). Rejection-free modulo; the bias is irrelevant
  // for test-corpus generation and keeps the stream layout simple.
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

  // Uniform value in [lo, hi] inclusive.
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  // True with probability num/den.
  bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

 private:
  std::uint64_t state_;
};

}  // namespace witness
