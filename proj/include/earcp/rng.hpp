#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace earcp {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// Seed for the random stream owned by (seed, a, b), e.g. (run seed, step,
/// expert). Each coordinate is folded in with the SplitMix64 finalizer:
///   k = mix64(seed); k = mix64(k ^ (a + G)); k = mix64(k ^ (b + 2G))
/// with G the golden gamma. Bit-exact and language independent.
constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t k = mix64(seed);
  k = mix64(k ^ (a + kGoldenGamma));
  return mix64(k ^ (b + 2 * kGoldenGamma));
}

/// High 64 bits of the 128-bit product a * b.
constexpr std::uint64_t mul_high(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t a_lo = a & 0xFFFFFFFFULL, a_hi = a >> 32;
  const std::uint64_t b_lo = b & 0xFFFFFFFFULL, b_hi = b >> 32;
  const std::uint64_t lo_lo = a_lo * b_lo;
  const std::uint64_t hi_lo = a_hi * b_lo;
  const std::uint64_t lo_hi = a_lo * b_hi;
  const std::uint64_t cross = (lo_lo >> 32) + (hi_lo & 0xFFFFFFFFULL) + lo_hi;
  return a_hi * b_hi + (hi_lo >> 32) + (cross >> 32);
}

/// Counter-based SplitMix64 generator. Derived quantities are defined
/// precisely so that other implementations can reproduce them:
///   uniform()    = (next() >> 11) * 2^-53, in [0, 1)
///   bounded(n)   = floor(next() * n / 2^64), in [0, n)
///   normal()     = Box-Muller cosine branch on u1 = 1 - uniform(), u2 = uniform()
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}
  SplitMix64(std::uint64_t seed, std::uint64_t a, std::uint64_t b)
      : state_(stream_key(seed, a, b)) {}

  std::uint64_t next() {
    state_ += kGoldenGamma;
    return mix64(state_);
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::uint64_t bounded(std::uint64_t n) {
    return mul_high(next(), n);
  }

  double normal();

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::uint64_t state_;
};

/// Draws k distinct peers of `self` from {0..m-1} \ {self}, uniformly
/// without replacement, via the first k swaps of a Fisher-Yates shuffle over
/// the peer list in increasing order. `out` is overwritten.
void sample_peers(SplitMix64& rng, std::size_t m, std::size_t self, std::size_t k,
                  std::vector<std::size_t>& out);

}  // namespace earcp
