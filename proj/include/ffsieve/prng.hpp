#pragma once

#include <cstdint>

namespace ffsieve {

// SplitMix64 (Steele, Lea, Flood 2014).  All randomized draws in the project
// flow through this generator so that reports are reproducible from a seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on [-1, 1]: 53 mantissa bits mapped affinely.
  double nextSymmetric() {
    return static_cast<double>(next() >> 11) * (2.0 / 9007199254740992.0) - 1.0;
  }

  // Decorrelates parallel streams (trial index, restart index).
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 g(seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1)));
    return g.next();
  }

 private:
  std::uint64_t state_;
};

}  // namespace ffsieve
