#pragma once

#include <cstdint>
#include <limits>

namespace magicpol {

/// SplitMix64 as a UniformRandomBitGenerator. Cheap to construct, so one
/// engine per (seed, point, shot) gives schedule-independent streams.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Engine for shot `shot` of grid point `point` under `seed`.
SplitMix64 stream(std::uint64_t seed, std::uint64_t point, std::uint64_t shot);

/// Uniform double in [0, 1) from the top 53 bits.
double uniform01(SplitMix64& g);

}  // namespace magicpol
