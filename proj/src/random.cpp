#include "magicpol/random.hpp"

namespace magicpol {

namespace {
std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  SplitMix64 g(a ^ (b * 0xd1342543de82ef95ULL));
  return g();
}
}  // namespace

SplitMix64 stream(std::uint64_t seed, std::uint64_t point, std::uint64_t shot) {
  return SplitMix64(mix(mix(mix(0x6a09e667f3bcc909ULL, seed), point), shot));
}

double uniform01(SplitMix64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

}  // namespace magicpol
