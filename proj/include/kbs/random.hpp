#pragma once

#include <cstdint>

namespace kbs {

// Counter-based generator: the value depends only on (seed, counter), so
// draws are reproducible regardless of evaluation order or thread count.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Uniform double in [0, 1) from (seed, counter).
inline double uniform01(std::uint64_t seed, std::uint64_t counter) {
  const std::uint64_t bits = splitmix64(splitmix64(seed) ^ (counter * 0xd1b54a32d192ed03ULL));
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Sequential stream on top of uniform01.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : seed_(seed) {}
  double uniform() { return uniform01(seed_, counter_++); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace kbs
