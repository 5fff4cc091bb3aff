#pragma once

#include <cstdint>
#include <random>

namespace blockmax {

/// Generator used by every simulator. One instance per logical stream; never shared
/// between threads.
using Rng = std::mt19937_64;

/// Uniform draw on the open interval (0,1) built from the top 53 bits of one output.
inline double uniform_open01(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace blockmax
