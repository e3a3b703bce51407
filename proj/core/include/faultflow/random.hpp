#pragma once

#include <cstdint>
#include <random>

namespace faultflow {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Independent generator for sub-stream `index` of a master seed.  Streams
/// derived this way do not depend on the order in which they are created.
inline Rng substream(std::uint64_t master, std::uint64_t index) {
  return Rng(splitmix64(splitmix64(master) ^ splitmix64(index + 0x632BE59BD9B4E019ULL)));
}

/// Uniform on the open interval (0,1), 53-bit resolution.  Implemented here
/// rather than with std::uniform_real_distribution so streams are identical
/// across standard libraries.
inline double uniform01(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace faultflow
