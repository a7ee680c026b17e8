#pragma once

#include <cstdint>
#include <random>

namespace glitter {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic substream for (seed, stream, index). Distinct (stream, index)
// pairs give statistically independent generators, so episode streams can be
// replayed in any order (or in parallel) with identical results.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream,
                                 std::uint64_t index = 0) {
  std::uint64_t s = splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index);
  return std::mt19937_64(s);
}

namespace streams {
inline constexpr std::uint64_t kSbm = 0x5b3ad2c1;
inline constexpr std::uint64_t kSplit = 0x11f3a921;
inline constexpr std::uint64_t kEpisode = 0x7c4e19d5;
inline constexpr std::uint64_t kInit = 0x2d8fb03b;
inline constexpr std::uint64_t kEval = 0x64a1c9f7;
}  // namespace streams

}  // namespace glitter
