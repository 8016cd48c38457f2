#pragma once

#include <cstdint>

namespace trasdim {

// Counter-based pseudo-random draws: the value at (seed, i, j) is a pure
// function of its arguments, so sampling loops can be partitioned across
// workers by index without changing any result.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t mix(std::uint64_t seed, std::uint64_t i, std::uint64_t j = 0) {
  return splitmix64(splitmix64(splitmix64(seed) ^ i) ^ (j * 0xd1342543de82ef95ull + 1));
}

// Maps a 64-bit draw onto [0, n) by widening multiply; bias is < 2^-64 per draw.
inline std::uint64_t bounded(std::uint64_t draw, std::uint64_t n) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(draw) * static_cast<unsigned __int128>(n)) >> 64);
}

inline std::uint64_t draw_index(std::uint64_t seed, std::uint64_t i, std::uint64_t j,
                                std::uint64_t n) {
  return bounded(mix(seed, i, j), n);
}

}  // namespace trasdim
