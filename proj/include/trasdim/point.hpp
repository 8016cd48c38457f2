#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trasdim/errors.hpp"

namespace trasdim {

using Coord = std::int64_t;

// One exact lattice point. `level` carries the summand index where one
// exists: the k of an X_{w+k} point, the tower level of an X_2w point, and 0
// for plain R^b points. Coordinates use unit grid step; all arithmetic stays
// in integers.
struct Point {
  int level = 0;
  std::vector<Coord> coords;

  int block() const { return static_cast<int>(coords.size()); }

  friend bool operator==(const Point&, const Point&) = default;
};

// canonical order: (level, block, coords lexicographic)
inline bool point_less(const Point& a, const Point& b) {
  if (a.level != b.level) return a.level < b.level;
  if (a.block() != b.block()) return a.block() < b.block();
  return a.coords < b.coords;
}

inline bool divisible_pow2(Coord c, int e) {
  // e is a small grid exponent; 2^e fits comfortably in 63 bits here
  require(e >= 0 && e < 62, Errc::invariant, "grid exponent out of range");
  return c % (Coord{1} << e) == 0;
}

inline int count_bad_coords(const std::vector<Coord>& coords, int grid_exp) {
  int bad = 0;
  for (Coord c : coords)
    if (!divisible_pow2(c, grid_exp)) ++bad;
  return bad;
}

// X_k^(i) membership: at most k of the i coordinates lie outside 2^i Z.
inline bool member_xki(int k, int i, const Point& x) {
  require(x.block() == i, Errc::dimension,
          "member_xki: point has block " + std::to_string(x.block()) + ", expected " +
              std::to_string(i));
  return count_bad_coords(x.coords, i) <= k;
}

// Y_level^(block) membership: every coordinate in 2^level Z and at most
// `level` coordinates outside 2^block Z.
inline bool member_tower(int level, int block, const std::vector<Coord>& coords) {
  require(static_cast<int>(coords.size()) == block, Errc::dimension,
          "member_tower: coords length " + std::to_string(coords.size()) + ", expected " +
              std::to_string(block));
  for (Coord c : coords)
    if (!divisible_pow2(c, level)) return false;
  return count_bad_coords(coords, block) <= level;
}

// zero-pad into a higher block; the identity when target equals the block
inline Point embed_block(const Point& x, int target_block) {
  require(target_block >= x.block(), Errc::precondition,
          "embed_block: target block " + std::to_string(target_block) + " below source " +
              std::to_string(x.block()));
  Point out = x;
  out.coords.resize(static_cast<std::size_t>(target_block), 0);
  return out;
}

// relax the bad-coordinate budget; valid because membership is monotone in k
inline Point embed_level(const Point& x, int target_k) {
  require(target_k >= x.level, Errc::precondition,
          "embed_level: target " + std::to_string(target_k) + " below source " +
              std::to_string(x.level));
  Point out = x;
  out.level = target_k;
  return out;
}

inline std::string point_str(const Point& p) {
  std::string s = "(level " + std::to_string(p.level) + ", [";
  for (std::size_t i = 0; i < p.coords.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(p.coords[i]);
  }
  return s + "])";
}

}  // namespace trasdim
