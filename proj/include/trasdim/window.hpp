#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "trasdim/errors.hpp"
#include "trasdim/point.hpp"

namespace trasdim {

enum class SpaceKind { R, XKI, XOmegaK, YOmegaK, X2Omega };

inline const char* kind_name(SpaceKind k) {
  switch (k) {
    case SpaceKind::R: return "r";
    case SpaceKind::XKI: return "xki";
    case SpaceKind::XOmegaK: return "xomegak";
    case SpaceKind::YOmegaK: return "yomegak";
    case SpaceKind::X2Omega: return "x2omega";
  }
  return "?";
}

inline SpaceKind kind_from_name(const std::string& s) {
  if (s == "r") return SpaceKind::R;
  if (s == "xki") return SpaceKind::XKI;
  if (s == "xomegak") return SpaceKind::XOmegaK;
  if (s == "yomegak") return SpaceKind::YOmegaK;
  if (s == "x2omega") return SpaceKind::X2Omega;
  fail(Errc::usage, "unknown space kind '" + s + "'");
}

struct WindowParams {
  int k = 0;  // bad-coordinate budget (XKI / XOmegaK / YOmegaK)
  int block_lo = 1, block_hi = 1;
  int level_lo = 1, level_hi = 1;  // X2Omega only
  Coord radius = 0;

  friend bool operator==(const WindowParams&, const WindowParams&) = default;
};

struct WindowSpec {
  SpaceKind kind = SpaceKind::R;
  WindowParams params;
};

inline constexpr std::int64_t kDefaultPointCeiling = 5'000'000;

// A finite truncation of one space: exactly the integer points of the space
// with all coordinates in [0, radius], listed in canonical (level, block,
// lexicographic) order. Immutable after construction.
struct Window {
  SpaceKind kind = SpaceKind::R;
  WindowParams params;
  std::vector<Point> points;

  int size() const { return static_cast<int>(points.size()); }
  bool empty() const { return points.empty(); }

  // -1 when absent; binary search over the canonical order
  int index_of(const Point& p) const {
    auto it = std::lower_bound(points.begin(), points.end(), p, point_less);
    if (it != points.end() && *it == p) return static_cast<int>(it - points.begin());
    return -1;
  }
};

namespace detail {

inline void check_window_spec(const WindowSpec& spec) {
  const auto& p = spec.params;
  require(p.radius >= 0, Errc::invariant, "window radius must be nonnegative");
  // grid exponents feed 1 << e; anything past this is absurd at desk scale
  require(p.k <= 32 && p.block_hi <= 32 && p.level_hi <= 32, Errc::invariant,
          "window indices are limited to 32");
  switch (spec.kind) {
    case SpaceKind::R:
      require(p.block_lo >= 1 && p.block_lo == p.block_hi, Errc::invariant,
              "r-kind window takes a single block");
      // plain R^b has no dyadic structure, so no radius divisibility applies
      break;
    case SpaceKind::XKI:
      require(p.k >= 0, Errc::invariant, "k must be nonnegative");
      require(p.block_lo >= 1 && p.block_lo == p.block_hi, Errc::invariant,
              "xki window takes a single block");
      require(p.radius % (Coord{1} << p.block_lo) == 0, Errc::invariant,
              "xki window radius must be a multiple of 2^block");
      break;
    case SpaceKind::XOmegaK:
    case SpaceKind::YOmegaK:
      require(p.k >= 0, Errc::invariant, "k must be nonnegative");
      require(p.block_lo >= 1 && p.block_lo <= p.block_hi, Errc::invariant,
              "block range must be nonempty");
      require(p.radius % (Coord{1} << p.block_hi) == 0, Errc::invariant,
              "window radius must be a multiple of 2^block_hi");
      break;
    case SpaceKind::X2Omega: {
      require(p.block_lo >= 1 && p.block_lo <= p.block_hi, Errc::invariant,
              "block range must be nonempty");
      require(p.level_lo >= 1 && p.level_lo <= p.level_hi, Errc::invariant,
              "level range must be nonempty");
      const int e = std::max(p.level_hi, p.block_hi);
      require(p.radius % (Coord{1} << e) == 0, Errc::invariant,
              "x2omega window radius must be a multiple of 2^max(level_hi, block_hi)");
      break;
    }
  }
}

// saturating (radius/step + 1)^block
inline std::int64_t grid_count_estimate(Coord radius, Coord step, int block) {
  const std::int64_t base = radius / step + 1;
  std::int64_t n = 1;
  for (int i = 0; i < block; ++i) {
    if (n > (std::int64_t{1} << 62) / base) return std::int64_t{1} << 62;
    n *= base;
  }
  return n;
}

inline std::int64_t estimate_points(const WindowSpec& spec) {
  const auto& p = spec.params;
  std::int64_t total = 0;
  switch (spec.kind) {
    case SpaceKind::R:
    case SpaceKind::XKI:
      total = grid_count_estimate(p.radius, 1, p.block_lo);
      break;
    case SpaceKind::XOmegaK:
      for (int b = p.block_lo; b <= p.block_hi; ++b)
        total += grid_count_estimate(p.radius, 1, b);
      break;
    case SpaceKind::YOmegaK:
      for (int b = p.block_lo; b <= p.block_hi; ++b)
        total += grid_count_estimate(p.radius, Coord{1} << p.k, b);
      break;
    case SpaceKind::X2Omega:
      for (int l = p.level_lo; l <= p.level_hi; ++l)
        for (int b = p.block_lo; b <= p.block_hi; ++b)
          total += grid_count_estimate(p.radius, Coord{1} << l, b);
      break;
  }
  return total;
}

// DFS over coordinate positions; prunes as soon as the bad-coordinate budget
// is exhausted, so only members are visited (plus their failed extensions).
inline void enumerate_block(Coord radius, Coord step, int block, int bad_grid_exp, int bad_budget,
                            int level_tag, std::vector<Point>& out) {
  std::vector<Coord> cur(static_cast<std::size_t>(block), 0);
  struct Rec {
    Coord radius, step;
    int block, bad_grid_exp, bad_budget, level_tag;
    std::vector<Point>* out;
    std::vector<Coord>* cur;
    void go(int pos, int bad) {
      if (pos == block) {
        out->push_back(Point{level_tag, *cur});
        return;
      }
      for (Coord c = 0; c <= radius; c += step) {
        const int nb = bad + (divisible_pow2(c, bad_grid_exp) ? 0 : 1);
        if (nb > bad_budget) continue;
        (*cur)[static_cast<std::size_t>(pos)] = c;
        go(pos + 1, nb);
      }
    }
  } rec{radius, step, block, bad_grid_exp, bad_budget, level_tag, &out, &cur};
  rec.go(0, 0);
}

}  // namespace detail

// Enumerates the requested window in canonical order. Fails loudly when the
// estimated point count exceeds the ceiling instead of truncating.
inline Window gen_window(const WindowSpec& spec, std::int64_t ceiling = kDefaultPointCeiling) {
  detail::check_window_spec(spec);
  const std::int64_t est = detail::estimate_points(spec);
  if (est > ceiling)
    fail(Errc::ceiling, "window estimate " + std::to_string(est) + " points exceeds ceiling " +
                            std::to_string(ceiling));

  Window w;
  w.kind = spec.kind;
  w.params = spec.params;
  const auto& p = spec.params;
  switch (spec.kind) {
    case SpaceKind::R:
      // bad budget = block: no membership constraint
      detail::enumerate_block(p.radius, 1, p.block_lo, 0, p.block_lo, 0, w.points);
      break;
    case SpaceKind::XKI:
      detail::enumerate_block(p.radius, 1, p.block_lo, p.block_lo, p.k, p.k, w.points);
      break;
    case SpaceKind::XOmegaK:
      for (int b = p.block_lo; b <= p.block_hi; ++b)
        detail::enumerate_block(p.radius, 1, b, b, p.k, p.k, w.points);
      break;
    case SpaceKind::YOmegaK:
      for (int b = p.block_lo; b <= p.block_hi; ++b)
        detail::enumerate_block(p.radius, Coord{1} << p.k, b, b, p.k, p.k, w.points);
      break;
    case SpaceKind::X2Omega:
      for (int l = p.level_lo; l <= p.level_hi; ++l)
        for (int b = p.block_lo; b <= p.block_hi; ++b)
          detail::enumerate_block(p.radius, Coord{1} << l, b, b, l, l, w.points);
      break;
  }
  return w;
}

}  // namespace trasdim
