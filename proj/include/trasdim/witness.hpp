#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "trasdim/cover.hpp"
#include "trasdim/errors.hpp"
#include "trasdim/metric.hpp"
#include "trasdim/window.hpp"

namespace trasdim {

// Decomposition of an x2omega window at scale r: singletons of every point at
// level >= k form one r-disjoint family, and what remains must sit inside the
// c-neighborhood of the level-(k-1) points, c = k(k-1)/2.
struct WitnessDecomposition {
  int r = 1;
  int k = 1;
  Coord c = 0;
  Family tail;            // r-disjoint singleton family, canonical order
  IndexSet residual;      // window points at levels below the cut
  bool tail_empty = false;  // window level range tops out below k; checks go vacuous
};

inline WitnessDecomposition tail_singleton_witness(const Window& w, int r) {
  require(r >= 1, Errc::precondition, "tail_singleton_witness: r must be positive");
  require(w.kind == SpaceKind::X2Omega, Errc::invariant,
          "tail_singleton_witness: window must be of kind x2omega");

  WitnessDecomposition dec;
  dec.r = r;
  // least k with k >= r; singleton separation additionally rests on the 2^k
  // coordinate grid, so 2^k >= r is asserted rather than assumed
  int k = r;
  while ((Coord{1} << k) < r) ++k;
  require((Coord{1} << k) >= r && k >= r, Errc::internal, "cut selection failed");
  dec.k = k;
  dec.c = static_cast<Coord>(k) * (k - 1) / 2;
  dec.tail.r = r;
  dec.tail_empty = w.params.level_hi < k;

  for (int i = 0; i < w.size(); ++i) {
    if (w.points[static_cast<std::size_t>(i)].level >= k)
      dec.tail.members.push_back(IndexSet{i});
    else
      dec.residual.push_back(i);
  }
  return dec;
}

struct CoasdimStepVerdict {
  bool partition_ok = false;
  bool tail_disjoint_ok = false;
  bool tail_bounded_ok = false;
  bool residual_ok = false;
  bool vacuous_residual = false;  // no level-(k-1) target inside the window
  std::optional<std::pair<int, int>> disjoint_violation;  // first offending index pair
  std::optional<int> residual_violation;                  // first uncontained index
  Coord residual_margin = -1;  // max over residual of min distance to targets; -1 when n/a
  bool residual_ok_at_c_minus_1 = false;  // reported, never asserted

  bool ok() const { return partition_ok && tail_disjoint_ok && tail_bounded_ok && residual_ok; }
};

// One unfolding of the coasdim recursion at scale r: (1) the tail family is
// r-disjoint under the tower metric, exact pairwise; (2) its members are
// singletons, diameter 0; (3) the residual lies in N_c of the level-(k-1)
// window points. When the window has no level >= k at all the residual check
// cannot be read off the window and is reported vacuous instead of failed.
inline CoasdimStepVerdict check_coasdim_step(const Window& w, const WitnessDecomposition& dec,
                                             const MetricHandle& metric) {
  require(w.kind == SpaceKind::X2Omega, Errc::invariant,
          "check_coasdim_step: window must be of kind x2omega");
  for (const auto& m : dec.tail.members)
    for (int i : m)
      require(i >= 0 && i < w.size(), Errc::invariant,
              "check_coasdim_step: decomposition references a point outside the window");
  for (int i : dec.residual)
    require(i >= 0 && i < w.size(), Errc::invariant,
            "check_coasdim_step: decomposition references a point outside the window");

  CoasdimStepVerdict v;

  // tail + residual must repartition the window
  std::vector<int> seen;
  seen.reserve(static_cast<std::size_t>(w.size()));
  for (const auto& m : dec.tail.members) seen.insert(seen.end(), m.begin(), m.end());
  seen.insert(seen.end(), dec.residual.begin(), dec.residual.end());
  std::sort(seen.begin(), seen.end());
  v.partition_ok = static_cast<int>(seen.size()) == w.size() &&
                   std::adjacent_find(seen.begin(), seen.end()) == seen.end();

  // exact pairwise separation of the singleton members
  v.tail_disjoint_ok = true;
  std::vector<int> tail_pts;
  for (const auto& m : dec.tail.members) tail_pts.insert(tail_pts.end(), m.begin(), m.end());
  for (std::size_t i = 0; i < tail_pts.size() && v.tail_disjoint_ok; ++i)
    for (std::size_t j = i + 1; j < tail_pts.size(); ++j) {
      const Coord d = dist(metric, w.points[static_cast<std::size_t>(tail_pts[i])],
                           w.points[static_cast<std::size_t>(tail_pts[j])]);
      if (d < dec.r) {
        v.tail_disjoint_ok = false;
        v.disjoint_violation = {tail_pts[i], tail_pts[j]};
        break;
      }
    }

  v.tail_bounded_ok = true;
  for (const auto& m : dec.tail.members)
    if (diameter(w, m, metric) != 0) {
      v.tail_bounded_ok = false;
      break;
    }

  v.vacuous_residual = w.params.level_hi < dec.k;
  if (v.vacuous_residual || dec.residual.empty()) {
    v.residual_ok = true;
    v.residual_ok_at_c_minus_1 = true;
  } else {
    IndexSet targets;
    for (int i = 0; i < w.size(); ++i)
      if (w.points[static_cast<std::size_t>(i)].level == dec.k - 1) targets.push_back(i);
    require(!targets.empty(), Errc::internal,
            "nonempty residual with no level-(k-1) points in the window");
    v.residual_ok = true;
    v.residual_margin = 0;
    for (int i : dec.residual) {
      Coord best = -1;
      for (int t : targets) {
        const Coord d = dist(metric, w.points[static_cast<std::size_t>(i)],
                             w.points[static_cast<std::size_t>(t)]);
        if (best < 0 || d < best) best = d;
      }
      v.residual_margin = std::max(v.residual_margin, best);
      if (best > dec.c && v.residual_ok) {
        v.residual_ok = false;
        v.residual_violation = i;
      }
    }
    v.residual_ok_at_c_minus_1 = v.residual_margin <= dec.c - 1;
  }
  return v;
}

// Product brick cover of an R-kind window: along each axis, bricks of side D
// alternate between two parity classes, giving 2^block families. Same-parity
// bricks on an axis are a full brick apart, so on the integer grid each
// family is D-disjoint (gap D+1), and every member has diameter <= D-1.
inline Cover grid_cover(const Window& w, int side) {
  require(w.kind == SpaceKind::R, Errc::invariant, "grid_cover: window must be of kind r");
  require(side >= 1, Errc::precondition, "grid_cover: brick side must be positive");
  const int b = w.params.block_lo;
  require(b >= 1 && b <= 20, Errc::invariant, "grid_cover: block out of range");

  const std::size_t nfam = std::size_t{1} << b;
  std::vector<std::map<std::vector<Coord>, IndexSet>> bricks(nfam);
  for (int i = 0; i < w.size(); ++i) {
    const auto& p = w.points[static_cast<std::size_t>(i)];
    std::vector<Coord> brick(p.coords.size());
    std::size_t fam = 0;
    for (std::size_t a = 0; a < p.coords.size(); ++a) {
      brick[a] = p.coords[a] / side;
      fam |= static_cast<std::size_t>(brick[a] & 1) << a;
    }
    bricks[fam][brick].push_back(i);
  }

  Cover c;
  c.families.resize(nfam);
  for (std::size_t f = 0; f < nfam; ++f) {
    c.families[f].r = side;
    for (auto& [key, member] : bricks[f]) {
      std::sort(member.begin(), member.end());
      c.families[f].members.push_back(member);
    }
    std::sort(c.families[f].members.begin(), c.families[f].members.end(),
              [](const IndexSet& x, const IndexSet& y) { return x.front() < y.front(); });
  }
  return c;
}

}  // namespace trasdim
