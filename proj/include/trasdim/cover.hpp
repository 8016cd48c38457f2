#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "trasdim/errors.hpp"
#include "trasdim/metric.hpp"
#include "trasdim/window.hpp"

namespace trasdim {

// Point sets are sorted index lists into one window.
using IndexSet = std::vector<int>;

// One r-disjoint family: members are pairwise-disjoint point sets at pairwise
// set distance >= r. An empty member list is allowed, so a sigma-cover
// extends to any superset of sigma.
struct Family {
  int r = 1;
  std::vector<IndexSet> members;
};

struct Cover {
  std::vector<Family> families;

  // sorted list of the families' r parameters (grid covers repeat one value)
  std::vector<int> sigma() const {
    std::vector<int> s;
    s.reserve(families.size());
    for (const auto& f : families) s.push_back(f.r);
    std::sort(s.begin(), s.end());
    return s;
  }
};

struct CoverVerdict {
  bool covers = false;
  bool bounded_ok = false;
  bool disjoint_ok = false;
  std::optional<Coord> max_diameter;  // empty when no nonempty member exists
  std::string first_violation;        // empty iff every check passed

  bool ok() const { return covers && bounded_ok && disjoint_ok; }
};

namespace detail {

inline const Point& wp(const Window& w, int i) {
  require(i >= 0 && i < w.size(), Errc::invariant,
          "point index " + std::to_string(i) + " outside window of " + std::to_string(w.size()));
  return w.points[static_cast<std::size_t>(i)];
}

}  // namespace detail

// max pairwise distance; zero for singletons
inline Coord diameter(const Window& w, const IndexSet& s, const MetricHandle& metric) {
  require(!s.empty(), Errc::empty_input, "diameter of an empty set");
  Coord d = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      d = std::max(d, dist(metric, detail::wp(w, s[i]), detail::wp(w, s[j])));
  return d;
}

// min cross distance between two nonempty sets
inline Coord set_distance(const Window& w, const IndexSet& a, const IndexSet& b,
                          const MetricHandle& metric) {
  require(!a.empty() && !b.empty(), Errc::empty_input, "set_distance with an empty side");
  Coord best = -1;
  for (int i : a)
    for (int j : b) {
      const Coord d = dist(metric, detail::wp(w, i), detail::wp(w, j));
      if (best < 0 || d < best) best = d;
    }
  return best;
}

// r-disjointness: all distinct member pairs at set distance >= r
inline bool check_family(const Window& w, const Family& f, const MetricHandle& metric) {
  for (std::size_t i = 0; i < f.members.size(); ++i)
    for (std::size_t j = i + 1; j < f.members.size(); ++j)
      if (set_distance(w, f.members[i], f.members[j], metric) < f.r) return false;
  return true;
}

// Verifies cover = window, member diameters <= bound, and per-family
// r-disjointness. Scan order for first_violation: family-by-family member
// diameters, then family disjointness, then the first uncovered point.
inline CoverVerdict check_cover(const Cover& c, const Window& w, Coord bound,
                                const MetricHandle& metric) {
  CoverVerdict v;
  v.bounded_ok = true;
  v.disjoint_ok = true;

  std::vector<char> hit(static_cast<std::size_t>(w.size()), 0);
  for (std::size_t fi = 0; fi < c.families.size(); ++fi) {
    const Family& f = c.families[fi];
    require(f.r >= 1, Errc::invariant, "family r must be a positive integer");
    for (std::size_t mi = 0; mi < f.members.size(); ++mi) {
      const IndexSet& m = f.members[mi];
      require(!m.empty(), Errc::invariant, "cover member must be a nonempty point set");
      for (int idx : m) {
        detail::wp(w, idx);  // validates the index
        hit[static_cast<std::size_t>(idx)] = 1;
      }
      const Coord d = diameter(w, m, metric);
      if (!v.max_diameter || d > *v.max_diameter) v.max_diameter = d;
      if (d > bound) {
        v.bounded_ok = false;
        if (v.first_violation.empty())
          v.first_violation = "family " + std::to_string(fi) + " member " + std::to_string(mi) +
                              " has diameter " + std::to_string(d) + " > " +
                              std::to_string(bound);
      }
    }
    for (std::size_t i = 0; i < f.members.size(); ++i)
      for (std::size_t j = i + 1; j < f.members.size(); ++j) {
        const Coord d = set_distance(w, f.members[i], f.members[j], metric);
        if (d < f.r) {
          v.disjoint_ok = false;
          if (v.first_violation.empty())
            v.first_violation = "family " + std::to_string(fi) + " members " + std::to_string(i) +
                                "," + std::to_string(j) + " at distance " + std::to_string(d) +
                                " < r=" + std::to_string(f.r);
        }
      }
  }

  v.covers = true;
  for (int i = 0; i < w.size(); ++i)
    if (!hit[static_cast<std::size_t>(i)]) {
      v.covers = false;
      if (v.first_violation.empty())
        v.first_violation = "point " + std::to_string(i) + " uncovered";
      break;
    }
  return v;
}

// Partition of s into the equivalence classes of the transitive closure of
// d(a, b) < r. Any two members of one r-disjoint family that meet a common
// class must coincide, so these classes are the minimal admissible member
// structure on exactly these points. Classes come back ordered by smallest
// element, elements ascending.
inline std::vector<IndexSet> chain_components(const Window& w, const IndexSet& s, int r,
                                              const MetricHandle& metric) {
  require(r >= 1, Errc::invariant, "chain_components: r must be positive");
  const std::size_t n = s.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (dist(metric, detail::wp(w, s[i]), detail::wp(w, s[j])) < r) {
        const auto ri = find(i), rj = find(j);
        if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
      }
  std::vector<IndexSet> classes(n);
  for (std::size_t i = 0; i < n; ++i) classes[find(i)].push_back(s[i]);
  std::vector<IndexSet> out;
  for (auto& c : classes)
    if (!c.empty()) {
      std::sort(c.begin(), c.end());
      out.push_back(std::move(c));
    }
  std::sort(out.begin(), out.end(),
            [](const IndexSet& a, const IndexSet& b) { return a.front() < b.front(); });
  return out;
}

}  // namespace trasdim
