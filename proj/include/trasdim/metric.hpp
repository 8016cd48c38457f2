#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "trasdim/errors.hpp"
#include "trasdim/point.hpp"
#include "trasdim/rng.hpp"
#include "trasdim/window.hpp"

namespace trasdim {

// sup-metric on a common block; callers embed first when blocks differ
inline Coord dist_sup(const Point& x, const Point& y) {
  require(x.block() == y.block(), Errc::dimension,
          "dist_sup: blocks " + std::to_string(x.block()) + " vs " + std::to_string(y.block()));
  Coord d = 0;
  for (std::size_t i = 0; i < x.coords.size(); ++i)
    d = std::max(d, std::abs(x.coords[i] - y.coords[i]));
  return d;
}

namespace detail {

// sup distance with implicit zero padding of the shorter point
inline Coord dist_sup_padded(const std::vector<Coord>& a, const std::vector<Coord>& b) {
  const std::size_t n = std::max(a.size(), b.size());
  Coord d = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Coord av = i < a.size() ? a[i] : 0;
    const Coord bv = i < b.size() ? b[i] : 0;
    d = std::max(d, std::abs(av - bv));
  }
  return d;
}

// m + (m+1) + ... + (n-1); zero when m >= n
inline Coord span_sum(int m, int n) {
  if (m >= n) return 0;
  const std::int64_t a = m, b = n - 1;
  return (a + b) * (b - a + 1) / 2;
}

}  // namespace detail

// metric on X_{w+k}: cross-block pairs sit at least k * (m + ... + (n-1))
// apart, where m <= n are the two blocks; within a block it is the sup metric
// after zero padding
inline Coord dist_level(int k, const Point& x, const Point& y) {
  require(x.level == k && y.level == k, Errc::dimension,
          "dist_level: points carry k=" + std::to_string(x.level) + "," +
              std::to_string(y.level) + " but metric expects k=" + std::to_string(k));
  const int m = std::min(x.block(), y.block());
  const int n = std::max(x.block(), y.block());
  const Coord ck = static_cast<Coord>(k) * detail::span_sum(m, n);
  return std::max(detail::dist_sup_padded(x.coords, y.coords), ck);
}

// metric on X_2w: level summands m <= n sit at least m + ... + (n-1) apart,
// and within the pair's larger level the level metric applies
inline Coord dist_tower(const Point& x, const Point& y) {
  const int m = std::min(x.level, y.level);
  const int n = std::max(x.level, y.level);
  const Coord c = detail::span_sum(m, n);
  const int bm = std::min(x.block(), y.block());
  const int bn = std::max(x.block(), y.block());
  const Coord inner_floor = static_cast<Coord>(n) * detail::span_sum(bm, bn);
  const Coord inner = std::max(detail::dist_sup_padded(x.coords, y.coords), inner_floor);
  return std::max(inner, c);
}

enum class MetricKind { Sup, Level, Tower };

inline const char* metric_name(MetricKind k) {
  switch (k) {
    case MetricKind::Sup: return "sup";
    case MetricKind::Level: return "level";
    case MetricKind::Tower: return "tower";
  }
  return "?";
}

inline MetricKind metric_from_name(const std::string& s) {
  if (s == "sup") return MetricKind::Sup;
  if (s == "level") return MetricKind::Level;
  if (s == "tower") return MetricKind::Tower;
  fail(Errc::usage, "unknown metric '" + s + "'");
}

struct MetricHandle {
  MetricKind kind = MetricKind::Sup;
  int k = 0;  // Level only
};

inline Coord dist(const MetricHandle& h, const Point& x, const Point& y) {
  switch (h.kind) {
    case MetricKind::Sup: return dist_sup(x, y);
    case MetricKind::Level: return dist_level(h.k, x, y);
    case MetricKind::Tower: return dist_tower(x, y);
  }
  fail(Errc::internal, "bad metric handle");
}

inline MetricHandle default_metric(const Window& w) {
  switch (w.kind) {
    case SpaceKind::R:
    case SpaceKind::XKI:
      return {MetricKind::Sup, 0};
    case SpaceKind::XOmegaK:
    case SpaceKind::YOmegaK:
      return {MetricKind::Level, w.params.k};
    case SpaceKind::X2Omega:
      return {MetricKind::Tower, 0};
  }
  fail(Errc::internal, "bad window kind");
}

// N_R(A) inside the window: indices of all window points within distance R of
// the index set A
inline std::vector<int> neighborhood(const Window& w, const std::vector<int>& a, Coord radius,
                                     const MetricHandle& metric) {
  require(!a.empty(), Errc::empty_input, "neighborhood: A is empty, d(x, A) undefined");
  require(radius >= 0, Errc::precondition, "neighborhood: radius must be nonnegative");
  for (int i : a)
    require(i >= 0 && i < w.size(), Errc::invariant, "neighborhood: index out of window");
  std::vector<int> out;
  for (int x = 0; x < w.size(); ++x) {
    Coord best = -1;
    for (int i : a) {
      const Coord d = dist(metric, w.points[static_cast<std::size_t>(x)],
                           w.points[static_cast<std::size_t>(i)]);
      if (best < 0 || d < best) best = d;
      if (best <= radius) break;
    }
    if (best <= radius) out.push_back(x);
  }
  return out;
}

struct AuditViolation {
  std::string check;  // "identity" | "symmetry" | "triangle"
  std::int64_t sample = 0;
  int x = 0, y = 0, z = 0;  // window indices
  Coord d_xy = 0, d_yx = 0, d_yz = 0, d_xz = 0;
};

struct AuditReport {
  std::int64_t checked = 0;
  std::int64_t distinct_triples = 0;
  std::int64_t violation_count = 0;
  std::vector<AuditViolation> violations;  // capped at kMaxStored
  static constexpr std::int64_t kMaxStored = 1000;
};

// Seeded triple audit of the metric axioms. Sample i is a pure function of
// (seed, i), so the loop partitions across threads with identical results.
inline AuditReport metric_audit(const Window& w, const MetricHandle& metric,
                                std::int64_t samples, std::uint64_t seed, int threads = 1) {
  require(!w.empty(), Errc::empty_input, "metric_audit: window is empty");
  require(samples >= 0, Errc::precondition, "metric_audit: negative sample count");
  const auto n = static_cast<std::uint64_t>(w.size());

  struct Shard {
    std::int64_t distinct = 0;
    std::int64_t violation_count = 0;
    std::vector<AuditViolation> violations;
  };

  const int nt = std::max(1, threads);
  std::vector<Shard> shards(static_cast<std::size_t>(nt));
  auto run_shard = [&](int t) {
    Shard& sh = shards[static_cast<std::size_t>(t)];
    for (std::int64_t i = t; i < samples; i += nt) {
      const auto ui = static_cast<std::uint64_t>(i);
      const int xi = static_cast<int>(draw_index(seed, ui, 0, n));
      const int yi = static_cast<int>(draw_index(seed, ui, 1, n));
      const int zi = static_cast<int>(draw_index(seed, ui, 2, n));
      const Point& x = w.points[static_cast<std::size_t>(xi)];
      const Point& y = w.points[static_cast<std::size_t>(yi)];
      const Point& z = w.points[static_cast<std::size_t>(zi)];
      if (!(xi == yi && yi == zi)) ++sh.distinct;

      const Coord dxy = dist(metric, x, y);
      const Coord dyx = dist(metric, y, x);
      const Coord dyz = dist(metric, y, z);
      const Coord dxz = dist(metric, x, z);

      auto report = [&](const char* check) {
        ++sh.violation_count;
        if (static_cast<std::int64_t>(sh.violations.size()) < AuditReport::kMaxStored)
          sh.violations.push_back({check, i, xi, yi, zi, dxy, dyx, dyz, dxz});
      };
      if ((dxy == 0) != (x == y)) report("identity");
      if (dxy != dyx) report("symmetry");
      if (dxz > dxy + dyz) report("triangle");
    }
  };

  if (nt == 1) {
    run_shard(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nt));
    for (int t = 0; t < nt; ++t) pool.emplace_back(run_shard, t);
    for (auto& th : pool) th.join();
  }

  AuditReport rep;
  rep.checked = samples;
  for (const auto& sh : shards) {
    rep.distinct_triples += sh.distinct;
    rep.violation_count += sh.violation_count;
  }
  // merge in sample order so the stored prefix is schedule-independent
  std::vector<AuditViolation> all;
  for (const auto& sh : shards) all.insert(all.end(), sh.violations.begin(), sh.violations.end());
  std::sort(all.begin(), all.end(),
            [](const AuditViolation& a, const AuditViolation& b) { return a.sample < b.sample; });
  if (static_cast<std::int64_t>(all.size()) > AuditReport::kMaxStored)
    all.resize(static_cast<std::size_t>(AuditReport::kMaxStored));
  rep.violations = std::move(all);
  return rep;
}

}  // namespace trasdim
