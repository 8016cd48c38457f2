// Acceptance suite: one numbered criterion per function, each printing a
// single PASS/FAIL line with the observed numbers. Exit code is the count of
// failing criteria. Run with no argument for all criteria or with 1..10 for
// one of them.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "trasdim/trasdim.hpp"

using namespace trasdim;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Window gen(SpaceKind kind, WindowParams p) { return gen_window(WindowSpec{kind, p}); }

Window line(Coord radius) {
  return gen(SpaceKind::R, {.block_lo = 1, .block_hi = 1, .radius = radius});
}

struct CliRun {
  int exit_code = -1;
  std::string out;
};

CliRun run_cli(const std::string& args) {
  const std::string cmd = std::string(TRASDIM_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  CliRun res;
  if (!pipe) return res;
  char buf[4096];
  while (std::size_t got = fread(buf, 1, sizeof buf, pipe)) res.out.append(buf, got);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

// ---------------------------------------------------------------- criterion 1

bool criterion1(std::string& detail) {
  const auto t0 = Clock::now();
  std::ostringstream msg;
  bool ok = true;

  auto audit_group = [&](const char* label, const std::vector<Window>& windows,
                         const std::function<MetricHandle(const Window&)>& pick) {
    std::int64_t checked = 0, violations = 0;
    std::string first;
    for (const auto& w : windows) {
      const MetricHandle m = pick(w);
      const AuditReport rep = metric_audit(w, m, 100000, 42, 2);
      checked += rep.checked;
      violations += rep.violation_count;
      if (!rep.violations.empty() && first.empty()) {
        const auto& v = rep.violations.front();
        first = std::string(v.check) + " x=" + point_str(w.points[(std::size_t)v.x]) +
                " y=" + point_str(w.points[(std::size_t)v.y]) +
                " z=" + point_str(w.points[(std::size_t)v.z]) + " d_xy=" + std::to_string(v.d_xy) +
                " d_yz=" + std::to_string(v.d_yz) + " d_xz=" + std::to_string(v.d_xz);
      }
    }
    msg << label << ": " << violations << " violations / " << checked << " triples";
    if (!first.empty()) msg << " (first: " << first << ")";
    msg << "; ";
    if (violations != 0) ok = false;
  };

  audit_group("d_inf",
              {line(32), gen(SpaceKind::R, {.block_lo = 2, .block_hi = 2, .radius = 32}),
               gen(SpaceKind::R, {.block_lo = 3, .block_hi = 3, .radius = 16}),
               gen(SpaceKind::R, {.block_lo = 4, .block_hi = 4, .radius = 8})},
              [](const Window&) { return MetricHandle{MetricKind::Sup, 0}; });
  audit_group("d_k",
              {gen(SpaceKind::XOmegaK, {.k = 1, .block_lo = 1, .block_hi = 4, .radius = 16}),
               gen(SpaceKind::XOmegaK, {.k = 2, .block_lo = 1, .block_hi = 4, .radius = 16}),
               gen(SpaceKind::XOmegaK, {.k = 3, .block_lo = 1, .block_hi = 4, .radius = 16})},
              [](const Window& w) { return MetricHandle{MetricKind::Level, w.params.k}; });
  audit_group("d",
              {gen(SpaceKind::X2Omega,
                   {.block_lo = 1, .block_hi = 3, .level_lo = 1, .level_hi = 3, .radius = 16})},
              [](const Window&) { return MetricHandle{MetricKind::Tower, 0}; });

  const double secs = seconds_since(t0);
  msg << "runtime " << secs << "s";
  if (secs > 30.0) ok = false;
  detail = msg.str();
  return ok;
}

// ---------------------------------------------------------------- criterion 2

bool criterion2(std::string& detail) {
  std::ostringstream msg;
  bool ok = true;

  std::int64_t block_pairs = 0, block_bad = 0;
  const std::vector<std::pair<int, Coord>> block_configs = {{1, 32}, {2, 32}, {3, 16}, {4, 8}};
  for (const auto& [b, radius] : block_configs) {
    const Window w = gen(SpaceKind::R, {.block_lo = b, .block_hi = b, .radius = radius});
    const auto n = static_cast<std::uint64_t>(w.size());
    for (int target = b; target <= b + 2; ++target) {
      for (std::int64_t i = 0; i < 10000; ++i) {
        const Point& x = w.points[draw_index(1, (std::uint64_t)i, 10 * (std::uint64_t)target, n)];
        const Point& y = w.points[draw_index(1, (std::uint64_t)i, 10 * (std::uint64_t)target + 1, n)];
        ++block_pairs;
        if (dist_sup(embed_block(x, target), embed_block(y, target)) != dist_sup(x, y))
          ++block_bad;
      }
    }
  }
  msg << "embed_block: " << block_bad << " mismatches / " << block_pairs << " pairs; ";
  if (block_bad != 0) ok = false;

  std::int64_t level_pairs = 0, level_bad = 0;
  std::string first;
  for (int m = 1; m <= 3; ++m) {
    const Window w = gen(SpaceKind::XOmegaK, {.k = m, .block_lo = 1, .block_hi = 3, .radius = 16});
    const auto n = static_cast<std::uint64_t>(w.size());
    for (int target = m; target <= 5; ++target) {
      for (std::int64_t i = 0; i < 10000; ++i) {
        const Point& x = w.points[draw_index(2, (std::uint64_t)i, 10 * (std::uint64_t)target, n)];
        const Point& y = w.points[draw_index(2, (std::uint64_t)i, 10 * (std::uint64_t)target + 1, n)];
        ++level_pairs;
        const Coord before = dist_level(m, x, y);
        const Coord after = dist_level(target, embed_level(x, target), embed_level(y, target));
        if (before != after) {
          ++level_bad;
          if (first.empty())
            first = "m=" + std::to_string(m) + "->" + std::to_string(target) + " x=" +
                    point_str(x) + " y=" + point_str(y) + " d_m=" + std::to_string(before) +
                    " d_n=" + std::to_string(after);
        }
      }
    }
  }
  msg << "embed_level: " << level_bad << " mismatches / " << level_pairs << " pairs";
  if (!first.empty()) msg << " (first: " << first << ")";
  if (level_bad != 0) ok = false;

  detail = msg.str();
  return ok;
}

// ---------------------------------------------------------------- criterion 3

bool criterion3(std::string& detail) {
  std::int64_t checked = 0, failures = 0;
  std::string first;
  for (int k = 1; k <= 3; ++k)
    for (int b = 1; b <= 3; ++b)
      for (Coord radius = Coord{1} << b; radius <= 32; radius += Coord{1} << b) {
        const Window x = gen(SpaceKind::XKI, {.k = k, .block_lo = b, .block_hi = b, .radius = radius});
        const Window y =
            gen(SpaceKind::YOmegaK, {.k = k, .block_lo = b, .block_hi = b, .radius = radius});
        const Coord grid = Coord{1} << k;
        for (const auto& pt : x.points) {
          ++checked;
          // floor-round each coordinate onto the 2^k grid: stays inside the
          // box, keeps dyadic coordinates dyadic, and moves by < 2^k
          Point cand{y.points.front().level, pt.coords};
          for (auto& c : cand.coords) c -= c % grid;
          const int idx = y.index_of(cand);
          const bool good = idx >= 0 && dist_sup(pt, y.points[(std::size_t)idx]) <= grid;
          if (!good) {
            bool found = false;
            for (const auto& q : y.points)
              if (dist_sup(pt, q) <= grid) {
                found = true;
                break;
              }
            if (!found) {
              ++failures;
              if (first.empty())
                first = "k=" + std::to_string(k) + " b=" + std::to_string(b) +
                        " R=" + std::to_string(radius) + " x=" + point_str(pt);
            }
          }
        }
      }
  std::ostringstream msg;
  msg << failures << " uncovered points / " << checked << " checked";
  if (!first.empty()) msg << " (first: " << first << ")";
  detail = msg.str();
  return failures == 0;
}

// ---------------------------------------------------------------- criterion 4

bool criterion4(std::string& detail) {
  std::int64_t mismatches = 0, checked = 0;

  std::vector<FinSet> pool3;
  for (unsigned mask = 1; mask < 8; ++mask) {
    FinSet f;
    for (int a = 0; a < 3; ++a)
      if (mask & (1u << a)) f.push_back(a + 1);
    pool3.push_back(f);
  }
  for (unsigned mask = 0; mask < 128; ++mask) {
    std::vector<FinSet> members;
    for (std::size_t j = 0; j < pool3.size(); ++j)
      if (mask & (1u << j)) members.push_back(pool3[j]);
    const SetSystem m{std::move(members)};
    ++checked;
    if (ord_system(m) != ord_system_naive(m)) ++mismatches;
  }

  std::vector<FinSet> pool6;
  for (unsigned mask = 1; mask < 64; ++mask) {
    FinSet f;
    for (int a = 0; a < 6; ++a)
      if (mask & (1u << a)) f.push_back(a + 1);
    pool6.push_back(f);
  }
  for (std::uint64_t i = 0; i < 1000; ++i) {
    std::vector<FinSet> members;
    for (std::size_t j = 0; j < pool6.size(); ++j)
      if (mix(42, i, j) % 4 == 0) members.push_back(pool6[j]);
    const SetSystem m{std::move(members)};
    ++checked;
    if (ord_system(m) != ord_system_naive(m)) ++mismatches;
  }

  std::int64_t size_rank_bad = 0;
  for (int n = 1; n <= 4; ++n) {
    std::vector<FinSet> members;
    for (unsigned mask = 1; mask < 32; ++mask) {
      FinSet f;
      for (int a = 0; a < 5; ++a)
        if (mask & (1u << a)) f.push_back(a + 1);
      if (static_cast<int>(f.size()) <= n) members.push_back(f);
    }
    if (ord_system(SetSystem{std::move(members)}) != n) ++size_rank_bad;
  }

  std::ostringstream msg;
  msg << mismatches << " oracle mismatches / " << checked << " systems; " << size_rank_bad
      << " size-rank failures";
  detail = msg.str();
  return mismatches == 0 && size_rank_bad == 0;
}

// ---------------------------------------------------------------- criterion 5

bool criterion5(std::string& detail) {
  const std::vector<std::vector<int>> sigmas = {{1},    {2},    {3},    {4},    {1, 2},
                                                {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}};
  std::int64_t instances = 0, disagreements = 0, bad_witnesses = 0;
  for (int n = 0; n <= 6; ++n) {
    const Window w = line(n);
    for (const auto& sigma : sigmas)
      for (Coord bound = 0; bound <= n; ++bound) {
        ++instances;
        const Decision fast = decide_cover(w, sigma, bound, 10'000'000);
        const Decision slow = decide_cover_naive(w, sigma, bound);
        if (fast.outcome != slow.outcome) ++disagreements;
        if (fast.outcome == Outcome::Exists &&
            !check_cover(*fast.witness, w, bound, default_metric(w)).ok())
          ++bad_witnesses;
        if (slow.outcome == Outcome::Exists &&
            !check_cover(*slow.witness, w, bound, default_metric(w)).ok())
          ++bad_witnesses;
      }
  }
  std::ostringstream msg;
  msg << disagreements << " disagreements, " << bad_witnesses << " invalid witnesses / "
      << instances << " instances";
  detail = msg.str();
  return disagreements == 0 && bad_witnesses == 0;
}

// ---------------------------------------------------------------- criterion 6

bool criterion6(std::string& detail) {
  std::int64_t wrong = 0, checked = 0;
  for (int n = 0; n <= 24; ++n) {
    const Window w = line(n);
    for (Coord bound = 0; bound <= n + 1; ++bound) {
      ++checked;
      const Outcome expect = bound >= n ? Outcome::Exists : Outcome::None;
      if (decide_cover(w, {2}, bound, 10'000'000).outcome != expect) ++wrong;
      if (n <= 7 && decide_cover_naive(w, {2}, bound).outcome != expect) ++wrong;
    }
  }
  std::ostringstream msg;
  msg << wrong << " deviations / " << checked << " (N, B) pairs";
  detail = msg.str();
  return wrong == 0;
}

// ---------------------------------------------------------------- criterion 7

bool criterion7(std::string& detail) {
  std::int64_t configs = 0, closure_bad = 0, interval_bad = 0, contradictions = 0;
  for (std::uint64_t s = 0; s < 24; ++s) {
    const int n = 4 + static_cast<int>(mix(31, s, 0) % 11);
    const Coord bound = static_cast<Coord>(mix(31, s, 1) % (static_cast<std::uint64_t>(n) + 2));
    const int n_max = 3 + static_cast<int>(mix(31, s, 2) % 2);
    const int s_max = 1 + static_cast<int>(mix(31, s, 3) % 2);
    ++configs;
    try {
      const AFragment frag = build_afragment(line(n), bound, n_max, s_max, 2'000'000);
      std::vector<FinSet> universe;
      detail::enumerate_sigmas(n_max, s_max, universe);
      if (frag.definite_in.size() + frag.definite_out.size() + frag.unknown.size() !=
          universe.size())
        ++closure_bad;
      for (const auto& sigma : frag.definite_in.members()) {
        for (std::size_t drop = 0; drop < sigma.size(); ++drop) {
          FinSet sub = sigma;
          sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(drop));
          if (!sub.empty() && !frag.definite_in.contains(sub)) ++closure_bad;
        }
        for (std::size_t i = 0; i < sigma.size(); ++i)
          for (int up = sigma[i] + 1; up <= n_max; ++up) {
            FinSet raised = canonical_finset([&] {
              FinSet r = sigma;
              r[i] = up;
              return r;
            }());
            if (raised.size() == sigma.size() && !frag.definite_in.contains(raised))
              ++closure_bad;
          }
      }
      const auto [lo, hi] = afragment_ord_bounds(frag);
      if (lo > hi) ++interval_bad;
    } catch (const Error&) {
      ++contradictions;
    }
  }
  std::ostringstream msg;
  msg << configs << " configs: " << closure_bad << " closure faults, " << interval_bad
      << " inverted intervals, " << contradictions << " aborts";
  detail = msg.str();
  return closure_bad == 0 && interval_bad == 0 && contradictions == 0;
}

// ---------------------------------------------------------------- criterion 8

bool criterion8(std::string& detail) {
  const std::vector<WindowParams> configs = {
      {.block_lo = 1, .block_hi = 2, .level_lo = 1, .level_hi = 4, .radius = 16},
      {.block_lo = 1, .block_hi = 2, .level_lo = 1, .level_hi = 4, .radius = 32},
      {.block_lo = 1, .block_hi = 2, .level_lo = 1, .level_hi = 3, .radius = 16},
      {.block_lo = 1, .block_hi = 1, .level_lo = 1, .level_hi = 2, .radius = 32},
  };
  std::int64_t checks = 0, failures = 0;
  std::string first;
  for (const auto& p : configs) {
    const Window w = gen(SpaceKind::X2Omega, p);
    for (int r = 1; r <= 8; ++r) {
      ++checks;
      const auto dec = tail_singleton_witness(w, r);
      const auto verdict = check_coasdim_step(w, dec, default_metric(w));
      if (!verdict.ok()) {
        ++failures;
        if (first.empty()) {
          first = "levels<=" + std::to_string(p.level_hi) + " R=" + std::to_string(p.radius) +
                  " r=" + std::to_string(r) + ": ";
          if (!verdict.tail_disjoint_ok) first += "tail not r-disjoint";
          else if (!verdict.tail_bounded_ok) first += "tail member above diameter 0";
          else if (!verdict.residual_ok) first += "residual escapes N_c";
          else first += "partition broken";
        }
      }
    }
  }
  std::ostringstream msg;
  msg << failures << " failing decompositions / " << checks << " (window, r) pairs";
  if (!first.empty()) msg << " (first: " << first << ")";
  detail = msg.str();
  return failures == 0;
}

// ---------------------------------------------------------------- criterion 9

bool criterion9(std::string& detail) {
  std::int64_t premises = 0, violations = 0;
  // nested integer intervals
  for (std::uint64_t s = 0; premises < 55 && s < 500; ++s) {
    const int big = 6 + static_cast<int>(mix(23, s, 0) % 9);
    const int small = 2 + static_cast<int>(mix(23, s, 1) % (static_cast<std::uint64_t>(big) - 3));
    std::vector<int> sigma{1 + static_cast<int>(mix(23, s, 2) % 4)};
    if (mix(23, s, 3) % 2) {
      const int extra = 1 + static_cast<int>(mix(23, s, 4) % 4);
      if (extra != sigma[0]) sigma.push_back(extra);
      std::sort(sigma.begin(), sigma.end());
    }
    const Coord bound = static_cast<Coord>(mix(23, s, 5) % static_cast<std::uint64_t>(small));
    if (decide_cover(line(small), sigma, bound, 4'000'000).outcome != Outcome::None) continue;
    ++premises;
    if (decide_cover(line(big), sigma, bound, 4'000'000).outcome != Outcome::None) ++violations;
  }
  // nested plane windows
  for (std::uint64_t s = 0; s < 8; ++s) {
    const Window small = gen(SpaceKind::XKI, {.k = 1, .block_lo = 2, .block_hi = 2, .radius = 4});
    const Window big = gen(SpaceKind::XKI, {.k = 1, .block_lo = 2, .block_hi = 2, .radius = 8});
    const std::vector<int> sigma{2 + static_cast<int>(s % 3)};
    const Coord bound = static_cast<Coord>(s % 3);
    if (decide_cover(small, sigma, bound, 4'000'000).outcome != Outcome::None) continue;
    ++premises;
    if (decide_cover(big, sigma, bound, 4'000'000).outcome != Outcome::None) ++violations;
  }
  std::ostringstream msg;
  msg << violations << " violations / " << premises << " NONE premises";
  detail = msg.str();
  return violations == 0 && premises >= 50;
}

// ---------------------------------------------------------------- criterion 10

bool criterion10(std::string& detail) {
  std::ostringstream msg;
  bool ok = true;

  char tmpl[] = "/tmp/trasdim_accept_XXXXXX";
  const char* dir = mkdtemp(tmpl);
  if (!dir) {
    detail = "could not create a temp directory";
    return false;
  }
  const std::string w = std::string(dir) + "/line60.json";
  if (run_cli("window gen --kind r --block 1 --r 60 --out " + w).exit_code != 0) {
    detail = "window generation failed";
    return false;
  }

  const auto t0 = Clock::now();
  const CliRun a =
      run_cli("cover decide --window " + w + " --sigma 4 --bound 30 --budget 1000000 --threads 1");
  const CliRun b =
      run_cli("cover decide --window " + w + " --sigma 4 --bound 30 --budget 1000000 --threads 8");
  const double secs = seconds_since(t0);

  if (a.exit_code != 0 || b.exit_code != 0) {
    detail = "cover decide exited nonzero";
    return false;
  }
  json ja = json::parse(a.out, nullptr, false);
  json jb = json::parse(b.out, nullptr, false);
  if (ja.is_discarded() || jb.is_discarded()) {
    detail = "unparseable decision output";
    return false;
  }
  const std::int64_t nodes = ja["nodes"].get<std::int64_t>();
  msg << "outcome " << ja["outcome"].get<std::string>() << ", " << nodes << " nodes, both runs "
      << secs << "s";
  if (ja["outcome"] != "NONE") ok = false;
  if (nodes >= 1000000) ok = false;
  if (secs > 5.0) ok = false;

  ja.erase("manifest");
  jb.erase("manifest");
  if (ja.dump() != jb.dump()) {
    msg << "; thread counts disagree";
    ok = false;
  } else {
    msg << "; --threads 1 and 8 byte-identical";
  }
  detail = msg.str();
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<bool(std::string&)>>> criteria = {
      {"metric audit: 0 violations for d_inf, d_k, d over >=1e5 seeded triples each", criterion1},
      {"isometry: embed_block and embed_level preserve distances on >=1e4 pairs", criterion2},
      {"thickening: every X point within 2^k of a Y point, exhaustive", criterion3},
      {"Ord oracle equivalence and size-rank identity", criterion4},
      {"search oracle equivalence on the exhaustive small grid", criterion5},
      {"interval law: {0..N} with sigma={2} covers iff B >= N", criterion6},
      {"fragment closures hold with zero contradictions", criterion7},
      {"tail decomposition verifies for r in 1..8", criterion8},
      {"NONE on a sub-window forces NONE on the window", criterion9},
      {"determinism across thread counts and pruning performance", criterion10},
  };

  int which = 0;
  if (argc > 1) which = std::atoi(argv[1]);
  if (which < 0 || which > 10) {
    std::cerr << "usage: acceptance [1..10]\n";
    return 64;
  }

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (which != 0 && static_cast<std::size_t>(which) != i + 1) continue;
    std::string detail;
    const bool ok = criteria[i].second(detail);
    if (!ok) ++failures;
    std::cout << "criterion " << (i + 1) << ": " << (ok ? "PASS" : "FAIL") << " - "
              << criteria[i].first << " [" << detail << "]\n";
    std::cout.flush();
  }
  return failures;
}
