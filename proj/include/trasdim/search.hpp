#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trasdim/cover.hpp"
#include "trasdim/errors.hpp"
#include "trasdim/metric.hpp"
#include "trasdim/set_system.hpp"
#include "trasdim/window.hpp"

namespace trasdim {

enum class Outcome { Exists, None, Unknown };

inline const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Exists: return "EXISTS";
    case Outcome::None: return "NONE";
    case Outcome::Unknown: return "UNKNOWN";
  }
  return "?";
}

inline Outcome outcome_from_name(const std::string& s) {
  if (s == "EXISTS") return Outcome::Exists;
  if (s == "NONE") return Outcome::None;
  if (s == "UNKNOWN") return Outcome::Unknown;
  fail(Errc::bad_json, "unknown outcome '" + s + "'");
}

struct Decision {
  Outcome outcome = Outcome::Unknown;
  std::optional<Cover> witness;  // present iff outcome == Exists
  std::int64_t nodes_explored = 0;
  std::int64_t budget = 0;
};

namespace detail {

inline void validate_sigma(const std::vector<int>& sigma) {
  require(!sigma.empty(), Errc::invariant, "sigma must be nonempty");
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    require(sigma[i] >= 1, Errc::invariant, "sigma entries must be positive integers");
    if (i) require(sigma[i] > sigma[i - 1], Errc::invariant, "sigma must be sorted and distinct");
  }
}

// canonical cover induced by a total point -> family assignment: each family
// keeps its chain components as members
inline Cover cover_from_assignment(const Window& w, const std::vector<int>& sigma,
                                   const std::vector<int>& assign, const MetricHandle& metric) {
  Cover c;
  c.families.resize(sigma.size());
  std::vector<IndexSet> per_family(sigma.size());
  for (int p = 0; p < w.size(); ++p)
    per_family[static_cast<std::size_t>(assign[static_cast<std::size_t>(p)])].push_back(p);
  for (std::size_t f = 0; f < sigma.size(); ++f) {
    c.families[f].r = sigma[f];
    c.families[f].members = chain_components(w, per_family[f], sigma[f], metric);
  }
  return c;
}

// Exact DFS over point -> family assignments in canonical window order.
// Components per family are maintained by a union-find with an undo journal;
// no path compression, so parent edits roll back exactly. A branch is pruned
// the moment the component a point joins would exceed the diameter bound.
class CoverSearch {
 public:
  CoverSearch(const Window& w, std::vector<int> sigma, Coord bound, std::int64_t budget,
              const MetricHandle& metric)
      : w_(w), sigma_(std::move(sigma)), bound_(bound), budget_(budget), metric_(metric) {
    require(!w_.empty(), Errc::empty_input, "decide_cover: window is empty");
    validate_sigma(sigma_);
    require(bound_ >= 0, Errc::invariant, "decide_cover: bound must be nonnegative");
    require(budget_ >= 1, Errc::budget, "decide_cover: budget must be at least 1 node");
    n_ = w_.size();
    nf_ = static_cast<int>(sigma_.size());
    if (static_cast<std::int64_t>(n_) * n_ <= kMatrixCap) {
      cached_ = true;
      dmat_.resize(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_));
      for (int a = 0; a < n_; ++a)
        for (int b = a; b < n_; ++b) {
          const Coord d = dist(metric_, w_.points[static_cast<std::size_t>(a)],
                               w_.points[static_cast<std::size_t>(b)]);
          dmat_[idx(a, b)] = d;
          dmat_[idx(b, a)] = d;
        }
    }
    parent_.assign(static_cast<std::size_t>(n_), -1);
    comp_diam_.assign(static_cast<std::size_t>(n_), 0);
    comp_pts_.assign(static_cast<std::size_t>(n_), {});
    family_pts_.assign(static_cast<std::size_t>(nf_), {});
  }

  Decision run() {
    const bool found = dfs();
    Decision dec;
    dec.budget = budget_;
    dec.nodes_explored = nodes_;
    if (found) {
      dec.outcome = Outcome::Exists;
      dec.witness = build_witness();
      const auto verdict = check_cover(*dec.witness, w_, bound_, metric_);
      if (!verdict.ok())
        fail(Errc::internal, "search produced an invalid witness: " + verdict.first_violation);
    } else if (out_of_budget_) {
      dec.outcome = Outcome::Unknown;
    } else {
      dec.outcome = Outcome::None;
    }
    return dec;
  }

 private:
  static constexpr std::int64_t kMatrixCap = 1'200'000;

  struct Undo {
    int point = -1;
    int family = -1;
    bool fresh = false;
    int winner = -1;
    Coord winner_prev_diam = 0;
    std::size_t winner_prev_pts = 0;
    std::vector<int> absorbed;
  };

  std::size_t idx(int a, int b) const {
    return static_cast<std::size_t>(a) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(b);
  }

  Coord d(int a, int b) const {
    if (cached_) return dmat_[idx(a, b)];
    return dist(metric_, w_.points[static_cast<std::size_t>(a)],
                w_.points[static_cast<std::size_t>(b)]);
  }

  int find(int a) const {
    while (parent_[static_cast<std::size_t>(a)] != a) a = parent_[static_cast<std::size_t>(a)];
    return a;
  }

  // One search node: attempt to put p into family f. Returns true and fills
  // the journal when the assignment keeps every component within the bound.
  bool try_assign(int p, int f, Undo& u) {
    if (nodes_ >= budget_) {
      out_of_budget_ = true;
      return false;
    }
    ++nodes_;

    const int r = sigma_[static_cast<std::size_t>(f)];
    auto& fam = family_pts_[static_cast<std::size_t>(f)];

    merge_roots_.clear();
    for (int q : fam)
      if (d(p, q) < r) {
        const int root = find(q);
        if (std::find(merge_roots_.begin(), merge_roots_.end(), root) == merge_roots_.end())
          merge_roots_.push_back(root);
      }

    if (merge_roots_.empty()) {
      parent_[static_cast<std::size_t>(p)] = p;
      comp_diam_[static_cast<std::size_t>(p)] = 0;
      comp_pts_[static_cast<std::size_t>(p)].assign(1, p);
      fam.push_back(p);
      u.point = p;
      u.family = f;
      u.fresh = true;
      return true;
    }

    // exact merged diameter: prior diameters, p against every merged point,
    // and cross pairs between the merging components
    Coord nd = 0;
    for (int root : merge_roots_) nd = std::max(nd, comp_diam_[static_cast<std::size_t>(root)]);
    for (int q : fam)
      if (std::find(merge_roots_.begin(), merge_roots_.end(), find(q)) != merge_roots_.end())
        nd = std::max(nd, d(p, q));
    for (std::size_t i = 0; i + 1 < merge_roots_.size(); ++i)
      for (std::size_t j = i + 1; j < merge_roots_.size(); ++j) {
        const auto& pi = comp_pts_[static_cast<std::size_t>(merge_roots_[i])];
        const auto& pj = comp_pts_[static_cast<std::size_t>(merge_roots_[j])];
        for (int a : pi)
          for (int b : pj) nd = std::max(nd, d(a, b));
      }
    if (nd > bound_) return false;  // prune; nothing was mutated

    int winner = merge_roots_.front();
    for (int root : merge_roots_)
      if (comp_pts_[static_cast<std::size_t>(root)].size() >
          comp_pts_[static_cast<std::size_t>(winner)].size())
        winner = root;

    u.point = p;
    u.family = f;
    u.fresh = false;
    u.winner = winner;
    u.winner_prev_diam = comp_diam_[static_cast<std::size_t>(winner)];
    u.winner_prev_pts = comp_pts_[static_cast<std::size_t>(winner)].size();
    auto& wpts = comp_pts_[static_cast<std::size_t>(winner)];
    for (int root : merge_roots_)
      if (root != winner) {
        parent_[static_cast<std::size_t>(root)] = winner;
        const auto& rp = comp_pts_[static_cast<std::size_t>(root)];
        wpts.insert(wpts.end(), rp.begin(), rp.end());
        u.absorbed.push_back(root);
      }
    parent_[static_cast<std::size_t>(p)] = winner;
    wpts.push_back(p);
    comp_diam_[static_cast<std::size_t>(winner)] = nd;
    fam.push_back(p);
    return true;
  }

  void undo(const Undo& u) {
    if (u.point < 0) return;
    family_pts_[static_cast<std::size_t>(u.family)].pop_back();
    if (u.fresh) {
      parent_[static_cast<std::size_t>(u.point)] = -1;
      comp_pts_[static_cast<std::size_t>(u.point)].clear();
      return;
    }
    comp_pts_[static_cast<std::size_t>(u.winner)].resize(u.winner_prev_pts);
    comp_diam_[static_cast<std::size_t>(u.winner)] = u.winner_prev_diam;
    for (int root : u.absorbed) parent_[static_cast<std::size_t>(root)] = root;
    parent_[static_cast<std::size_t>(u.point)] = -1;
  }

  // families with equal r and no points yet are interchangeable; only the
  // first is tried (dormant while sigma entries are distinct)
  bool symmetric_duplicate(int f) const {
    if (!family_pts_[static_cast<std::size_t>(f)].empty()) return false;
    for (int g = 0; g < f; ++g)
      if (sigma_[static_cast<std::size_t>(g)] == sigma_[static_cast<std::size_t>(f)] &&
          family_pts_[static_cast<std::size_t>(g)].empty())
        return true;
    return false;
  }

  // explicit-stack DFS: recursion depth would equal the window size
  bool dfs() {
    struct Frame {
      int family = 0;
      bool assigned = false;
      Undo undo;
    };
    std::vector<Frame> stack;
    stack.push_back(Frame{});
    while (!stack.empty()) {
      const int p = static_cast<int>(stack.size()) - 1;
      if (p == n_) return true;  // every point is placed
      Frame& fr = stack.back();
      if (fr.assigned) {  // back from a failed subtree
        undo(fr.undo);
        fr.assigned = false;
        fr.undo = Undo{};
        ++fr.family;
      }
      bool descended = false;
      while (fr.family < nf_) {
        if (symmetric_duplicate(fr.family)) {
          ++fr.family;
          continue;
        }
        Undo u;
        if (try_assign(p, fr.family, u)) {
          fr.undo = std::move(u);
          fr.assigned = true;
          stack.push_back(Frame{});
          descended = true;
          break;
        }
        if (out_of_budget_) return false;
        ++fr.family;
      }
      if (descended) continue;
      if (out_of_budget_) return false;
      stack.pop_back();
    }
    return false;
  }

  Cover build_witness() const {
    Cover c;
    c.families.resize(static_cast<std::size_t>(nf_));
    for (int f = 0; f < nf_; ++f) {
      c.families[static_cast<std::size_t>(f)].r = sigma_[static_cast<std::size_t>(f)];
      std::vector<int> roots;
      for (int q : family_pts_[static_cast<std::size_t>(f)]) {
        const int root = find(q);
        if (std::find(roots.begin(), roots.end(), root) == roots.end()) roots.push_back(root);
      }
      std::vector<IndexSet> members;
      for (int root : roots) {
        IndexSet m = comp_pts_[static_cast<std::size_t>(root)];
        std::sort(m.begin(), m.end());
        members.push_back(std::move(m));
      }
      std::sort(members.begin(), members.end(),
                [](const IndexSet& a, const IndexSet& b) { return a.front() < b.front(); });
      c.families[static_cast<std::size_t>(f)].members = std::move(members);
    }
    return c;
  }

  const Window& w_;
  std::vector<int> sigma_;
  Coord bound_;
  std::int64_t budget_;
  MetricHandle metric_;

  int n_ = 0, nf_ = 0;
  bool cached_ = false;
  std::vector<Coord> dmat_;

  std::vector<int> parent_;
  std::vector<Coord> comp_diam_;
  std::vector<std::vector<int>> comp_pts_;
  std::vector<std::vector<int>> family_pts_;
  std::vector<int> merge_roots_;

  std::int64_t nodes_ = 0;
  bool out_of_budget_ = false;
};

}  // namespace detail

// Decides whether the window splits into |sigma| families, the i-th being
// sigma_i-disjoint, with every member diameter <= bound. The witness, when
// one exists, is the first complete assignment in deterministic DFS order,
// canonicalized to chain components.
inline Decision decide_cover(const Window& w, std::vector<int> sigma, Coord bound,
                             std::int64_t budget,
                             std::optional<MetricHandle> metric = std::nullopt) {
  const MetricHandle m = metric ? *metric : default_metric(w);
  detail::CoverSearch search(w, std::move(sigma), bound, budget, m);
  return search.run();
}

// Reference oracle: enumerates every |sigma|^|W| assignment in lexicographic
// order (point 0 most significant) and checks it via chain_components, a code
// path independent of the incremental solver. Never returns Unknown.
inline Decision decide_cover_naive(const Window& w, std::vector<int> sigma, Coord bound,
                                   std::optional<MetricHandle> metric = std::nullopt,
                                   std::int64_t max_assignments = 10'000'000) {
  require(!w.empty(), Errc::empty_input, "decide_cover_naive: window is empty");
  detail::validate_sigma(sigma);
  require(bound >= 0, Errc::invariant, "decide_cover_naive: bound must be nonnegative");
  const MetricHandle m = metric ? *metric : default_metric(w);

  const auto nf = static_cast<std::int64_t>(sigma.size());
  std::int64_t total = 1;
  for (int i = 0; i < w.size() && total <= max_assignments; ++i) total *= nf;
  if (total > max_assignments)
    fail(Errc::budget, "decide_cover_naive: |sigma|^|W| exceeds " +
                           std::to_string(max_assignments) + " assignments");

  const auto n = static_cast<std::size_t>(w.size());
  std::vector<int> assign(n, 0);
  Decision dec;
  dec.budget = max_assignments;
  while (true) {
    ++dec.nodes_explored;
    const Cover c = detail::cover_from_assignment(w, sigma, assign, m);
    bool ok = true;
    for (const auto& fam : c.families)
      for (const auto& member : fam.members)
        if (diameter(w, member, m) > bound) {
          ok = false;
          break;
        }
    if (ok) {
      dec.outcome = Outcome::Exists;
      dec.witness = c;
      const auto verdict = check_cover(c, w, bound, m);
      if (!verdict.ok())
        fail(Errc::internal, "oracle produced an invalid witness: " + verdict.first_violation);
      return dec;
    }
    // increment base-|sigma| counter, last digit fastest
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (++assign[pos] < nf) break;
      assign[pos] = 0;
      if (pos == 0) {
        dec.outcome = Outcome::None;
        return dec;
      }
    }
  }
}

// Window- and bound-restricted fragment of the no-cover set system: sigma is
// a definite member exactly when the exact search certifies NONE.
struct SigmaOutcome {
  FinSet sigma;
  Outcome outcome = Outcome::Unknown;
  std::int64_t nodes = 0;
  bool inferred = false;
};

struct AFragment {
  std::string window_digest;
  Coord bound = 0;
  int n_max = 1, s_max = 1;
  std::int64_t budget_per_sigma = 0;
  SetSystem definite_in;   // certified NONE
  SetSystem definite_out;  // certified EXISTS
  SetSystem unknown;
  std::vector<SigmaOutcome> outcomes;
};

namespace detail {

// A cover for tau yields one for sigma when tau maps injectively into sigma
// with every image <= its preimage (spare families stay empty; disjointness
// only weakens). For sorted sets: |tau| <= |sigma| and sigma_i <= tau_i.
inline bool implies_exists(const FinSet& tau, const FinSet& sigma) {
  if (tau.size() > sigma.size()) return false;
  for (std::size_t i = 0; i < tau.size(); ++i)
    if (sigma[i] > tau[i]) return false;
  return true;
}

inline void enumerate_sigmas(int n_max, int s_max, std::vector<FinSet>& out) {
  FinSet cur;
  struct Rec {
    int n_max, s_max;
    std::vector<FinSet>* out;
    FinSet* cur;
    void go(int next) {
      if (!cur->empty()) out->push_back(*cur);
      if (static_cast<int>(cur->size()) == s_max) return;
      for (int v = next; v <= n_max; ++v) {
        cur->push_back(v);
        go(v + 1);
        cur->pop_back();
      }
    }
  } rec{n_max, s_max, &out, &cur};
  rec.go(1);
  std::sort(out.begin(), out.end(), [](const FinSet& a, const FinSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
}

}  // namespace detail

// Runs the exact search per sigma in (size, lex) order, skipping calls that
// prior outcomes already decide, then closes the partition under the
// implication laws. A closure step that contradicts a decided outcome aborts:
// it would mean the solver itself is wrong.
inline AFragment build_afragment(const Window& w, Coord bound, int n_max, int s_max,
                                 std::int64_t budget_per_sigma,
                                 std::optional<MetricHandle> metric = std::nullopt) {
  require(n_max >= 1, Errc::invariant, "n_max must be at least 1");
  require(s_max >= 1, Errc::invariant, "s_max must be at least 1");
  const MetricHandle m = metric ? *metric : default_metric(w);

  AFragment frag;
  frag.bound = bound;
  frag.n_max = n_max;
  frag.s_max = s_max;
  frag.budget_per_sigma = budget_per_sigma;

  std::vector<FinSet> universe;
  detail::enumerate_sigmas(n_max, std::min(s_max, n_max), universe);

  std::vector<FinSet> exists_set, none_set, unknown_set;
  for (const FinSet& sigma : universe) {
    SigmaOutcome rec;
    rec.sigma = sigma;
    bool decided = false;
    for (const auto& tau : exists_set)
      if (detail::implies_exists(tau, sigma)) {
        rec.outcome = Outcome::Exists;
        rec.inferred = true;
        decided = true;
        break;
      }
    if (!decided)
      for (const auto& tau : none_set)
        if (detail::implies_exists(sigma, tau)) {
          rec.outcome = Outcome::None;
          rec.inferred = true;
          decided = true;
          break;
        }
    if (!decided) {
      const Decision d =
          decide_cover(w, std::vector<int>(sigma.begin(), sigma.end()), bound, budget_per_sigma, m);
      rec.outcome = d.outcome;
      rec.nodes = d.nodes_explored;
    }
    switch (rec.outcome) {
      case Outcome::Exists: exists_set.push_back(sigma); break;
      case Outcome::None: none_set.push_back(sigma); break;
      case Outcome::Unknown: unknown_set.push_back(sigma); break;
    }
    frag.outcomes.push_back(std::move(rec));
  }

  // consistency across decided outcomes
  for (const auto& s : exists_set)
    for (const auto& t : none_set)
      if (detail::implies_exists(s, t))
        fail(Errc::internal, "fragment contradiction: EXISTS at one sigma implies EXISTS at a "
                             "sigma certified NONE");

  // closure: promote unknowns forced by decided outcomes, to a fixpoint
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = unknown_set.begin(); it != unknown_set.end();) {
      bool to_none = false, to_exists = false;
      for (const auto& t : none_set)
        if (detail::implies_exists(*it, t)) {
          to_none = true;
          break;
        }
      for (const auto& t : exists_set)
        if (detail::implies_exists(t, *it)) {
          to_exists = true;
          break;
        }
      if (to_none && to_exists)
        fail(Errc::internal, "fragment contradiction while closing an unknown sigma");
      if (to_none) {
        none_set.push_back(*it);
        it = unknown_set.erase(it);
        changed = true;
      } else if (to_exists) {
        exists_set.push_back(*it);
        it = unknown_set.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }

  frag.definite_in = SetSystem(none_set);
  frag.definite_out = SetSystem(exists_set);
  frag.unknown = SetSystem(unknown_set);

  // post-hoc closure assertions on the final partition
  const auto in_members = frag.definite_in.members();
  for (const auto& sigma : in_members) {
    for (const auto& tau : universe) {
      if (detail::implies_exists(tau, sigma) && !frag.definite_in.contains(tau) &&
          frag.definite_in.contains(sigma))
        fail(Errc::internal, "fragment closure violated after post-processing");
    }
  }
  const std::size_t total =
      frag.definite_in.size() + frag.definite_out.size() + frag.unknown.size();
  if (total != universe.size())
    fail(Errc::internal, "fragment partition does not cover the sigma universe");
  return frag;
}

// Ord interval for the fragment: the definite members floor it, adding the
// unresolved sigmas ceilings it.
inline std::pair<int, int> afragment_ord_bounds(const AFragment& frag) {
  return ord_interval(frag.definite_in, SetSystem::union_of(frag.definite_in, frag.unknown));
}

}  // namespace trasdim
