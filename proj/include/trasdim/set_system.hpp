#pragma once

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "trasdim/errors.hpp"

namespace trasdim {

// Labels are positive integers; a FinSet is a nonempty finite label set kept
// sorted and deduplicated so equality is structural.
using Label = int;
using FinSet = std::vector<Label>;

inline FinSet canonical_finset(FinSet v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  for (Label a : v) require(a >= 1, Errc::invariant, "label must be a positive integer");
  return v;
}

inline bool finset_contains(const FinSet& s, Label a) {
  return std::binary_search(s.begin(), s.end(), a);
}

// sorted-subset test
inline bool finset_subset(const FinSet& a, const FinSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline FinSet finset_minus(const FinSet& a, const FinSet& b) {
  FinSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline FinSet finset_union(const FinSet& a, const FinSet& b) {
  FinSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// A finite subset of Fin L: members are nonempty, deduplicated, and ordered,
// so two systems with the same members compare equal.
class SetSystem {
 public:
  SetSystem() = default;

  explicit SetSystem(std::vector<FinSet> members) {
    for (auto& m : members) {
      m = canonical_finset(std::move(m));
      require(!m.empty(), Errc::invariant, "set system members must be nonempty");
    }
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    members_ = std::move(members);
  }

  const std::vector<FinSet>& members() const { return members_; }
  bool empty() const { return members_.empty(); }
  std::size_t size() const { return members_.size(); }

  bool contains(const FinSet& m) const {
    return std::binary_search(members_.begin(), members_.end(), m);
  }

  bool subset_of(const SetSystem& other) const {
    return std::includes(other.members_.begin(), other.members_.end(), members_.begin(),
                         members_.end());
  }

  // union of all members, sorted
  std::vector<Label> labels() const {
    FinSet all;
    for (const auto& m : members_) all = finset_union(all, m);
    return all;
  }

  std::size_t max_member_size() const {
    std::size_t n = 0;
    for (const auto& m : members_) n = std::max(n, m.size());
    return n;
  }

  static SetSystem union_of(const SetSystem& a, const SetSystem& b) {
    std::vector<FinSet> all = a.members_;
    all.insert(all.end(), b.members_.begin(), b.members_.end());
    return SetSystem(std::move(all));
  }

  friend bool operator==(const SetSystem&, const SetSystem&) = default;

 private:
  std::vector<FinSet> members_;
};

// M^sigma = { tau in Fin L : sigma ∪ tau ∈ M, sigma ∩ tau = ∅ }. For an
// explicit M this is exactly { m \ sigma : m ∈ M, sigma ⊊ m }; sigma may be
// empty, in which case the derivative is M itself.
inline SetSystem derive(const SetSystem& M, const FinSet& sigma) {
  std::vector<FinSet> out;
  for (const auto& m : M.members()) {
    if (m.size() <= sigma.size()) continue;
    if (!finset_subset(sigma, m)) continue;
    out.push_back(finset_minus(m, sigma));
  }
  return SetSystem(std::move(out));
}

struct OrdResult {
  int value = 0;
  std::vector<Label> chain;  // deepest derivation path; smallest labels break ties
};

namespace detail {

// The derivative M^sigma is a function of sigma alone, so memoization keys on
// the accumulated sigma rather than on the derived system.
class OrdMemo {
 public:
  explicit OrdMemo(const SetSystem& M) : M_(M) {}

  struct Entry {
    int value = 0;
    Label best = 0;  // label realizing the max; 0 at leaves
  };

  const Entry& eval(const FinSet& sigma) {
    auto it = memo_.find(sigma);
    if (it != memo_.end()) return it->second;

    // members strictly containing sigma drive the recursion
    FinSet next_labels;
    for (const auto& m : M_.members()) {
      if (m.size() <= sigma.size() || !finset_subset(sigma, m)) continue;
      next_labels = finset_union(next_labels, finset_minus(m, sigma));
    }

    Entry e;
    if (!next_labels.empty()) {
      int best_val = -1;
      Label best_label = 0;
      for (Label a : next_labels) {
        FinSet ext = sigma;
        ext.insert(std::lower_bound(ext.begin(), ext.end(), a), a);
        const int v = eval(ext).value;
        if (v > best_val) {
          best_val = v;
          best_label = a;
        }
      }
      e.value = 1 + best_val;
      e.best = best_label;
    }
    return memo_.emplace(sigma, e).first->second;
  }

 private:
  const SetSystem& M_;
  std::map<FinSet, Entry> memo_;
};

}  // namespace detail

// Ord M: 0 iff M is empty, else 1 + max over occurring labels a of Ord M^a.
// Labels absent from every member have empty derivatives and cannot raise the
// value, so only occurring labels are scanned. Finite explicit systems always
// get a finite value, bounded by the largest member size.
inline OrdResult ord_system_with_chain(const SetSystem& M) {
  detail::OrdMemo memo(M);
  OrdResult res;
  res.value = memo.eval({}).value;
  FinSet sigma;
  while (true) {
    const auto& e = memo.eval(sigma);
    if (e.value == 0) break;
    res.chain.push_back(e.best);
    sigma.insert(std::lower_bound(sigma.begin(), sigma.end(), e.best), e.best);
  }
  return res;
}

inline int ord_system(const SetSystem& M) { return ord_system_with_chain(M).value; }

// Reference oracle: direct structural recursion on explicitly derived systems,
// no memoization. Bounded to small label universes to keep runtime sane.
inline int ord_system_naive(const SetSystem& M, int max_labels = 12) {
  const auto universe = M.labels();
  if (static_cast<int>(universe.size()) > max_labels)
    fail(Errc::budget, "ord_system_naive: universe of " + std::to_string(universe.size()) +
                           " labels exceeds bound " + std::to_string(max_labels));
  struct Rec {
    static int go(const SetSystem& S) {
      if (S.empty()) return 0;
      int best = 0;
      for (Label a : S.labels()) best = std::max(best, go(derive(S, FinSet{a})));
      return 1 + best;
    }
  };
  return Rec::go(M);
}

// Three-valued fragments report Ord as an interval: the definite members give
// the floor, the definite-plus-unknown members the ceiling.
inline std::pair<int, int> ord_interval(const SetSystem& definite_in,
                                        const SetSystem& possible_in) {
  require(definite_in.subset_of(possible_in), Errc::precondition,
          "ord_interval: definite_in must be a subset of possible_in");
  return {ord_system(definite_in), ord_system(possible_in)};
}

}  // namespace trasdim
