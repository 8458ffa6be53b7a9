#pragma once

// Compact hereditary families of finite subsets of N.
//
// A family is described structurally by one of a small catalog of kinds; each
// kind answers membership, witness search, Cantor-Bendixson derivative and
// index questions in closed form.

#include "mtsirelson/finvec.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace mtsirelson {

struct FamilyDescriptor;

/// All F with |F| <= k.
struct AnK {
  Index k = 1;
  friend bool operator==(const AnK&, const AnK&) = default;
};

/// All F with |F| <= min F.
struct Schreier {
  friend bool operator==(const Schreier&, const Schreier&) = default;
};

/// The empty set and all one-point sets.
struct Singletons {
  friend bool operator==(const Singletons&, const Singletons&) = default;
};

/// A finite hereditarily closed family. An empty member list denotes the empty family.
struct ExplicitFinite {
  std::vector<FinSet> members;  // sorted, closed under subsets
  friend bool operator==(const ExplicitFinite&, const ExplicitFinite&) = default;
};

/// All F contained in {1, 2^i} for some i.
struct PairTailPow2 {
  friend bool operator==(const PairTailPow2&, const PairTailPow2&) = default;
};

/// All F contained in {2i-1, 2i} for some i.
struct PairConsecutive {
  friend bool operator==(const PairConsecutive&, const PairConsecutive&) = default;
};

struct UnionOf {
  std::vector<FamilyDescriptor> parts;
  friend bool operator==(const UnionOf&, const UnionOf&);
};

struct FamilyDescriptor {
  std::variant<AnK, Schreier, Singletons, ExplicitFinite, PairTailPow2, PairConsecutive, UnionOf> kind;
  friend bool operator==(const FamilyDescriptor&, const FamilyDescriptor&) = default;
};

inline bool operator==(const UnionOf& a, const UnionOf& b) { return a.parts == b.parts; }

namespace family {

inline FamilyDescriptor ank(Index k) {
  if (k < 1) throw std::invalid_argument("A_k needs k >= 1");
  return {AnK{k}};
}
inline FamilyDescriptor schreier() { return {Schreier{}}; }
inline FamilyDescriptor singletons() { return {Singletons{}}; }
inline FamilyDescriptor pair_tail_pow2() { return {PairTailPow2{}}; }
inline FamilyDescriptor pair_consecutive() { return {PairConsecutive{}}; }
inline FamilyDescriptor union_of(std::vector<FamilyDescriptor> parts) {
  if (parts.empty()) throw std::invalid_argument("union of no families");
  return {UnionOf{std::move(parts)}};
}

/// Builds the hereditary closure of `members`. When the input was not already
/// closed, a note is appended to `warnings` (if given).
inline FamilyDescriptor explicit_finite(const std::vector<FinSet>& members, std::vector<std::string>* warnings = nullptr) {
  std::set<FinSet> closed;
  std::size_t added = 0;
  std::set<FinSet> given(members.begin(), members.end());
  for (const auto& m : members) {
    if (m.size() > 20) throw std::invalid_argument("explicit family member too large to close");
    const auto& e = m.elements();
    const std::size_t n = e.size();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      std::vector<Index> sub;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (1u << i)) sub.push_back(e[i]);
      }
      FinSet s(std::move(sub));
      if (closed.insert(s).second && !given.count(s)) ++added;
    }
  }
  if (added > 0 && warnings) {
    warnings->push_back("explicit family was not hereditary; closed by adding " + std::to_string(added) + " subset(s)");
  }
  return {ExplicitFinite{std::vector<FinSet>(closed.begin(), closed.end())}};
}

/// The empty family (no members at all).
inline FamilyDescriptor empty_family() { return {ExplicitFinite{}}; }

}  // namespace family

namespace detail {

inline bool is_pow2(Index m) { return m >= 1 && (m & (m - 1)) == 0; }

/// Largest power of two in [lo, hi], if any.
inline std::optional<Index> largest_pow2_in(Index lo, Index hi) {
  if (hi < 1 || hi < lo) return std::nullopt;
  Index p = 1;
  while (p <= hi / 2) p *= 2;
  if (p >= lo) return p;
  return std::nullopt;
}

inline bool lex_greater(const FinSet& a, const FinSet& b) { return a.elements() > b.elements(); }

}  // namespace detail

/// True iff F belongs to the family.
inline bool contains(const FamilyDescriptor& fam, const FinSet& f) {
  return std::visit(
      [&](const auto& k) -> bool {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, AnK>) {
          return static_cast<Index>(f.size()) <= k.k;
        } else if constexpr (std::is_same_v<T, Schreier>) {
          return f.empty() || static_cast<Index>(f.size()) <= f.min();
        } else if constexpr (std::is_same_v<T, Singletons>) {
          return f.size() <= 1;
        } else if constexpr (std::is_same_v<T, ExplicitFinite>) {
          return std::binary_search(k.members.begin(), k.members.end(), f);
        } else if constexpr (std::is_same_v<T, PairTailPow2>) {
          if (f.empty()) return true;
          if (f.size() == 1) return f.min() == 1 || detail::is_pow2(f.min());
          return f.size() == 2 && f.min() == 1 && detail::is_pow2(f.max());
        } else if constexpr (std::is_same_v<T, PairConsecutive>) {
          if (f.size() <= 1) return true;
          return f.size() == 2 && f.min() % 2 == 1 && f.max() == f.min() + 1;
        } else {
          return std::any_of(k.parts.begin(), k.parts.end(), [&](const auto& p) { return contains(p, f); });
        }
      },
      fam.kind);
}

/// Closed integer interval [lo, hi] from which one witness element must be drawn.
struct Box {
  Index lo;
  Index hi;
};

/// Lexicographically greatest {m_1 < ... < m_n} in the family with m_i in boxes[i];
/// nullopt when no member fits. Boxes must be nonempty and strictly increasing.
inline std::optional<FinSet> witness_in_boxes(const FamilyDescriptor& fam, std::span<const Box> boxes) {
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    if (boxes[i].lo < 1 || boxes[i].lo > boxes[i].hi) throw std::invalid_argument("witness box must be a nonempty interval of positive integers");
    if (i > 0 && boxes[i - 1].hi >= boxes[i].lo) throw std::invalid_argument("witness boxes must be strictly increasing");
  }
  const Index n = static_cast<Index>(boxes.size());
  auto highs = [&] {
    std::vector<Index> v;
    for (const auto& b : boxes) v.push_back(b.hi);
    return FinSet(std::move(v));
  };
  return std::visit(
      [&](const auto& k) -> std::optional<FinSet> {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, AnK>) {
          if (n <= k.k) return highs();
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, Schreier>) {
          if (n == 0 || n <= boxes[0].hi) return highs();
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, Singletons>) {
          if (n <= 1) return highs();
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, ExplicitFinite>) {
          std::optional<FinSet> best;
          for (const auto& m : k.members) {
            if (static_cast<Index>(m.size()) != n) continue;
            bool fits = true;
            for (std::size_t i = 0; i < boxes.size() && fits; ++i) {
              fits = boxes[i].lo <= m.elements()[i] && m.elements()[i] <= boxes[i].hi;
            }
            if (fits && (!best || detail::lex_greater(m, *best))) best = m;
          }
          return best;
        } else if constexpr (std::is_same_v<T, PairTailPow2>) {
          if (n == 0) return FinSet{};
          if (n == 1) {
            if (auto p = detail::largest_pow2_in(boxes[0].lo, boxes[0].hi)) return FinSet{*p};
            return std::nullopt;
          }
          if (n == 2 && boxes[0].lo == 1) {
            if (auto p = detail::largest_pow2_in(std::max<Index>(boxes[1].lo, 2), boxes[1].hi)) return FinSet{1, *p};
          }
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, PairConsecutive>) {
          if (n <= 1) return highs();
          // m_2 = m_1 + 1 with m_1 <= hi_1 < lo_2 forces m_1 = hi_1 and lo_2 = hi_1 + 1.
          const Index m1 = boxes[0].hi;
          if (n == 2 && m1 % 2 == 1 && boxes[1].lo == m1 + 1) return FinSet{m1, m1 + 1};
          return std::nullopt;
        } else {
          std::optional<FinSet> best;
          for (const auto& p : k.parts) {
            auto w = witness_in_boxes(p, boxes);
            if (w && (!best || detail::lex_greater(*w, *best))) best = w;
          }
          return best;
        }
      },
      fam.kind);
}

inline std::optional<FinSet> witness_in_boxes(const FamilyDescriptor& fam, std::initializer_list<Box> boxes) {
  return witness_in_boxes(fam, std::span<const Box>(boxes.begin(), boxes.size()));
}

struct Admissibility {
  bool admissible = false;
  std::optional<FinSet> witness;
  explicit operator bool() const { return admissible; }
};

/// (E_1, ..., E_n) is admissible iff some {m_1..m_n} in the family has
/// m_1 <= E_1 < m_2 <= E_2 < ... < m_n <= E_n. The empty sequence is vacuously admissible.
inline Admissibility admissible(const FamilyDescriptor& fam, std::span<const FinSet> sets) {
  std::vector<Box> boxes;
  boxes.reserve(sets.size());
  Index prev_max = 0;
  for (const auto& e : sets) {
    if (e.empty()) throw std::invalid_argument("admissibility is defined for nonempty sets");
    if (e.min() <= prev_max) throw std::invalid_argument("sets are not successive");
    boxes.push_back({prev_max + 1, e.min()});
    prev_max = e.max();
  }
  auto w = witness_in_boxes(fam, boxes);
  return {w.has_value(), std::move(w)};
}

inline Admissibility admissible(const FamilyDescriptor& fam, std::initializer_list<FinSet> sets) {
  return admissible(fam, std::span<const FinSet>(sets.begin(), sets.size()));
}

/// True iff the family is contained in {emptyset}.
inline bool within_empty_set(const FamilyDescriptor& fam) {
  if (const auto* e = std::get_if<ExplicitFinite>(&fam.kind)) {
    return std::all_of(e->members.begin(), e->members.end(), [](const FinSet& m) { return m.empty(); });
  }
  if (const auto* u = std::get_if<UnionOf>(&fam.kind)) {
    return std::all_of(u->parts.begin(), u->parts.end(), within_empty_set);
  }
  return false;
}

inline bool has_infinite_index(const FamilyDescriptor& fam) {
  if (std::holds_alternative<Schreier>(fam.kind)) return true;
  if (const auto* u = std::get_if<UnionOf>(&fam.kind)) {
    return std::any_of(u->parts.begin(), u->parts.end(), has_infinite_index);
  }
  return false;
}

/// First Cantor-Bendixson derivative: E survives iff E u {m} is a member for infinitely many m.
inline FamilyDescriptor derivative(const FamilyDescriptor& fam) {
  return std::visit(
      [&](const auto& k) -> FamilyDescriptor {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, AnK>) {
          if (k.k >= 2) return family::ank(k.k - 1);
          return {ExplicitFinite{{FinSet{}}}};
        } else if constexpr (std::is_same_v<T, Schreier>) {
          throw std::domain_error("the Schreier family has infinite index; its derivative is outside the descriptor catalog");
        } else if constexpr (std::is_same_v<T, Singletons>) {
          return {ExplicitFinite{{FinSet{}}}};
        } else if constexpr (std::is_same_v<T, ExplicitFinite>) {
          return family::empty_family();
        } else if constexpr (std::is_same_v<T, PairTailPow2>) {
          return {ExplicitFinite{{FinSet{}, FinSet{1}}}};
        } else if constexpr (std::is_same_v<T, PairConsecutive>) {
          return {ExplicitFinite{{FinSet{}}}};
        } else {
          std::vector<FamilyDescriptor> parts;
          std::vector<FinSet> finite_members;
          bool all_finite = true;
          for (const auto& p : k.parts) {
            FamilyDescriptor d = derivative(p);
            if (const auto* e = std::get_if<ExplicitFinite>(&d.kind)) {
              finite_members.insert(finite_members.end(), e->members.begin(), e->members.end());
            } else {
              all_finite = false;
              parts.push_back(std::move(d));
            }
          }
          std::sort(finite_members.begin(), finite_members.end());
          finite_members.erase(std::unique(finite_members.begin(), finite_members.end()), finite_members.end());
          FamilyDescriptor merged{ExplicitFinite{std::move(finite_members)}};
          if (all_finite) return merged;
          if (!std::get<ExplicitFinite>(merged.kind).members.empty()) parts.push_back(std::move(merged));
          if (parts.size() == 1) return parts.front();
          return family::union_of(std::move(parts));
        }
      },
      fam.kind);
}

/// Either a finite index n or "at least `cap`" (the derivative chain did not terminate within the cap).
struct IndexValue {
  std::optional<int> finite;
  int cap = 0;

  static IndexValue Finite(int n) { return {n, 0}; }
  static IndexValue InfiniteAboveCap(int cap) { return {std::nullopt, cap}; }
  bool is_finite() const { return finite.has_value(); }
  friend bool operator==(const IndexValue&, const IndexValue&) = default;
};

inline std::string to_string(const IndexValue& v) {
  return v.finite ? std::to_string(*v.finite) : ">=" + std::to_string(v.cap);
}

/// Least n with M^(n) contained in {emptyset}.
inline IndexValue index(const FamilyDescriptor& fam, int cap) {
  if (cap < 1) throw std::invalid_argument("index cap must be positive");
  if (has_infinite_index(fam)) return IndexValue::InfiniteAboveCap(cap);
  FamilyDescriptor current = fam;
  for (int step = 0; step <= cap; ++step) {
    if (within_empty_set(current)) return IndexValue::Finite(step);
    current = derivative(current);
  }
  return IndexValue::InfiniteAboveCap(cap);
}

struct NonsingletonProfile {
  bool infinite = false;
  std::size_t count = 0;
  Index max_element = 0;
  friend bool operator==(const NonsingletonProfile&, const NonsingletonProfile&) = default;
};

namespace detail {
inline void collect_nonsingletons(const FamilyDescriptor& fam, std::set<FinSet>& out, bool& infinite) {
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, AnK>) {
          if (k.k >= 2) infinite = true;
        } else if constexpr (std::is_same_v<T, ExplicitFinite>) {
          for (const auto& m : k.members) {
            if (m.size() >= 2) out.insert(m);
          }
        } else if constexpr (std::is_same_v<T, UnionOf>) {
          for (const auto& p : k.parts) collect_nonsingletons(p, out, infinite);
        } else if constexpr (std::is_same_v<T, Singletons>) {
        } else {
          infinite = true;
        }
      },
      fam.kind);
}
}  // namespace detail

/// Number of members with at least two elements and their largest element, or the infinite flag.
inline NonsingletonProfile nonsingleton_profile(const FamilyDescriptor& fam) {
  std::set<FinSet> sets;
  bool infinite = false;
  detail::collect_nonsingletons(fam, sets, infinite);
  if (infinite) return {true, 0, 0};
  Index mx = 0;
  for (const auto& s : sets) mx = std::max(mx, s.max());
  return {false, sets.size(), mx};
}

/// n is a gap point when no member M has min M <= n < max M.
inline bool is_gap_point(const FamilyDescriptor& fam, Index n) {
  return std::visit(
      [&](const auto& k) -> bool {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, AnK>) {
          return k.k == 1;
        } else if constexpr (std::is_same_v<T, Schreier>) {
          return n < 2;
        } else if constexpr (std::is_same_v<T, Singletons>) {
          return true;
        } else if constexpr (std::is_same_v<T, ExplicitFinite>) {
          return std::none_of(k.members.begin(), k.members.end(),
                              [&](const FinSet& m) { return !m.empty() && m.min() <= n && n < m.max(); });
        } else if constexpr (std::is_same_v<T, PairTailPow2>) {
          return false;
        } else if constexpr (std::is_same_v<T, PairConsecutive>) {
          return n % 2 == 0;
        } else {
          return std::all_of(k.parts.begin(), k.parts.end(), [&](const auto& p) { return is_gap_point(p, n); });
        }
      },
      fam.kind);
}

enum class Tribool { False, True, Unknown };

inline std::string to_string(Tribool t) {
  switch (t) {
    case Tribool::False: return "false";
    case Tribool::True: return "true";
    default: return "unknown";
  }
}

struct GapReport {
  Tribool unbounded = Tribool::Unknown;
  std::vector<Index> samples;  // first few gap points
};

/// Decides whether gap points are unbounded (for every N some n >= N is a gap point).
inline Tribool gap_rule(const FamilyDescriptor& fam) {
  return std::visit(
      [&](const auto& k) -> Tribool {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, AnK>) {
          return k.k == 1 ? Tribool::True : Tribool::False;
        } else if constexpr (std::is_same_v<T, Schreier> || std::is_same_v<T, PairTailPow2>) {
          return Tribool::False;
        } else if constexpr (std::is_same_v<T, Singletons> || std::is_same_v<T, ExplicitFinite> ||
                             std::is_same_v<T, PairConsecutive>) {
          return Tribool::True;
        } else {
          // A part that straddles every large n does so for the union too; parts whose gap
          // sets are cofinite or the even numbers intersect in an infinite set.
          Tribool out = Tribool::True;
          for (const auto& p : k.parts) {
            Tribool t = gap_rule(p);
            if (t == Tribool::False) return Tribool::False;
            if (t == Tribool::Unknown) out = Tribool::Unknown;
          }
          return out;
        }
      },
      fam.kind);
}

inline GapReport gap_points_unbounded(const FamilyDescriptor& fam, std::size_t samples = 5, Index scan_limit = 256) {
  GapReport report{gap_rule(fam), {}};
  for (Index n = 1; n <= scan_limit && report.samples.size() < samples; ++n) {
    if (is_gap_point(fam, n)) report.samples.push_back(n);
  }
  return report;
}

inline std::string describe(const FamilyDescriptor& fam) {
  return std::visit(
      [](const auto& k) -> std::string {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, AnK>) {
          return "A_" + std::to_string(k.k);
        } else if constexpr (std::is_same_v<T, Schreier>) {
          return "Schreier";
        } else if constexpr (std::is_same_v<T, Singletons>) {
          return "Singletons";
        } else if constexpr (std::is_same_v<T, ExplicitFinite>) {
          std::string out = "Explicit{";
          for (std::size_t i = 0; i < k.members.size(); ++i) out += (i ? "," : "") + to_string(k.members[i]);
          return out + "}";
        } else if constexpr (std::is_same_v<T, PairTailPow2>) {
          return "PairTailPow2";
        } else if constexpr (std::is_same_v<T, PairConsecutive>) {
          return "PairConsecutive";
        } else {
          std::string out = "Union(";
          for (std::size_t i = 0; i < k.parts.size(); ++i) out += (i ? ", " : "") + describe(k.parts[i]);
          return out + ")";
        }
      },
      fam.kind);
}

}  // namespace mtsirelson
