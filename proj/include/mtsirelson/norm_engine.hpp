#pragma once

// Exact evaluation of the mixed Tsirelson norm on finitely supported vectors.
//
// Work happens on the support s_0 < ... < s_{m-1} of |x|. N(lo, hi) is the norm
// of x restricted to the support points lo..hi. A split into d >= 2 parts is
// described by start indices lo <= j_1 < ... < j_d <= hi; part i runs from j_i to
// j_{i+1} - 1 and the last part ends at hi. Points before j_1 are dropped. The
// split is admissible for a family iff some member {m_1 < ... < m_d} has
// s_{j_i - 1} < m_i <= s_{j_i} (with s_{j_1 - 1} read as 0).
//
//   cardinality families A_k: feasible iff d <= k; j_1 = lo is optimal
//   Schreier:                feasible iff d <= s_{j_1}
//   positional families:     enumerate members and locate the parts
//
// U_d(j, hi) = max_t N(j, t-1) + U_{d-1}(t, hi) with U_1 = N holds the best
// d-part sum, so the whole table costs O(m^2 * m * dmax) additions.

#include "mtsirelson/arith.hpp"
#include "mtsirelson/finvec.hpp"
#include "mtsirelson/space.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace mtsirelson {

/// A computation would exceed a configured size budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One node of the partition realizing a norm value.
struct PartitionNode {
  Index tag = 0;         // 0 for a sup-norm leaf; else entry number (finite mixed) or k (A_k scheme)
  std::string rule;      // "sup" or the family admitting the split
  Rational weight{1};    // theta applied at this node (lower endpoint when certified)
  FinSet support;        // support points of x covered by this node
  std::optional<FinSet> marks;  // admissibility witness {m_1 < ... < m_d}
  Index argmax = 0;      // leaves: coordinate attaining the sup
  std::vector<PartitionNode> children;
};

struct NormResult {
  RatInterval value;
  std::optional<PartitionNode> witness;

  bool is_exact() const { return value.is_point(); }
};

struct IteratedNorms {
  std::vector<RatInterval> values;  // |x|_0 ... |x|_sMax
  std::optional<int> stabilized_at;  // least s with table_s = table_{s+1} on every support segment
};

struct LambdaTable {
  std::vector<RatInterval> values;  // values[n-1] = lambda_n
  std::string path;                 // "fast" or "generic"

  const RatInterval& at(std::size_t n) const { return values.at(n - 1); }
  std::size_t size() const { return values.size(); }
};

enum class LambdaPath { Auto, Fast, Generic };

struct EngineOptions {
  bool certified = false;    // allow irrational weights, returning enclosures
  bool fixed_point = false;  // use the directed-rounding grid even for rational weights
  unsigned precision = 64;   // enclosure width exponent for individual weights
  std::size_t max_support = 128;
  std::size_t max_cells = std::size_t{1} << 21;  // U-table entries per evaluation
};

namespace detail {

struct WitnessRule {
  FamilyDescriptor family;
  RatInterval theta;
  Index tag;
  std::string label;
};

/// Weights available for each split shape, before conversion to an arithmetic policy.
struct WeightPlan {
  std::vector<std::optional<RatInterval>> card;  // card[d]: best theta over cardinality families admitting d parts
  std::vector<Index> card_tag;
  std::vector<std::string> card_label;
  std::optional<RatInterval> schreier;
  Index schreier_tag = 0;
  std::string schreier_label;
  std::vector<WitnessRule> witness;
  std::size_t dmax = 1;
  bool exact = true;
};

inline void flatten(const FamilyDescriptor& fam, std::vector<const FamilyDescriptor*>& out) {
  if (const auto* u = std::get_if<UnionOf>(&fam.kind)) {
    for (const auto& p : u->parts) flatten(p, out);
  } else {
    out.push_back(&fam);
  }
}

inline WeightPlan build_plan(const SpaceSpec& space, std::size_t m, unsigned precision) {
  WeightPlan plan;
  plan.card.assign(m + 1, std::nullopt);
  plan.card_tag.assign(m + 1, 0);
  plan.card_label.assign(m + 1, "");
  if (const auto* fm = std::get_if<FiniteMixed>(&space.form)) {
    for (std::size_t e = 0; e < fm->entries.size(); ++e) {
      const Index tag = static_cast<Index>(e + 1);
      const Rational& theta = fm->entries[e].theta;
      std::vector<const FamilyDescriptor*> parts;
      flatten(fm->entries[e].family, parts);
      for (const auto* p : parts) {
        if (const auto* a = std::get_if<AnK>(&p->kind)) {
          for (std::size_t d = 2; d <= m && static_cast<Index>(d) <= a->k; ++d) {
            if (!plan.card[d] || theta > plan.card[d]->lo) {
              plan.card[d] = RatInterval(theta);
              plan.card_tag[d] = tag;
              plan.card_label[d] = describe(*p);
            }
            plan.dmax = std::max(plan.dmax, d);
          }
        } else if (std::holds_alternative<Schreier>(p->kind)) {
          if (!plan.schreier || theta > plan.schreier->lo) {
            plan.schreier = RatInterval(theta);
            plan.schreier_tag = tag;
            plan.schreier_label = "Schreier";
          }
          plan.dmax = std::max(plan.dmax, m);
        } else if (!std::holds_alternative<Singletons>(p->kind)) {
          plan.witness.push_back({*p, RatInterval(theta), tag, describe(*p)});
        }
      }
    }
    return plan;
  }
  const auto& seq = std::get<AdmissibleSeq>(space.form).coeffs;
  for (std::size_t d = 2; d <= m; ++d) {
    auto env = envelope_at(seq, static_cast<Index>(d), precision);
    if (!env) break;
    plan.card[d] = *env;
    plan.exact = plan.exact && env->is_point();
    const Index k = envelope_argmax(seq, static_cast<Index>(d));
    plan.card_tag[d] = k;
    plan.card_label[d] = "A_" + std::to_string(k);
    plan.dmax = d;
  }
  return plan;
}

template <class V>
struct Rules {
  std::vector<std::optional<V>> card;
  std::optional<V> schreier;
  struct Witness {
    const WitnessRule* rule;
    V theta;
  };
  std::vector<Witness> witness;
  std::size_t dmax = 1;
  const WeightPlan* plan = nullptr;
};

/// Converts plan weights to a policy; `upper` selects the upper enclosure endpoints.
template <class A>
Rules<typename A::Value> convert(const WeightPlan& plan, bool upper) {
  auto pick = [&](const RatInterval& iv) {
    if constexpr (A::exact) {
      return A::from_rational(iv.exact());
    } else {
      return A::from_rational(upper ? iv.hi : iv.lo);
    }
  };
  Rules<typename A::Value> r;
  r.plan = &plan;
  r.dmax = plan.dmax;
  r.card.resize(plan.card.size());
  for (std::size_t d = 0; d < plan.card.size(); ++d) {
    if (plan.card[d]) r.card[d] = pick(*plan.card[d]);
  }
  if (plan.schreier) r.schreier = pick(*plan.schreier);
  for (const auto& w : plan.witness) r.witness.push_back({&w, pick(w.theta)});
  return r;
}

/// Candidate witnesses {m_1 < ... < m_d}, d >= 2, for a positional family on the support window.
inline std::vector<std::vector<Index>> candidate_marks(const FamilyDescriptor& fam, const std::vector<Index>& pos,
                                                       std::size_t lo, std::size_t hi) {
  std::vector<std::vector<Index>> out;
  if (std::holds_alternative<PairTailPow2>(fam.kind)) {
    for (Index p = 2; p <= pos[hi]; p *= 2) out.push_back({1, p});
  } else if (std::holds_alternative<PairConsecutive>(fam.kind)) {
    for (std::size_t j = lo; j < hi; ++j) {
      if (pos[j] % 2 == 1) out.push_back({pos[j], pos[j] + 1});
    }
  } else if (const auto* e = std::get_if<ExplicitFinite>(&fam.kind)) {
    for (const auto& mem : e->members) {
      if (mem.size() >= 2 && mem.max() <= pos[hi]) out.push_back(mem.elements());
    }
  } else {
    throw std::logic_error("no witness enumeration for " + describe(fam));
  }
  return out;
}

/// Start indices of the parts cut by `marks` inside the window, or nullopt if some part is empty.
inline std::optional<std::vector<std::size_t>> parts_for_marks(const std::vector<Index>& marks, const std::vector<Index>& pos,
                                                              std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> starts;
  starts.reserve(marks.size());
  for (Index w : marks) {
    auto it = std::lower_bound(pos.begin() + static_cast<std::ptrdiff_t>(lo), pos.begin() + static_cast<std::ptrdiff_t>(hi) + 1, w);
    starts.push_back(static_cast<std::size_t>(it - pos.begin()));
  }
  for (std::size_t i = 0; i + 1 < starts.size(); ++i) {
    if (starts[i] >= starts[i + 1]) return std::nullopt;
  }
  if (starts.back() > hi) return std::nullopt;
  return starts;
}

template <class A>
class SegmentSolver {
 public:
  using V = typename A::Value;

  SegmentSolver(const Rules<V>& rules, std::vector<Index> pos, std::vector<V> val)
      : rules_(rules), pos_(std::move(pos)), val_(std::move(val)), m_(pos_.size()) {
    dmax_ = std::min(rules_.dmax, m_);
    n_.assign(m_ * m_, V(0));
    sup_.assign(m_ * m_, V(0));
    sup_arg_.assign(m_ * m_, 0);
    if (dmax_ >= 2) {
      u_.assign((dmax_ - 1) * m_ * m_, V(0));
      u_arg_.assign((dmax_ - 1) * m_ * m_, 0);
    }
    if (rules_.schreier) {
      sch_.assign(m_ * m_, std::nullopt);
      sch_j_.assign(m_ * m_, 0);
      sch_d_.assign(m_ * m_, 0);
    }
    choice_.assign(m_ * m_, Choice{});
    for (std::size_t lo = 0; lo < m_; ++lo) {
      for (std::size_t hi = lo; hi < m_; ++hi) {
        const std::size_t k = idx(lo, hi);
        if (hi == lo || val_[hi] > sup_[idx(lo, hi - 1)]) {
          sup_[k] = val_[hi];
          sup_arg_[k] = static_cast<std::uint32_t>(hi);
        } else {
          sup_[k] = sup_[idx(lo, hi - 1)];
          sup_arg_[k] = sup_arg_[idx(lo, hi - 1)];
        }
      }
    }
  }

  std::size_t size() const { return m_; }
  const V& value(std::size_t lo, std::size_t hi) const { return n_[idx(lo, hi)]; }
  const std::vector<V>& table() const { return n_; }

  /// Least fixed point on every segment.
  void solve() {
    for (std::size_t hi = 0; hi < m_; ++hi) {
      for (std::size_t lo = hi + 1; lo-- > 0;) {
        build_u(lo, hi, n_);
        auto [v, c] = best_at(lo, hi, n_);
        n_[idx(lo, hi)] = v;
        choice_[idx(lo, hi)] = std::move(c);
      }
    }
  }

  /// The sup-norm table |.|_0 on every segment.
  std::vector<V> base_level() const { return sup_; }

  /// One application of the recursion to the table `prev`: max(prev, best split over prev).
  std::vector<V> next_level(const std::vector<V>& prev) {
    std::vector<V> next(prev.size());
    for (std::size_t hi = 0; hi < m_; ++hi) {
      for (std::size_t lo = hi + 1; lo-- > 0;) {
        build_u(lo, hi, prev);
        V v = best_at(lo, hi, prev).first;
        next[idx(lo, hi)] = prev[idx(lo, hi)] > v ? prev[idx(lo, hi)] : v;
      }
    }
    return next;
  }

  PartitionNode witness(std::size_t lo, std::size_t hi) const {
    const Choice& c = choice_[idx(lo, hi)];
    PartitionNode node;
    node.support = FinSet(std::vector<Index>(pos_.begin() + static_cast<std::ptrdiff_t>(lo),
                                              pos_.begin() + static_cast<std::ptrdiff_t>(hi) + 1));
    const WeightPlan& plan = *rules_.plan;
    std::vector<std::size_t> starts;
    switch (c.kind) {
      case Choice::Sup:
        node.rule = "sup";
        node.argmax = pos_[sup_arg_[idx(lo, hi)]];
        return node;
      case Choice::Card:
      case Choice::Schreier: {
        std::size_t j = c.j;
        starts.push_back(j);
        for (std::size_t d = c.d; d >= 2; --d) {
          j = u_arg_[uidx(d, j, hi)];
          starts.push_back(j);
        }
        if (c.kind == Choice::Card) {
          node.tag = plan.card_tag[c.d];
          node.rule = plan.card_label[c.d];
          node.weight = plan.card[c.d]->lo;
        } else {
          node.tag = plan.schreier_tag;
          node.rule = plan.schreier_label;
          node.weight = plan.schreier->lo;
        }
        std::vector<Index> marks;
        for (auto s : starts) marks.push_back(pos_[s]);
        node.marks = FinSet(std::move(marks));
        break;
      }
      case Choice::Witness: {
        const WitnessRule& rule = *rules_.witness[c.rule].rule;
        node.tag = rule.tag;
        node.rule = rule.label;
        node.weight = rule.theta.lo;
        node.marks = FinSet(c.marks);
        starts = *parts_for_marks(c.marks, pos_, lo, hi);
        break;
      }
    }
    for (std::size_t i = 0; i < starts.size(); ++i) {
      const std::size_t end = i + 1 < starts.size() ? starts[i + 1] - 1 : hi;
      node.children.push_back(witness(starts[i], end));
    }
    return node;
  }

 private:
  struct Choice {
    enum Kind : std::uint8_t { Sup, Card, Schreier, Witness } kind = Sup;
    std::size_t d = 0;
    std::size_t j = 0;
    std::size_t rule = 0;
    std::vector<Index> marks;
  };

  std::size_t idx(std::size_t lo, std::size_t hi) const { return lo * m_ + hi; }
  std::size_t uidx(std::size_t d, std::size_t j, std::size_t hi) const { return ((d - 2) * m_ + j) * m_ + hi; }

  const V& u_at(std::size_t d, std::size_t j, std::size_t hi, const std::vector<V>& table) const {
    return d == 1 ? table[idx(j, hi)] : u_[uidx(d, j, hi)];
  }

  void build_u(std::size_t j, std::size_t hi, const std::vector<V>& table) {
    const std::size_t len = hi - j + 1;
    const std::size_t top = std::min(dmax_, len);
    for (std::size_t d = 2; d <= top; ++d) {
      std::optional<V> best;
      std::size_t arg = 0;
      for (std::size_t t = j + 1; t + d - 2 <= hi; ++t) {
        V cand = table[idx(j, t - 1)] + u_at(d - 1, t, hi, table);
        if (!best || cand > *best) {
          best = std::move(cand);
          arg = t;
        }
      }
      u_[uidx(d, j, hi)] = std::move(*best);
      u_arg_[uidx(d, j, hi)] = static_cast<std::uint32_t>(arg);
    }
    if (rules_.schreier) {
      std::optional<V> best;
      std::size_t best_d = 0, best_j = j;
      std::size_t cap = top;
      if (pos_[j] < static_cast<Index>(cap)) cap = static_cast<std::size_t>(pos_[j]);
      for (std::size_t d = 2; d <= cap; ++d) {
        const V& v = u_[uidx(d, j, hi)];
        if (!best || v > *best) {
          best = v;
          best_d = d;
        }
      }
      if (j + 1 <= hi && sch_[idx(j + 1, hi)] && (!best || *sch_[idx(j + 1, hi)] > *best)) {
        best = sch_[idx(j + 1, hi)];
        best_d = sch_d_[idx(j + 1, hi)];
        best_j = sch_j_[idx(j + 1, hi)];
      }
      sch_[idx(j, hi)] = std::move(best);
      sch_d_[idx(j, hi)] = best_d;
      sch_j_[idx(j, hi)] = best_j;
    }
  }

  std::pair<V, Choice> best_at(std::size_t lo, std::size_t hi, const std::vector<V>& table) const {
    V best = sup_[idx(lo, hi)];
    Choice choice;
    const std::size_t len = hi - lo + 1;
    if (len < 2) return {best, choice};
    const std::size_t top = std::min(dmax_, len);
    for (std::size_t d = 2; d <= top; ++d) {
      if (d >= rules_.card.size() || !rules_.card[d]) continue;
      V cand = A::mul(*rules_.card[d], u_[uidx(d, lo, hi)]);
      if (cand > best) {
        best = std::move(cand);
        choice = Choice{Choice::Card, d, lo, 0, {}};
      }
    }
    if (rules_.schreier && sch_[idx(lo, hi)]) {
      V cand = A::mul(*rules_.schreier, *sch_[idx(lo, hi)]);
      if (cand > best) {
        best = std::move(cand);
        choice = Choice{Choice::Schreier, sch_d_[idx(lo, hi)], sch_j_[idx(lo, hi)], 0, {}};
      }
    }
    for (std::size_t r = 0; r < rules_.witness.size(); ++r) {
      for (auto& marks : candidate_marks(rules_.witness[r].rule->family, pos_, lo, hi)) {
        auto starts = parts_for_marks(marks, pos_, lo, hi);
        if (!starts) continue;
        V sum(0);
        for (std::size_t i = 0; i < starts->size(); ++i) {
          const std::size_t end = i + 1 < starts->size() ? (*starts)[i + 1] - 1 : hi;
          sum = sum + table[idx((*starts)[i], end)];
        }
        V cand = A::mul(rules_.witness[r].theta, sum);
        if (cand > best) {
          best = std::move(cand);
          choice = Choice{Choice::Witness, marks.size(), (*starts)[0], r, std::move(marks)};
        }
      }
    }
    return {best, std::move(choice)};
  }

  const Rules<V>& rules_;
  std::vector<Index> pos_;
  std::vector<V> val_;
  std::size_t m_;
  std::size_t dmax_ = 1;
  std::vector<V> n_, sup_;
  std::vector<std::uint32_t> sup_arg_;
  std::vector<V> u_;
  std::vector<std::uint32_t> u_arg_;
  std::vector<std::optional<V>> sch_;
  std::vector<std::size_t> sch_j_, sch_d_;
  std::vector<Choice> choice_;
};

/// lambda_n = max(1, max_d c_d * G_d(n)) where G_d(n) is the best sum of lambdas over d-part compositions of n.
template <class A>
std::vector<typename A::Value> fast_lambda(const Rules<typename A::Value>& rules, std::size_t n_max) {
  using V = typename A::Value;
  const V one = A::from_rational(Rational(1));
  const std::size_t dmax = std::min(rules.dmax, n_max);
  std::vector<V> lam(n_max + 1, V(0));
  // g[d][n], d >= 2
  std::vector<std::vector<V>> g(dmax + 1, std::vector<V>(n_max + 1, V(0)));
  for (std::size_t n = 1; n <= n_max; ++n) {
    V best = one;
    for (std::size_t d = 2; d <= std::min(dmax, n); ++d) {
      std::optional<V> gd;
      for (std::size_t last = 1; last + d - 1 <= n; ++last) {
        const V& head = d == 2 ? lam[n - last] : g[d - 1][n - last];
        V cand = head + lam[last];
        if (!gd || cand > *gd) gd = std::move(cand);
      }
      g[d][n] = std::move(*gd);
      if (d < rules.card.size() && rules.card[d]) {
        V c = A::mul(*rules.card[d], g[d][n]);
        if (c > best) best = std::move(c);
      }
    }
    lam[n] = best;
  }
  return lam;
}

}  // namespace detail

/// Norm evaluation for one space. Results are cached and the cache is shared
/// across threads; inserts are idempotent since values are deterministic.
class NormEngine {
 public:
  explicit NormEngine(SpaceSpec space, EngineOptions options = {}) : space_(std::move(space)), options_(options) {
    validate(space_);
  }

  const SpaceSpec& space() const { return space_; }
  const EngineOptions& options() const { return options_; }

  NormResult norm(const FinVec& x) const {
    if (x.is_zero()) return {RatInterval(Rational(0)), std::nullopt};
    const std::string key = to_string(x);
    {
      std::lock_guard<std::mutex> lock(mutex_);
      if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    NormResult result = compute(x);
    std::lock_guard<std::mutex> lock(mutex_);
    cache_.emplace(key, result);
    return result;
  }

  /// Norm of sum_{i=a}^{b} e_i.
  NormResult segment_sum_norm(Index a, Index b) const {
    if (a < 1 || a > b) throw std::invalid_argument("segment needs 1 <= a <= b");
    return norm(FinVec::segment(a, b));
  }

  /// Evaluates many vectors, spreading them over `jobs` threads.
  std::vector<NormResult> norm_batch(const std::vector<FinVec>& xs, unsigned jobs = 1) const {
    std::vector<NormResult> out(xs.size());
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(xs.size())));
    if (jobs <= 1) {
      for (std::size_t i = 0; i < xs.size(); ++i) out[i] = norm(xs[i]);
      return out;
    }
    std::vector<std::exception_ptr> errors(jobs);
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < jobs; ++w) {
      workers.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < xs.size(); i += jobs) out[i] = norm(xs[i]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : workers) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    return out;
  }

  /// |x|_0, ..., |x|_{s_max} from the level recursion.
  IteratedNorms norm_iterated(const FinVec& x, int s_max) const {
    if (s_max < 0) throw std::invalid_argument("s_max must be non-negative");
    IteratedNorms out;
    if (x.is_zero()) {
      out.values.assign(static_cast<std::size_t>(s_max) + 1, RatInterval(Rational(0)));
      out.stabilized_at = 0;
      return out;
    }
    const auto plan = prepare(x.support_size());
    if (exact_route(plan)) return iterate<ExactArith>(plan, x, s_max, false);
    IteratedNorms lo = iterate<FixedArith<false>>(plan, x, s_max, false);
    IteratedNorms hi = iterate<FixedArith<true>>(plan, x, s_max, true);
    for (std::size_t s = 0; s < lo.values.size(); ++s) out.values.emplace_back(lo.values[s].lo, hi.values[s].hi);
    if (lo.stabilized_at && hi.stabilized_at) out.stabilized_at = std::max(*lo.stabilized_at, *hi.stabilized_at);
    return out;
  }

  /// lambda_1 ... lambda_n.
  LambdaTable lambda_table(std::size_t n, LambdaPath path = LambdaPath::Auto) const {
    if (n < 1) throw std::invalid_argument("lambda table needs N >= 1");
    const bool invariant = is_position_invariant(space_);
    if (path == LambdaPath::Fast && !invariant) {
      throw std::invalid_argument("the fast lambda path needs cardinality-only families");
    }
    if (path == LambdaPath::Auto) path = invariant ? LambdaPath::Fast : LambdaPath::Generic;
    LambdaTable table;
    if (path == LambdaPath::Fast) {
      table.path = "fast";
      const auto plan = detail::build_plan(space_, n, options_.precision);
      if (exact_route(plan)) {
        auto rules = detail::convert<ExactArith>(plan, false);
        auto lam = detail::fast_lambda<ExactArith>(rules, n);
        for (std::size_t i = 1; i <= n; ++i) table.values.emplace_back(lam[i]);
      } else {
        if (n >= (std::size_t{1} << FixedArith<false>::kMagnitudeBits)) throw BudgetExceeded("lambda table too long");
        auto lo_rules = detail::convert<FixedArith<false>>(plan, false);
        auto hi_rules = detail::convert<FixedArith<true>>(plan, true);
        auto lo = detail::fast_lambda<FixedArith<false>>(lo_rules, n);
        auto hi = detail::fast_lambda<FixedArith<true>>(hi_rules, n);
        for (std::size_t i = 1; i <= n; ++i) {
          table.values.emplace_back(FixedArith<false>::to_rational(lo[i]), FixedArith<true>::to_rational(hi[i]));
        }
      }
      return table;
    }
    table.path = "generic";
    // Prefix segments of sum_{i=1}^{n} e_i are exactly the vectors sum_{i=1}^{j} e_i.
    const FinVec ones = FinVec::segment(1, static_cast<Index>(n));
    const auto plan = prepare(n);
    auto collect = [&](auto arith, bool upper) {
      using A = decltype(arith);
      auto rules = detail::convert<A>(plan, upper);
      detail::SegmentSolver<A> solver(rules, positions(ones), values<A>(ones));
      solver.solve();
      std::vector<Rational> out;
      for (std::size_t j = 0; j < n; ++j) out.push_back(A::to_rational(solver.value(0, j)));
      return out;
    };
    if (exact_route(plan)) {
      for (auto& v : collect(ExactArith{}, false)) table.values.emplace_back(v);
    } else {
      auto lo = collect(FixedArith<false>{}, false);
      auto hi = collect(FixedArith<true>{}, true);
      for (std::size_t j = 0; j < n; ++j) table.values.emplace_back(lo[j], hi[j]);
    }
    return table;
  }

 private:
  /// True for exact rational evaluation; otherwise the fixed-point enclosure route is taken.
  bool exact_route(const detail::WeightPlan& plan) const {
    if (!plan.exact && !options_.certified) {
      throw std::domain_error("space has irrational coefficients; enable certified mode to get an enclosure");
    }
    return plan.exact && !options_.fixed_point;
  }

  detail::WeightPlan prepare(std::size_t m) const {
    if (m > options_.max_support) {
      throw BudgetExceeded("support size " + std::to_string(m) + " exceeds the budget of " +
                           std::to_string(options_.max_support));
    }
    auto plan = detail::build_plan(space_, m, options_.precision);
    const std::size_t dm = std::min(plan.dmax, m);
    if (dm >= 2 && (dm - 1) * m * m > options_.max_cells) {
      throw BudgetExceeded("partition table of " + std::to_string((dm - 1) * m * m) + " cells exceeds the budget");
    }
    return plan;
  }

  static std::vector<Index> positions(const FinVec& x) {
    std::vector<Index> pos;
    for (const auto& [i, a] : x.entries()) pos.push_back(i);
    return pos;
  }

  template <class A>
  static std::vector<typename A::Value> values(const FinVec& x) {
    std::vector<typename A::Value> val;
    for (const auto& [i, a] : x.entries()) val.push_back(A::from_rational(abs(a)));
    return val;
  }

  static void guard_magnitude(const FinVec& x) {
    Integer bound;
    mpz_ui_pow_ui(bound.get_mpz_t(), 2, FixedArith<false>::kMagnitudeBits);
    if (x.l1_norm() >= Rational(bound)) throw BudgetExceeded("coefficients too large for certified evaluation");
  }

  NormResult compute(const FinVec& x) const {
    const auto plan = prepare(x.support_size());
    if (exact_route(plan)) {
      auto rules = detail::convert<ExactArith>(plan, false);
      detail::SegmentSolver<ExactArith> solver(rules, positions(x), values<ExactArith>(x));
      solver.solve();
      const std::size_t last = solver.size() - 1;
      return {RatInterval(solver.value(0, last)), solver.witness(0, last)};
    }
    guard_magnitude(x);
    auto lo_rules = detail::convert<FixedArith<false>>(plan, false);
    auto hi_rules = detail::convert<FixedArith<true>>(plan, true);
    detail::SegmentSolver<FixedArith<false>> lo(lo_rules, positions(x), values<FixedArith<false>>(x));
    detail::SegmentSolver<FixedArith<true>> hi(hi_rules, positions(x), values<FixedArith<true>>(x));
    lo.solve();
    hi.solve();
    const std::size_t last = lo.size() - 1;
    return {RatInterval(FixedArith<false>::to_rational(lo.value(0, last)), FixedArith<true>::to_rational(hi.value(0, last))),
            lo.witness(0, last)};
  }

  template <class A>
  IteratedNorms iterate(const detail::WeightPlan& plan, const FinVec& x, int s_max, bool upper) const {
    if constexpr (!A::exact) guard_magnitude(x);
    auto rules = detail::convert<A>(plan, upper);
    detail::SegmentSolver<A> solver(rules, positions(x), values<A>(x));
    const std::size_t last = solver.size() - 1;
    IteratedNorms out;
    auto level = solver.base_level();
    for (int s = 0; s <= s_max; ++s) {
      out.values.emplace_back(A::to_rational(level[last]));
      if (s == s_max && out.stabilized_at) break;
      auto next = solver.next_level(level);
      if (!out.stabilized_at && next == level) out.stabilized_at = s;
      level = std::move(next);
    }
    return out;
  }

  SpaceSpec space_;
  EngineOptions options_;
  mutable std::mutex mutex_;
  mutable std::map<std::string, NormResult> cache_;
};

inline NormResult norm(const SpaceSpec& space, const FinVec& x, EngineOptions options = {}) {
  return NormEngine(space, options).norm(x);
}

}  // namespace mtsirelson
