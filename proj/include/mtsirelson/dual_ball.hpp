#pragma once

// The norming set K and an independent norm oracle built from it.
//
// K_0 = {+-e_n}; K_{s+1} adds theta_k (f_1 + ... + f_d) for successive f_i in K_s
// whose supports are admissible for M_k. The norm is the sup of f(x) over K.
// Internal nodes always have at least two children: a one-child application
// theta_k f is dominated by f itself.

#include "mtsirelson/norm_engine.hpp"

#include <cctype>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace mtsirelson {

/// A functional in K as a tree: a signed leaf e_n, or weight * (child_1 + ... + child_d).
struct FunctionalTree {
  int sign = 1;
  Index position = 0;  // leaves only
  Index tag = 0;       // internal: entry number (finite mixed) or k (A_k scheme); 0 when unknown
  Rational weight{1};
  std::vector<FunctionalTree> children;

  bool is_leaf() const { return children.empty(); }

  static FunctionalTree leaf(Index position, int sign = 1) {
    if (position < 1) throw std::invalid_argument("leaf position must be >= 1");
    FunctionalTree f;
    f.position = position;
    f.sign = sign < 0 ? -1 : 1;
    return f;
  }

  static FunctionalTree node(Index tag, Rational weight, std::vector<FunctionalTree> children) {
    if (children.size() < 2) throw std::invalid_argument("internal functionals need at least two children");
    FunctionalTree f;
    f.tag = tag;
    f.weight = std::move(weight);
    f.children = std::move(children);
    return f;
  }

  friend bool operator==(const FunctionalTree&, const FunctionalTree&) = default;
};

inline FinSet support(const FunctionalTree& f) {
  if (f.is_leaf()) return FinSet{f.position};
  std::vector<Index> out;
  for (const auto& c : f.children) {
    const FinSet s = support(c);
    out.insert(out.end(), s.begin(), s.end());
  }
  return FinSet(std::move(out));
}

inline int height(const FunctionalTree& f) {
  int h = 0;
  for (const auto& c : f.children) h = std::max(h, 1 + height(c));
  return h;
}

/// Coefficients of f as a vector (the functional acts by the usual pairing).
inline FinVec coefficients(const FunctionalTree& f) {
  if (f.is_leaf()) return FinVec{{f.position, Rational(f.sign)}};
  FinVec sum;
  for (const auto& c : f.children) sum = sum + coefficients(c);
  return sum.scaled(f.weight);
}

inline Rational evaluate(const FunctionalTree& f, const FinVec& x) {
  if (f.is_leaf()) return f.sign * x[f.position];
  Rational s = 0;
  for (const auto& c : f.children) s += evaluate(c, x);
  return f.weight * s;
}

/// Text form such as "1/2*(e2+e3)" or "e1-e4".
inline std::string to_string(const FunctionalTree& f) {
  if (f.is_leaf()) return (f.sign < 0 ? "-e" : "e") + std::to_string(f.position);
  Rational w = f.weight;
  w.canonicalize();
  std::string out = w.get_den() == 1 ? w.get_num().get_str() : to_string(w);
  out += "*(";
  for (std::size_t i = 0; i < f.children.size(); ++i) {
    std::string child = to_string(f.children[i]);
    if (i > 0 && child.front() != '-') out += "+";
    out += child;
  }
  return out + ")";
}

namespace detail {

class FunctionalParser {
 public:
  explicit FunctionalParser(std::string_view text) : text_(text) {}

  FunctionalTree parse() {
    FunctionalTree f = term();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("functional syntax error at offset " + std::to_string(pos_) + ": " + what);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string digits() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected digits");
    return std::string(text_.substr(start, pos_ - start));
  }

  FunctionalTree term() {
    int sign = eat('-') ? -1 : 1;
    if (eat('e')) return FunctionalTree::leaf(std::stoll(digits()), sign);
    if (sign < 0) fail("signs apply to basis functionals only");
    std::string w = digits();
    if (eat('/')) w += "/" + digits();
    if (!eat('*') || !eat('(')) fail("expected '*('");
    std::vector<FunctionalTree> children;
    children.push_back(term());
    while (true) {
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '-') {
        children.push_back(term());
      } else if (eat('+')) {
        children.push_back(term());
      } else {
        break;
      }
    }
    if (!eat(')')) fail("expected ')'");
    return FunctionalTree::node(0, parse_rational(w), std::move(children));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

/// (family, theta, tag) triples generating K; the A_k scheme is cut off at k = m,
/// where theta is replaced by sup_{j >= m} theta_j (no split of m points needs more).
struct KRule {
  FamilyDescriptor family;
  Rational theta;
  Index tag;
};

inline std::vector<KRule> k_rules(const SpaceSpec& space, std::size_t m) {
  std::vector<KRule> rules;
  if (const auto* fm = std::get_if<FiniteMixed>(&space.form)) {
    for (std::size_t e = 0; e < fm->entries.size(); ++e) {
      rules.push_back({fm->entries[e].family, fm->entries[e].theta, static_cast<Index>(e + 1)});
    }
    return rules;
  }
  const auto& seq = std::get<AdmissibleSeq>(space.form).coeffs;
  const auto len = finite_length(seq);
  const Index top = static_cast<Index>(std::max<std::size_t>(m, 2));
  for (Index k = 2; k <= top; ++k) {
    if (len && static_cast<std::size_t>(k) > *len) break;
    const bool last = k == top;
    auto theta = last ? envelope_at(seq, k) : std::optional<RatInterval>(theta_at(seq, k));
    if (!theta->is_point()) throw std::domain_error("the dual-ball oracle needs rational coefficients");
    rules.push_back({family::ank(k), theta->lo, last ? envelope_argmax(seq, k) : k});
  }
  return rules;
}

}  // namespace detail

inline FunctionalTree parse_functional(std::string_view text) { return detail::FunctionalParser(text).parse(); }

struct OracleOptions {
  std::size_t max_support = 12;
  std::size_t node_budget = 200000;
};

/// All functionals of K_depth supported in `bound`, deduplicated by coefficient vector.
inline std::vector<FunctionalTree> enumerate_K(const SpaceSpec& space, const FinSet& bound, int depth,
                                               const OracleOptions& options = {}) {
  if (depth < 0) throw std::invalid_argument("depth must be non-negative");
  const auto rules = detail::k_rules(space, bound.size());
  std::vector<FunctionalTree> all;
  std::set<std::string> seen;
  auto add = [&](FunctionalTree f) {
    if (seen.insert(to_string(coefficients(f))).second) {
      if (all.size() >= options.node_budget) throw BudgetExceeded("functional enumeration exceeded the node budget");
      all.push_back(std::move(f));
    }
  };
  for (Index n : bound) {
    add(FunctionalTree::leaf(n, 1));
    add(FunctionalTree::leaf(n, -1));
  }
  for (int level = 1; level <= depth; ++level) {
    const std::vector<FunctionalTree> previous = all;
    std::vector<FinSet> supports;
    for (const auto& f : previous) supports.push_back(support(f));
    const std::size_t before = all.size();
    std::vector<std::size_t> chain;
    // Extend successive chains f_{c_1} < f_{c_2} < ... and emit every admissible combination of length >= 2.
    auto extend = [&](auto&& self) -> void {
      if (chain.size() >= 2) {
        std::vector<FinSet> sets;
        for (auto c : chain) sets.push_back(supports[c]);
        for (const auto& rule : rules) {
          if (admissible(rule.family, sets)) {
            std::vector<FunctionalTree> kids;
            for (auto c : chain) kids.push_back(previous[c]);
            add(FunctionalTree::node(rule.tag, rule.theta, std::move(kids)));
          }
        }
      }
      const Index floor = chain.empty() ? 0 : supports[chain.back()].max();
      for (std::size_t c = 0; c < previous.size(); ++c) {
        if (supports[c].min() > floor) {
          chain.push_back(c);
          self(self);
          chain.pop_back();
        }
      }
    };
    extend(extend);
    if (all.size() == before) break;
  }
  return all;
}

struct OracleResult {
  Rational value;
  FunctionalTree witness;
};

/// sup{f(x) : f in K} computed over support subsets of x: for each subset S the best
/// value of a functional supported exactly on S, improved until nothing changes.
class DualBallOracle {
 public:
  explicit DualBallOracle(SpaceSpec space, OracleOptions options = {}) : space_(std::move(space)), options_(options) {
    validate(space_);
  }

  OracleResult norm(const FinVec& x) {
    if (x.is_zero()) return {Rational(0), FunctionalTree::leaf(1)};
    if (x.support_size() > options_.max_support) {
      throw BudgetExceeded("oracle support " + std::to_string(x.support_size()) + " exceeds the budget of " +
                           std::to_string(options_.max_support));
    }
    const std::vector<Index> pos = x.support().elements();
    const std::size_t m = pos.size();
    const auto& seqs = sequences(pos);
    std::vector<std::optional<Rational>> best(std::size_t{1} << m);
    std::vector<FunctionalTree> tree(best.size());
    for (std::size_t i = 0; i < m; ++i) {
      const Rational a = x[pos[i]];
      best[std::size_t{1} << i] = abs(a);
      tree[std::size_t{1} << i] = FunctionalTree::leaf(pos[i], a < 0 ? -1 : 1);
    }
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& s : seqs) {
        Rational sum = 0;
        bool ok = true;
        for (auto part : s.parts) {
          if (!best[part]) {
            ok = false;
            break;
          }
          sum += *best[part];
        }
        if (!ok) continue;
        Rational v = s.weight * sum;
        if (!best[s.mask] || v > *best[s.mask]) {
          best[s.mask] = v;
          std::vector<FunctionalTree> kids;
          for (auto part : s.parts) kids.push_back(tree[part]);
          tree[s.mask] = FunctionalTree::node(s.tag, s.weight, std::move(kids));
          changed = true;
        }
      }
    }
    std::size_t arg = 0;
    for (std::size_t mask = 1; mask < best.size(); ++mask) {
      if (best[mask] && (!best[arg] || *best[mask] > *best[arg])) arg = mask;
    }
    return {*best[arg], tree[arg]};
  }

 private:
  struct Sequence {
    std::vector<std::uint32_t> parts;  // successive nonempty subsets as bitmasks over the support
    std::uint32_t mask;
    Rational weight;
    Index tag;
  };

  /// Admissible sequences of >= 2 successive subsets, each with its best weight; cached per support.
  const std::vector<Sequence>& sequences(const std::vector<Index>& pos) {
    if (auto it = cache_.find(pos); it != cache_.end()) return it->second;
    const auto rules = detail::k_rules(space_, pos.size());
    std::vector<Sequence> out;
    const std::size_t m = pos.size();
    std::vector<std::uint32_t> parts;
    auto to_set = [&](std::uint32_t mask) {
      std::vector<Index> e;
      for (std::size_t i = 0; i < m; ++i) {
        if (mask & (1u << i)) e.push_back(pos[i]);
      }
      return FinSet(std::move(e));
    };
    // Each next part starts after the previous part's last index.
    auto grow = [&](auto&& self, std::size_t from) -> void {
      if (parts.size() >= 2) {
        std::vector<FinSet> sets;
        std::uint32_t mask = 0;
        for (auto p : parts) {
          sets.push_back(to_set(p));
          mask |= p;
        }
        std::optional<Rational> weight;
        Index tag = 0;
        for (const auto& r : rules) {
          if ((!weight || r.theta > *weight) && admissible(r.family, sets)) {
            weight = r.theta;
            tag = r.tag;
          }
        }
        if (weight) out.push_back({parts, mask, *weight, tag});
      }
      for (std::size_t first = from; first < m; ++first) {
        for (std::size_t last = first; last < m; ++last) {
          // Parts are arbitrary subsets with min at `first` and max at `last`.
          const std::uint32_t inner = last > first + 1 ? (((1u << (last - first - 1)) - 1) << (first + 1)) : 0;
          for (std::uint32_t sub = inner;; sub = (sub - 1) & inner) {
            const std::uint32_t part = sub | (1u << first) | (1u << last);
            parts.push_back(part);
            self(self, last + 1);
            parts.pop_back();
            if (sub == 0) break;
          }
        }
      }
    };
    grow(grow, 0);
    // Smaller unions first so a single sweep already sees improved parts.
    std::stable_sort(out.begin(), out.end(),
                     [](const Sequence& a, const Sequence& b) { return __builtin_popcount(a.mask) < __builtin_popcount(b.mask); });
    return cache_.emplace(pos, std::move(out)).first->second;
  }

  SpaceSpec space_;
  OracleOptions options_;
  std::map<std::vector<Index>, std::vector<Sequence>> cache_;
};

inline OracleResult oracle_norm(const SpaceSpec& space, const FinVec& x, const OracleOptions& options = {}) {
  return DualBallOracle(space, options).norm(x);
}

/// Level s holds the subtrees of height <= s whose parent has height > s; the last level is {f}.
inline std::vector<std::vector<FunctionalTree>> analysis(const FunctionalTree& f) {
  const int top = height(f);
  std::vector<std::vector<FunctionalTree>> levels(static_cast<std::size_t>(top) + 1);
  auto walk = [&](auto&& self, const FunctionalTree& node, int parent_height) -> void {
    const int h = height(node);
    for (int s = h; s < parent_height; ++s) levels[static_cast<std::size_t>(s)].push_back(node);
    for (const auto& c : node.children) self(self, c, h);
  };
  walk(walk, f, top + 1);
  return levels;
}

}  // namespace mtsirelson
