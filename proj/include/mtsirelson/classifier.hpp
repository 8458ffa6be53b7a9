#pragma once

// Structural verdicts for mixed Tsirelson spaces.
//
// Each verdict names the rule that produced it. Rule tags:
//   theta-one-high-index              some theta_k = 1 with i(M_k) >= 2: l1-saturated
//   theta-one-finite-nonsingletons-*  theta = 1 families with finitely many non-singletons are removable
//   theta-one-infinite-nonsingletons  theta = 1 families with infinitely many non-singletons: contains l1
//   unbounded-gap-points              unboundedly many gap points: contains c0
//   theta-one-gap-dichotomy           all theta = 1 and gap points bounded: l1-saturated
//   finite-index-c0 / finite-index-lp / finite-index-reflexivity
//                                     theta_k in (0,1), finite indices n_k
//   dyadic-block-l1-ratio             2^k / ||sum_{2^k < i <= 2^{k+1}} e_i|| grows (evidence)
//   admissible-seq-*                  rules for the A_k scheme
//   geometric-theta-limit             lim (theta_{m^l})^{1/l} = 1 for the catalog form

#include "mtsirelson/certified.hpp"
#include "mtsirelson/norm_engine.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mtsirelson {

enum class Property {
  C0Saturated,
  LpSaturated,
  L1Saturated,
  ContainsL1,
  ContainsC0,
  IsometricC0,
  IsometricL1,
  IsomorphicL1,
  Undetermined,
  NotIsomorphicToL1,
  L1FinitelyBlockRepresented,
};

inline std::string to_string(Property p) {
  switch (p) {
    case Property::C0Saturated: return "c0Saturated";
    case Property::LpSaturated: return "lpSaturated";
    case Property::L1Saturated: return "l1Saturated";
    case Property::ContainsL1: return "containsL1";
    case Property::ContainsC0: return "containsC0";
    case Property::IsometricC0: return "isometricC0";
    case Property::IsometricL1: return "isometricL1";
    case Property::IsomorphicL1: return "isomorphicL1";
    case Property::Undetermined: return "undetermined";
    case Property::NotIsomorphicToL1: return "notIsomorphicToL1";
    case Property::L1FinitelyBlockRepresented: return "l1FinitelyBlockRepresented";
  }
  return "unknown";
}

struct Verdict {
  Property property;
  std::string rule;
  std::string detail;
  bool evidence_only = false;  // supported by finite computation rather than an exact rule
};

/// p = 1 / (1 - log_n(1/theta)) for an entry with n * theta > 1.
struct PValue {
  Index n = 0;
  Rational theta;
  std::optional<Rational> exact;
  RatInterval enclosure;
  std::string expression;
};

/// A small table attached to a report.
struct Evidence {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct ClassificationReport {
  std::string space;
  std::vector<Verdict> verdicts;
  std::optional<PValue> p;
  std::optional<bool> reflexive;
  std::string reflexive_rule;
  std::vector<std::string> reductions;
  std::vector<Evidence> evidence;
  std::vector<std::string> diagnostics;

  bool has(Property p) const {
    return std::any_of(verdicts.begin(), verdicts.end(), [&](const Verdict& v) { return v.property == p; });
  }
  const Verdict* find(Property p) const {
    for (const auto& v : verdicts) {
      if (v.property == p) return &v;
    }
    return nullptr;
  }
  bool undetermined() const { return has(Property::Undetermined); }
};

struct ClassifierOptions {
  int index_cap = 32;
  int probe_depth = 16;    // lambda table length attached to A_k scheme reports
  int dyadic_levels = 5;   // k = 1..levels for the dyadic block ratio
};

namespace detail {

/// Prime exponent vector of a positive rational; nullopt if a cofactor resists factoring.
inline std::optional<std::map<Integer, Integer>> prime_exponents(const Rational& q) {
  std::map<Integer, Integer> out;
  auto factor = [&](Integer n, int sign) -> bool {
    for (unsigned long p = 2; p <= (1ul << 20) && n > 1; ++p) {
      if (Integer(p) * Integer(p) > n) break;
      while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
        n /= p;
        out[Integer(p)] += sign;
      }
    }
    if (n > 1) {
      if (mpz_probab_prime_p(n.get_mpz_t(), 30) == 0) return false;
      out[n] += sign;
    }
    return true;
  };
  if (!factor(q.get_num(), 1) || !factor(q.get_den(), -1)) return std::nullopt;
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

/// log_b(a) when it is rational.
inline std::optional<Rational> rational_log(const Rational& a, const Rational& b) {
  auto va = prime_exponents(a);
  auto vb = prime_exponents(b);
  if (!va || !vb || vb->empty()) return std::nullopt;
  const auto& [p0, w0] = *vb->begin();
  Rational ratio(va->count(p0) ? va->at(p0) : Integer(0), w0);
  ratio.canonicalize();
  std::set<Integer> primes;
  for (const auto& [p, e] : *va) primes.insert(p);
  for (const auto& [p, e] : *vb) primes.insert(p);
  for (const auto& p : primes) {
    const Integer ea = va->count(p) ? va->at(p) : Integer(0);
    const Integer eb = vb->count(p) ? vb->at(p) : Integer(0);
    if (Rational(ea) != ratio * Rational(eb)) return std::nullopt;
  }
  return ratio;
}

/// Enclosure of log_n(1/theta) at the given working precision.
inline RatInterval log_ratio_enclosure(Index n, const Rational& theta, mpfr_prec_t bits) {
  RatInterval num = certified::ln_enclosure(Rational(1) / theta, bits);
  RatInterval den = certified::ln_enclosure(Rational(n), bits);
  return divide_positive(num, den);
}

inline PValue make_p(Index n, const Rational& theta) {
  PValue p;
  p.n = n;
  p.theta = theta;
  const Rational inv = Rational(1) / theta;
  p.expression = "1/(1-log_" + std::to_string(n) + "(" + to_string(inv) + "))";
  if (auto l = rational_log(inv, Rational(n))) {
    Rational v = Rational(1) / (Rational(1) - *l);
    v.canonicalize();
    p.exact = v;
    p.enclosure = RatInterval(v);
    return p;
  }
  for (mpfr_prec_t bits = 96;; bits *= 2) {
    RatInterval l = log_ratio_enclosure(n, theta, bits);
    if (l.hi < 1) {
      p.enclosure = RatInterval(Rational(1) / (Rational(1) - l.lo), Rational(1) / (Rational(1) - l.hi));
      return p;
    }
    if (bits > 8192) throw std::runtime_error("p enclosure did not separate from infinity");
  }
}

/// Sign of p(a) - p(b); nullopt when the enclosures never separate and no exact identity applies.
inline std::optional<int> compare_p(const PValue& a, const PValue& b) {
  if (a.exact && b.exact) return *a.exact < *b.exact ? -1 : (*a.exact > *b.exact ? 1 : 0);
  // log(1/ta) log(nb) = log(1/tb) log(na) holds when the symmetrized prime-exponent tensors agree.
  auto va = prime_exponents(Rational(1) / a.theta), vb = prime_exponents(Rational(1) / b.theta);
  auto na = prime_exponents(Rational(a.n)), nb = prime_exponents(Rational(b.n));
  if (va && vb && na && nb) {
    std::map<std::pair<Integer, Integer>, Integer> tensor;
    auto accumulate = [&](const auto& x, const auto& y, int sign) {
      for (const auto& [p, e] : x) {
        for (const auto& [q, f] : y) tensor[std::minmax(p, q)] += sign * e * f;
      }
    };
    accumulate(*va, *nb, 1);
    accumulate(*vb, *na, -1);
    if (std::all_of(tensor.begin(), tensor.end(), [](const auto& kv) { return kv.second == 0; })) return 0;
  }
  for (mpfr_prec_t bits = 96; bits <= 16384; bits *= 2) {
    RatInterval la = a.exact ? RatInterval(Rational(1) - Rational(1) / *a.exact) : log_ratio_enclosure(a.n, a.theta, bits);
    RatInterval lb = b.exact ? RatInterval(Rational(1) - Rational(1) / *b.exact) : log_ratio_enclosure(b.n, b.theta, bits);
    if (la.hi < lb.lo) return -1;
    if (lb.hi < la.lo) return 1;
  }
  return std::nullopt;
}

inline std::string p_text(const PValue& p) {
  if (p.exact) return to_string(*p.exact);
  return p.expression + " ~ " + to_decimal(p.enclosure.lo, 9);
}

}  // namespace detail

/// Ratios 2^k / ||sum_{i=2^k+1}^{2^{k+1}} e_i|| for k = 1..levels.
inline Evidence dyadic_block_ratios(const SpaceSpec& space, int levels, bool* increasing = nullptr) {
  Evidence ev{"dyadic-block-ratio", {"k", "block_norm", "l1_over_norm"}, {}};
  EngineOptions opts;
  opts.certified = true;
  NormEngine engine(space, opts);
  std::optional<Rational> prev;
  bool up = true;
  for (int k = 1; k <= levels; ++k) {
    const Index a = (Index{1} << k) + 1, b = Index{1} << (k + 1);
    const RatInterval v = engine.segment_sum_norm(a, b).value;
    const RatInterval ratio = divide_positive(RatInterval(Rational(Index{1} << k)), v);
    ev.rows.push_back({std::to_string(k), to_string(v), to_string(ratio)});
    if (prev && !(ratio.lo > *prev)) up = false;
    prev = ratio.hi;
  }
  if (increasing) *increasing = up && levels >= 2;
  return ev;
}

inline ClassificationReport classify_finite(const SpaceSpec& space, const ClassifierOptions& options = {});

namespace detail {

inline void add_l1_evidence(ClassificationReport& report, const SpaceSpec& space, const ClassifierOptions& options) {
  bool increasing = false;
  try {
    report.evidence.push_back(dyadic_block_ratios(space, options.dyadic_levels, &increasing));
  } catch (const BudgetExceeded& e) {
    report.diagnostics.push_back(std::string("dyadic probe skipped: ") + e.what());
    return;
  }
  if (increasing) {
    report.verdicts.push_back({Property::NotIsomorphicToL1, "dyadic-block-l1-ratio",
                               "l1-sum over norm of dyadic blocks grows strictly for k = 1.." +
                                   std::to_string(options.dyadic_levels),
                               true});
  }
}

inline void apply_finite_index_rules(ClassificationReport& report, const std::vector<MixedEntry>& entries,
                                 const std::vector<IndexValue>& idx) {
  bool c0 = true;
  std::vector<PValue> ps;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const Index n = *idx[k].finite;
    if (Rational(n) * entries[k].theta > 1) {
      c0 = false;
      ps.push_back(make_p(n, entries[k].theta));
    }
  }
  if (c0) {
    report.verdicts.push_back({Property::C0Saturated, "finite-index-c0", "theta_k * i(M_k) <= 1 for every entry"});
    report.reflexive = false;
    report.reflexive_rule = "finite-index-reflexivity";
    return;
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < ps.size(); ++i) {
    auto c = compare_p(ps[i], ps[best]);
    if (!c) report.diagnostics.push_back("p values " + ps[i].expression + " and " + ps[best].expression + " not separated");
    if (c && *c < 0) best = i;
  }
  report.p = ps[best];
  report.verdicts.push_back({Property::LpSaturated, "finite-index-lp", "p = " + p_text(ps[best])});
  report.reflexive = true;
  report.reflexive_rule = "finite-index-reflexivity";
}

}  // namespace detail

inline ClassificationReport classify_finite(const SpaceSpec& space, const ClassifierOptions& options) {
  const auto* fm = std::get_if<FiniteMixed>(&space.form);
  if (!fm) throw std::invalid_argument("classify_finite needs a finite mixed space");
  validate(space);
  ClassificationReport report;
  report.space = describe(space);
  const auto& entries = fm->entries;

  std::vector<IndexValue> idx;
  Evidence index_table{"indices", {"entry", "family", "theta", "index"}, {}};
  for (std::size_t k = 0; k < entries.size(); ++k) {
    idx.push_back(index(entries[k].family, options.index_cap));
    index_table.rows.push_back(
        {std::to_string(k + 1), describe(entries[k].family), to_string(entries[k].theta), to_string(idx.back())});
  }
  report.evidence.push_back(index_table);

  std::vector<std::size_t> J;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (entries[k].theta == 1) J.push_back(k);
  }

  for (auto k : J) {
    if (!idx[k].is_finite() || *idx[k].finite >= 2) {
      report.verdicts.push_back({Property::L1Saturated, "theta-one-high-index",
                                 "entry " + std::to_string(k + 1) + " has theta = 1 and index " + to_string(idx[k])});
      report.reflexive = false;
      report.reflexive_rule = "theta-one-high-index";
      detail::add_l1_evidence(report, space, options);
      return report;
    }
  }

  if (!J.empty()) {
    std::vector<FamilyDescriptor> jf, all;
    for (auto k : J) jf.push_back(entries[k].family);
    for (const auto& e : entries) all.push_back(e.family);
    const NonsingletonProfile prof = nonsingleton_profile(family::union_of(jf));
    if (!prof.infinite) {
      const std::string why = "theta = 1 families have " + std::to_string(prof.count) +
                              " non-singleton set(s), max element " + std::to_string(prof.max_element);
      if (J.size() == entries.size()) {
        report.verdicts.push_back({Property::C0Saturated, "theta-one-finite-nonsingletons-all", why + "; isomorphic to c0"});
        report.reflexive = false;
        report.reflexive_rule = "theta-one-finite-nonsingletons-all";
        return report;
      }
      std::vector<MixedEntry> rest;
      for (std::size_t k = 0; k < entries.size(); ++k) {
        if (entries[k].theta != 1) rest.push_back(entries[k]);
      }
      ClassificationReport inner = classify_finite(SpaceSpec{FiniteMixed{rest}}, options);
      inner.space = report.space;
      inner.reductions.insert(inner.reductions.begin(), "theta-one-finite-nonsingletons-drop: dropped theta = 1 entries (" + why + ")");
      inner.evidence.insert(inner.evidence.begin(), index_table);
      return inner;
    }
    report.verdicts.push_back(
        {Property::ContainsL1, "theta-one-infinite-nonsingletons", "theta = 1 families have infinitely many non-singleton sets"});
    report.reflexive = false;
    report.reflexive_rule = "theta-one-infinite-nonsingletons";
    const GapReport gaps = gap_points_unbounded(family::union_of(all));
    std::string samples;
    for (auto g : gaps.samples) samples += (samples.empty() ? "" : ",") + std::to_string(g);
    if (gaps.unbounded == Tribool::True) {
      report.verdicts.push_back({Property::ContainsC0, "unbounded-gap-points", "gap points include " + samples + ", ..."});
    } else if (gaps.unbounded == Tribool::False && J.size() == entries.size()) {
      report.verdicts.push_back({Property::L1Saturated, "theta-one-gap-dichotomy", "all theta = 1 and gap points are bounded"});
    } else if (gaps.unbounded == Tribool::Unknown) {
      report.diagnostics.push_back("gap-point rule unavailable for this family combination");
    }
    return report;
  }

  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (!idx[k].is_finite()) {
      const bool infinite = has_infinite_index(entries[k].family);
      report.verdicts.push_back({Property::Undetermined, infinite ? "infinite-index" : "index-cap",
                                 infinite ? "infinite-index family with theta < 1; the finite-index classification does not apply"
                                          : "index of entry " + std::to_string(k + 1) + " exceeds the cap " +
                                                std::to_string(options.index_cap)});
      return report;
    }
  }
  detail::apply_finite_index_rules(report, entries, idx);
  return report;
}

/// Decides whether the catalog form satisfies theta_k <= 1/k for every k.
inline bool below_harmonic(const CoefficientSeq& seq) {
  return std::visit(
      [](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, InvLinear>) {
          return true;
        } else if constexpr (std::is_same_v<T, PowerLaw>) {
          return s.alpha >= 1;  // gamma * k^(1-alpha) <= gamma <= 1
        } else if constexpr (std::is_same_v<T, ExplicitList>) {
          if (s.tail) return false;
          for (std::size_t k = 0; k < s.values.size(); ++k) {
            if (s.values[k] * Rational(static_cast<long>(k + 1)) > 1) return false;
          }
          return true;
        } else {
          return false;  // constants and log powers stay above 1/k for large k
        }
      },
      seq);
}

inline ClassificationReport classify_admissible_seq(const SpaceSpec& space, const ClassifierOptions& options = {}) {
  const auto* as = std::get_if<AdmissibleSeq>(&space.form);
  if (!as) throw std::invalid_argument("classify_admissible_seq needs an A_k scheme");
  validate(space);
  const CoefficientSeq& raw = as->coeffs;

  if (auto len = finite_length(raw)) {
    std::vector<MixedEntry> entries;
    const auto& list = std::get<ExplicitList>(raw);
    for (std::size_t k = 0; k < *len; ++k) entries.push_back({family::ank(static_cast<Index>(k + 1)), list.values[k]});
    ClassificationReport r = classify_finite(SpaceSpec{FiniteMixed{entries}}, options);
    r.space = describe(space);
    r.reductions.insert(r.reductions.begin(), "finite coefficient list read as entries (A_k, theta_k)");
    return r;
  }

  ClassificationReport report;
  report.space = describe(space);
  const CoefficientSeq seq = envelope(raw);
  if (!(seq == raw)) report.reductions.push_back("envelope: theta replaced by " + describe(seq));

  const RatInterval theta2 = *envelope_at(seq, 2);
  if (theta2.is_point() && theta2.lo == 1) {
    report.verdicts.push_back({Property::IsometricL1, "admissible-seq-theta2-one", "theta'_2 = 1"});
    report.reflexive = false;
    report.reflexive_rule = "admissible-seq-theta2-one";
  } else if (below_harmonic(seq)) {
    report.verdicts.push_back({Property::IsometricC0, "admissible-seq-below-harmonic", "theta_k <= 1/k for every k"});
    report.reflexive = false;
    report.reflexive_rule = "admissible-seq-below-harmonic";
  } else if (infimum(seq) > 0) {
    report.verdicts.push_back(
        {Property::IsomorphicL1, "admissible-seq-positive-infimum", "inf theta_k = " + to_string(infimum(seq)) + " > 0"});
    report.reflexive = false;
    report.reflexive_rule = "admissible-seq-positive-infimum";
  } else if (const auto* lp = std::get_if<InvLogPow>(&seq)) {
    report.verdicts.push_back({Property::L1FinitelyBlockRepresented, "geometric-theta-limit",
                               "(theta_{m^l})^{1/l} = log2(1+m^l)^{-r/l} -> 1 with r = " + to_string(lp->r)});
  } else if (const auto* pw = std::get_if<PowerLaw>(&seq)) {
    report.verdicts.push_back({Property::Undetermined, "geometric-theta-limit",
                               "(theta_{m^l})^{1/l} -> m^{-alpha} < 1 with alpha = " + to_string(pw->alpha) + "; the sufficient condition does not apply"});
  } else {
    report.verdicts.push_back({Property::Undetermined, "geometric-theta-limit", "no closed-form limit for this form"});
  }

  if (options.probe_depth > 0) {
    Evidence geo{"geometric-theta", {"l", "theta_2^l", "root_l_lo"}, {}};
    for (int l = 1; l <= std::min(options.probe_depth, 40); ++l) {
      const RatInterval t = theta_at(seq, Index{1} << l, 96);
      const RatInterval r = certified::root_enclosure(t, static_cast<unsigned long>(l), 96);
      geo.rows.push_back({std::to_string(l), to_decimal(t.lo, 9), to_decimal(r.lo, 9)});
    }
    report.evidence.push_back(geo);
    EngineOptions eo;
    eo.certified = true;
    const LambdaTable lam = NormEngine(space, eo).lambda_table(static_cast<std::size_t>(options.probe_depth));
    Evidence ev{"lambda", {"n", "lambda"}, {}};
    for (std::size_t n = 1; n <= lam.size(); ++n) ev.rows.push_back({std::to_string(n), to_string(lam.at(n))});
    report.evidence.push_back(ev);
  }
  return report;
}

inline ClassificationReport classify(const SpaceSpec& space, const ClassifierOptions& options = {}) {
  return is_finite_mixed(space) ? classify_finite(space, options) : classify_admissible_seq(space, options);
}

struct RatioProbe {
  std::vector<RatInterval> ratios;  // lambda_l / lambda'_l for l = 1..N
  std::string trend;                // identical, increasing, decreasing or mixed
};

inline RatioProbe lambda_ratio_probe(const SpaceSpec& a, const SpaceSpec& b, std::size_t n) {
  EngineOptions eo;
  eo.certified = true;
  const LambdaTable la = NormEngine(a, eo).lambda_table(n);
  const LambdaTable lb = NormEngine(b, eo).lambda_table(n);
  RatioProbe probe;
  for (std::size_t l = 1; l <= n; ++l) probe.ratios.push_back(divide_positive(la.at(l), lb.at(l)));
  bool ones = true, up = true, down = true;
  for (std::size_t i = 0; i < probe.ratios.size(); ++i) {
    if (!(probe.ratios[i].is_point() && probe.ratios[i].lo == 1)) ones = false;
    if (i > 0) {
      if (!(probe.ratios[i].lo > probe.ratios[i - 1].hi)) up = false;
      if (!(probe.ratios[i].hi < probe.ratios[i - 1].lo)) down = false;
    }
  }
  probe.trend = ones ? "identical" : (up && n >= 2) ? "increasing" : (down && n >= 2) ? "decreasing" : "mixed";
  return probe;
}

enum class Comparison { TotallyIncomparable, NotTotallyIncomparable, EvidenceOnly };

inline std::string to_string(Comparison c) {
  switch (c) {
    case Comparison::TotallyIncomparable: return "totallyIncomparable";
    case Comparison::NotTotallyIncomparable: return "notTotallyIncomparable";
    default: return "evidenceOnly";
  }
}

struct ComparisonReport {
  Comparison verdict = Comparison::EvidenceOnly;
  std::string fired;  // rule tag
  std::string detail;
  std::optional<RatioProbe> probe;
  ClassificationReport a, b;
};

namespace detail {

inline RatInterval log_power_limit(mpfr_prec_t bits) {
  RatInterval ln2 = certified::ln2_enclosure(bits);
  return {3 * ln2.lo - 1, 3 * ln2.hi - 1};
}

/// True iff 0 < r < 3 ln 2 - 1 (decided by refinement; r is rational so equality never occurs).
inline bool in_log_power_catalog(const SpaceSpec& s) {
  const auto* as = std::get_if<AdmissibleSeq>(&s.form);
  if (!as) return false;
  const auto* lp = std::get_if<InvLogPow>(&as->coeffs);
  if (!lp || lp->r <= 0) return false;
  for (mpfr_prec_t bits = 64; bits <= 4096; bits *= 2) {
    RatInterval c = log_power_limit(bits);
    if (lp->r < c.lo) return true;
    if (lp->r > c.hi) return false;
  }
  return false;
}

/// Classic spaces every subspace of the space contains ("c0", "l1", "lp").
inline std::optional<std::string> saturating_classic(const ClassificationReport& r) {
  for (const auto& v : r.verdicts) {
    if (v.evidence_only) continue;
    switch (v.property) {
      case Property::C0Saturated:
      case Property::IsometricC0: return "c0";
      case Property::L1Saturated:
      case Property::IsometricL1:
      case Property::IsomorphicL1: return "l1";
      case Property::LpSaturated: return "lp";
      default: break;
    }
  }
  return std::nullopt;
}

inline std::set<std::string> contained_classics(const ClassificationReport& r) {
  std::set<std::string> out;
  if (auto s = saturating_classic(r)) out.insert(*s);
  if (r.has(Property::ContainsL1)) out.insert("l1");
  if (r.has(Property::ContainsC0)) out.insert("c0");
  return out;
}

inline bool finite_index_regime(const SpaceSpec& s, int cap, std::vector<Index>& n) {
  const auto* fm = std::get_if<FiniteMixed>(&s.form);
  if (!fm) return false;
  n.clear();
  for (const auto& e : fm->entries) {
    if (e.theta >= 1) return false;
    IndexValue v = index(e.family, cap);
    if (!v.is_finite()) return false;
    n.push_back(*v.finite);
  }
  return true;
}

}  // namespace detail

inline ComparisonReport compare(const SpaceSpec& a, const SpaceSpec& b, const ClassifierOptions& options = {},
                                std::size_t probe_n = 16) {
  ComparisonReport out;
  out.a = classify(a, options);
  out.b = classify(b, options);
  auto done = [&](Comparison c, std::string rule, std::string detail) {
    out.verdict = c;
    out.fired = std::move(rule);
    out.detail = std::move(detail);
    return out;
  };

  if (a == b) return done(Comparison::NotTotallyIncomparable, "identical-spaces", "the two descriptions coincide");

  std::vector<Index> na, nb;
  if (detail::finite_index_regime(a, options.index_cap, na) && detail::finite_index_regime(b, options.index_cap, nb)) {
    const auto& ea = std::get<FiniteMixed>(a.form).entries;
    const auto& eb = std::get<FiniteMixed>(b.form).entries;
    auto c0_type = [](const std::vector<MixedEntry>& e, const std::vector<Index>& n) {
      for (std::size_t k = 0; k < e.size(); ++k) {
        if (Rational(n[k]) * e[k].theta > 1) return false;
      }
      return true;
    };
    const bool ca = c0_type(ea, na), cb = c0_type(eb, nb);
    if (ca && !cb) return done(Comparison::TotallyIncomparable, "trichotomy-case-1", "first is c0-type, second has theta_k > 1/n_k");
    if (!ca && cb) return done(Comparison::TotallyIncomparable, "trichotomy-case-2", "second is c0-type, first has theta_k > 1/n_k");
    if (ca && cb) return done(Comparison::NotTotallyIncomparable, "trichotomy-none", "both are c0-saturated");
    auto c = detail::compare_p(*out.a.p, *out.b.p);
    const std::string ps = "p = " + detail::p_text(*out.a.p) + " vs p' = " + detail::p_text(*out.b.p);
    if (!c) return done(Comparison::EvidenceOnly, "trichotomy-case-3", ps + "; equality not decided");
    if (*c != 0) return done(Comparison::TotallyIncomparable, "trichotomy-case-3", ps + " differ");
    return done(Comparison::NotTotallyIncomparable, "trichotomy-none", ps + " coincide");
  }

  const bool cat_a = detail::in_log_power_catalog(a), cat_b = detail::in_log_power_catalog(b);
  if (cat_a && cat_b) {
    out.probe = lambda_ratio_probe(a, b, std::min<std::size_t>(probe_n, 12));
    return done(Comparison::TotallyIncomparable, "log-power-catalog", "distinct exponents below 3 ln 2 - 1");
  }
  const auto sa = detail::saturating_classic(out.a), sb = detail::saturating_classic(out.b);
  if ((cat_a && sb) || (cat_b && sa)) {
    return done(Comparison::TotallyIncomparable, "log-power-catalog", "log-power catalog space against a classic-saturated space");
  }

  const auto ka = detail::contained_classics(out.a), kb = detail::contained_classics(out.b);
  for (const auto& k : ka) {
    if (k != "lp" && kb.count(k)) return done(Comparison::NotTotallyIncomparable, "common-classic-subspace", "both contain " + k);
  }
  if (sa && sb) {
    if (*sa != *sb) {
      return done(Comparison::TotallyIncomparable, "distinct-saturating-classics", *sa + "-saturated vs " + *sb + "-saturated");
    }
    if (*sa == "lp" && out.a.p && out.b.p) {
      auto c = detail::compare_p(*out.a.p, *out.b.p);
      if (c && *c == 0) return done(Comparison::NotTotallyIncomparable, "common-classic-subspace", "equal p");
      if (c) return done(Comparison::TotallyIncomparable, "distinct-saturating-classics", "distinct p");
    }
  }

  if (!is_finite_mixed(a) && !is_finite_mixed(b)) {
    try {
      out.probe = lambda_ratio_probe(a, b, probe_n);
      return done(Comparison::EvidenceOnly, "lambda-ratio", "lambda ratio trend: " + out.probe->trend);
    } catch (const std::exception& e) {
      return done(Comparison::EvidenceOnly, "lambda-ratio", std::string("probe failed: ") + e.what());
    }
  }
  return done(Comparison::EvidenceOnly, "no-rule", "no exact rule covers this pair");
}

struct L1BlockWitness {
  int scale = 0;
  Index block_length = 0;
  std::vector<std::pair<Index, Index>> blocks;  // [a, b] position ranges
  RatInterval value;                            // ||sum y_i||, y_i normalized blocks
};

/// Searches scales l = 1..l_max for n consecutive blocks of length n^(l-1) whose normalized sum has norm >= n - eps.
inline std::optional<L1BlockWitness> l1_block_witness(const SpaceSpec& space, Index n, const Rational& eps, int l_max,
                                                      std::size_t max_length = 2048) {
  if (n < 1) throw std::invalid_argument("block count must be positive");
  if (eps <= 0 || eps >= 1) throw std::invalid_argument("epsilon must lie in (0,1)");
  EngineOptions eo;
  eo.certified = true;
  eo.fixed_point = true;
  NormEngine engine(space, eo);
  const Rational target = Rational(n) - eps;
  const bool invariant = is_position_invariant(space);

  std::optional<LambdaTable> lam;
  Index len = 1;
  for (int l = 1; l <= l_max && static_cast<std::size_t>(n * len) <= max_length; ++l, len *= n) {
    L1BlockWitness w;
    w.scale = l;
    w.block_length = len;
    for (Index i = 0; i < n; ++i) w.blocks.emplace_back(i * len + 1, (i + 1) * len);
    if (invariant) {
      // Position invariance makes ||y_1 + ... + y_n|| = lambda_{nL} / lambda_L.
      if (!lam || lam->size() < static_cast<std::size_t>(n * len)) lam = engine.lambda_table(static_cast<std::size_t>(n * len), LambdaPath::Fast);
      w.value = divide_positive(lam->at(static_cast<std::size_t>(n * len)), lam->at(static_cast<std::size_t>(len)));
    } else {
      // Exact block norms, then the normalized sum; skipped once the support exceeds the engine budget.
      try {
        EngineOptions exact_opts;
        NormEngine exact(space, exact_opts);
        FinVec y;
        for (const auto& [a, b] : w.blocks) {
          const Rational bn = exact.segment_sum_norm(a, b).value.exact();
          for (Index t = a; t <= b; ++t) y.set(t, Rational(1) / bn);
        }
        w.value = exact.norm(y).value;
      } catch (const BudgetExceeded&) {
        break;
      }
    }
    if (w.value.lo >= target) return w;
  }
  return std::nullopt;
}

}  // namespace mtsirelson
