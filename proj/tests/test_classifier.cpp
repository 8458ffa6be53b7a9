#include "mtsirelson/classifier.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace mtsirelson;
using namespace mtsirelson::space;

namespace {

Rational Q(const char* s) { return parse_rational(s); }

RatInterval decimal_ref(const char* digits) {
  const Rational c = parse_rational(digits);
  const Rational eps = parse_rational("0.000000000000000000000000000000000000000000001");
  return {c - eps, c + eps};
}

SpaceSpec ank(Index k, const char* theta) { return single(family::ank(k), Q(theta)); }

std::set<Property> properties(const ClassificationReport& r) {
  std::set<Property> out;
  for (const auto& v : r.verdicts) out.insert(v.property);
  return out;
}

}  // namespace

TEST(ClassifyFinite, StandardExamples) {
  const auto c0 = classify(finite_mixed({{family::ank(2), Q("1/2")}, {family::ank(5), Q("1/5")}}));
  EXPECT_TRUE(c0.has(Property::C0Saturated));
  EXPECT_EQ(c0.find(Property::C0Saturated)->rule, "finite-index-c0");
  EXPECT_EQ(c0.reflexive, false);

  const auto l2 = classify(finite_mixed({{family::ank(3), Q("1/3")}, {family::ank(4), Q("1/2")}}));
  EXPECT_TRUE(l2.has(Property::LpSaturated));
  ASSERT_TRUE(l2.p.has_value());
  EXPECT_EQ(l2.p->exact, Rational(2));
  EXPECT_EQ(l2.p->n, 4);
  EXPECT_EQ(l2.reflexive, true);

  const auto refl = classify(ank(2, "3/5"));
  EXPECT_TRUE(refl.has(Property::LpSaturated));
  EXPECT_EQ(refl.reflexive, true);
  EXPECT_EQ(refl.reflexive_rule, "finite-index-reflexivity");
  ASSERT_TRUE(refl.p.has_value());
  EXPECT_FALSE(refl.p->exact.has_value());
  EXPECT_TRUE(refl.p->enclosure.overlaps(decimal_ref("3.8017840169239302747213784507990647583901329625085")));
}

TEST(ClassifyFinite, PValuesForNineTenths) {
  const auto a2 = classify(ank(2, "9/10"));
  const auto a3 = classify(ank(3, "9/10"));
  ASSERT_TRUE(a2.p && a3.p);
  EXPECT_TRUE(a2.p->enclosure.overlaps(decimal_ref("1.1792495848393760827717281478222222753096571911434")));
  EXPECT_TRUE(a3.p->enclosure.overlaps(decimal_ref("1.1060763428979406179282138870552744829874722337992")));
  EXPECT_TRUE(classify(ank(2, "4/5")).p->enclosure.overlaps(decimal_ref("1.4747698473569486512821466963122710999949890391387")));
}

TEST(ClassifyFinite, ThetaOneRules) {
  const auto ex1 = classify(single(family::pair_tail_pow2(), Rational(1)));
  EXPECT_TRUE(ex1.has(Property::L1Saturated));
  EXPECT_EQ(ex1.find(Property::L1Saturated)->rule, "theta-one-high-index");
  ASSERT_TRUE(ex1.has(Property::NotIsomorphicToL1));
  EXPECT_TRUE(ex1.find(Property::NotIsomorphicToL1)->evidence_only);
  const Evidence* dyadic = nullptr;
  for (const auto& e : ex1.evidence) {
    if (e.name == "dyadic-block-ratio") dyadic = &e;
  }
  ASSERT_NE(dyadic, nullptr);
  ASSERT_EQ(dyadic->rows.size(), 5u);
  for (std::size_t k = 1; k <= 5; ++k) {
    EXPECT_EQ(dyadic->rows[k - 1][1], "2/1");
    EXPECT_EQ(dyadic->rows[k - 1][2], to_string(Rational(Index{1} << (k - 1))));
  }

  const auto ex2 = classify(single(family::pair_consecutive(), Rational(1)));
  EXPECT_TRUE(ex2.has(Property::ContainsL1));
  EXPECT_TRUE(ex2.has(Property::ContainsC0));
  EXPECT_EQ(ex2.find(Property::ContainsC0)->rule, "unbounded-gap-points");
  EXPECT_FALSE(ex2.has(Property::L1Saturated));

  const auto a2 = classify(ank(2, "1"));
  EXPECT_TRUE(a2.has(Property::L1Saturated));
  EXPECT_FALSE(a2.has(Property::NotIsomorphicToL1));
}

TEST(ClassifyFinite, FiniteNonsingletonReductions) {
  const auto all = classify(single(family::explicit_finite({FinSet{1, 2}}), Rational(1)));
  EXPECT_TRUE(all.has(Property::C0Saturated));
  EXPECT_EQ(all.find(Property::C0Saturated)->rule, "theta-one-finite-nonsingletons-all");

  const auto drop = classify(finite_mixed({{family::explicit_finite({FinSet{1, 2}}), Rational(1)}, {family::ank(3), Q("1/2")}}));
  EXPECT_TRUE(drop.has(Property::LpSaturated));
  ASSERT_FALSE(drop.reductions.empty());
  EXPECT_EQ(drop.reductions.front().rfind("theta-one-finite-nonsingletons-drop", 0), 0u);
}

TEST(ClassifyFinite, UndeterminedOutsideFiniteIndex) {
  const auto t = classify(tsirelson());
  EXPECT_TRUE(t.undetermined());
  EXPECT_EQ(t.find(Property::Undetermined)->rule, "infinite-index");
  ClassifierOptions small;
  small.index_cap = 2;
  const auto capped = classify(ank(5, "1/2"), small);
  EXPECT_TRUE(capped.undetermined());
  EXPECT_EQ(capped.find(Property::Undetermined)->rule, "index-cap");
}

TEST(ClassifyFinite, InvariantUnderPermutationAndDuplication) {
  std::mt19937_64 rng(9);
  const std::vector<MixedEntry> pool{{family::ank(2), Q("1/2")}, {family::ank(3), Q("9/10")}, {family::ank(4), Q("1/3")},
                                     {family::ank(5), Q("1/5")}, {family::ank(2), Q("3/5")}, {family::singletons(), Q("1/2")}};
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<MixedEntry> e;
    for (const auto& m : pool) {
      if (rng() % 2) e.push_back(m);
    }
    if (e.empty()) continue;
    const auto base = classify(finite_mixed(e));
    auto shuffled = e;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    shuffled.push_back(shuffled.front());
    const auto other = classify(finite_mixed(shuffled));
    EXPECT_EQ(properties(base), properties(other));
    EXPECT_EQ(base.reflexive, other.reflexive);
    EXPECT_EQ(base.p.has_value(), other.p.has_value());
    if (base.p && other.p) {
      EXPECT_EQ(detail::compare_p(*base.p, *other.p), 0);
    }
  }
}

TEST(ClassifyAdmissible, CatalogForms) {
  const auto inv = classify(admissible_seq(InvLinear{}));
  EXPECT_TRUE(inv.has(Property::IsometricC0));
  const auto l1 = classify(admissible_seq(ExplicitList{{Q("1"), Q("1")}, Q("1/2")}));
  EXPECT_TRUE(l1.has(Property::IsometricL1));
  const auto iso = classify(admissible_seq(Constant{Q("1/2")}));
  EXPECT_TRUE(iso.has(Property::IsomorphicL1));
  const auto s = classify(admissible_seq(InvLogPow{Rational(1)}));
  EXPECT_TRUE(s.has(Property::L1FinitelyBlockRepresented));
  EXPECT_EQ(s.find(Property::L1FinitelyBlockRepresented)->rule, "geometric-theta-limit");
  const auto tz = classify(admissible_seq(PowerLaw{Rational(1), Q("1/2")}));
  EXPECT_TRUE(tz.undetermined());
}

TEST(ClassifyAdmissible, EnvelopeIsAppliedFirst) {
  const auto r = classify(admissible_seq(ExplicitList{{Q("1/2"), Q("1")}, Q("1/3")}));
  EXPECT_TRUE(r.has(Property::IsometricL1));
  EXPECT_FALSE(r.reductions.empty());
}

TEST(ClassifyAdmissible, LambdaEvidenceMatchesEngine) {
  const auto r = classify(admissible_seq(InvLinear{}));
  const Evidence* lam = nullptr;
  for (const auto& e : r.evidence) {
    if (e.name == "lambda") lam = &e;
  }
  ASSERT_NE(lam, nullptr);
  ASSERT_EQ(lam->rows.size(), 16u);
  for (const auto& row : lam->rows) EXPECT_EQ(row[1], "1/1");
}

TEST(Compare, TrichotomyExamples) {
  const auto c3 = compare(ank(2, "9/10"), ank(3, "9/10"));
  EXPECT_EQ(c3.verdict, Comparison::TotallyIncomparable);
  EXPECT_EQ(c3.fired, "trichotomy-case-3");

  const auto same = compare(ank(2, "4/5"), ank(4, "16/25"));
  EXPECT_EQ(same.verdict, Comparison::NotTotallyIncomparable);
  EXPECT_EQ(same.fired, "trichotomy-none");
  ASSERT_TRUE(same.a.p && same.b.p);
  EXPECT_EQ(detail::compare_p(*same.a.p, *same.b.p), 0);

  const auto c1 = compare(ank(2, "1/2"), ank(2, "3/5"));
  EXPECT_EQ(c1.verdict, Comparison::TotallyIncomparable);
  EXPECT_EQ(c1.fired, "trichotomy-case-1");
  const auto c2 = compare(ank(2, "3/5"), ank(2, "1/2"));
  EXPECT_EQ(c2.fired, "trichotomy-case-2");
}

TEST(Compare, IsSymmetricInItsVerdict) {
  const std::vector<SpaceSpec> spaces{ank(2, "9/10"), ank(3, "9/10"), ank(2, "1/2"), ank(2, "3/5"), ank(4, "16/25"),
                                      ank(2, "4/5"), single(family::pair_tail_pow2(), Rational(1)),
                                      single(family::pair_consecutive(), Rational(1)), admissible_seq(InvLinear{})};
  for (const auto& a : spaces) {
    for (const auto& b : spaces) EXPECT_EQ(compare(a, b).verdict, compare(b, a).verdict) << describe(a) << " | " << describe(b);
  }
}

TEST(Compare, LogPowerCatalog) {
  const auto r = compare(admissible_seq(InvLogPow{Q("1/2")}), admissible_seq(InvLogPow{Q("9/10")}));
  EXPECT_EQ(r.verdict, Comparison::TotallyIncomparable);
  EXPECT_EQ(r.fired, "log-power-catalog");
  // 1.08 lies above 3 ln 2 - 1 = 1.0794...
  const auto out = compare(admissible_seq(InvLogPow{Q("1/2")}), admissible_seq(InvLogPow{Q("27/25")}));
  EXPECT_NE(out.fired, "log-power-catalog");
  EXPECT_TRUE(detail::in_log_power_catalog(admissible_seq(InvLogPow{Q("1079/1000")})));
  EXPECT_FALSE(detail::in_log_power_catalog(admissible_seq(InvLogPow{Q("1080/1000")})));
}

TEST(Compare, IdenticalAndEvidenceOnly) {
  const auto id = compare(tsirelson(), tsirelson());
  EXPECT_EQ(id.fired, "identical-spaces");
  const auto ev = compare(admissible_seq(InvLogPow{Rational(1)}), admissible_seq(PowerLaw{Rational(1), Q("1/2")}));
  EXPECT_EQ(ev.verdict, Comparison::EvidenceOnly);
  EXPECT_EQ(ev.fired, "lambda-ratio");
  ASSERT_TRUE(ev.probe.has_value());
  EXPECT_EQ(ev.probe->ratios.size(), 16u);
  EXPECT_EQ(compare(tsirelson(), admissible_seq(InvLogPow{Rational(1)})).verdict, Comparison::EvidenceOnly);
}

TEST(RatioProbe, IdenticalSpacesGiveOnes) {
  const auto p = lambda_ratio_probe(tsirelson(), tsirelson(), 12);
  for (const auto& r : p.ratios) EXPECT_EQ(r, RatInterval(Rational(1)));
  EXPECT_EQ(p.trend, "identical");
}

TEST(RatioProbe, SchlumprechtAgainstInverseLinear) {
  const auto p = lambda_ratio_probe(admissible_seq(InvLogPow{Rational(1)}), admissible_seq(InvLinear{}), 12);
  EXPECT_EQ(p.trend, "increasing");
  EXPECT_TRUE(p.ratios[2].overlaps(decimal_ref("1.5")));
  EXPECT_TRUE(p.ratios[6].overlaps(decimal_ref("2.3333333333333333333333333333333333333333333333333")));
}

TEST(RatioProbe, LogPowersDifferByAPowerOfTheLog) {
  const auto p = lambda_ratio_probe(admissible_seq(InvLogPow{Q("1/2")}), admissible_seq(InvLogPow{Rational(1)}), 15);
  EXPECT_TRUE(p.ratios[0].overlaps(decimal_ref("1")));
  EXPECT_TRUE(p.ratios[2].overlaps(decimal_ref("1.4142135623730950488016887242096980785696718753769")));
  EXPECT_TRUE(p.ratios[14].overlaps(decimal_ref("2")));
}

TEST(Witness, Examples) {
  const auto a2 = l1_block_witness(ank(2, "1"), 4, Q("1/10"), 12);
  ASSERT_TRUE(a2.has_value());
  EXPECT_EQ(a2->scale, 1);
  EXPECT_EQ(a2->value, RatInterval(Rational(4)));

  const auto s = l1_block_witness(admissible_seq(InvLogPow{Rational(1)}), 2, Q("1/5"), 12);
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(s->block_length, 512);
  EXPECT_TRUE(s->value.overlaps(decimal_ref("1.8003094845492646041030475805251002851605530791128")));

  EXPECT_FALSE(l1_block_witness(admissible_seq(InvLinear{}), 2, Q("1/2"), 12).has_value());
  EXPECT_THROW(l1_block_witness(tsirelson(), 2, Rational(1), 4), std::invalid_argument);
}

TEST(PArithmetic, RationalLogsAndPrimeExponents) {
  EXPECT_EQ(detail::rational_log(Rational(8), Rational(4)), Q("3/2"));
  EXPECT_EQ(detail::rational_log(Q("1/9"), Rational(27)), Q("-2/3"));
  EXPECT_EQ(detail::rational_log(Rational(2), Rational(4)), Q("1/2"));
  EXPECT_FALSE(detail::rational_log(Rational(3), Rational(2)).has_value());
  const auto f = detail::prime_exponents(Q("12/35"));
  ASSERT_TRUE(f.has_value());
  EXPECT_EQ(f->at(Integer(2)), 2);
  EXPECT_EQ(f->at(Integer(7)), -1);
}
