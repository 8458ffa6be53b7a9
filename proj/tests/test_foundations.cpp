#include "mtsirelson/arith.hpp"
#include "mtsirelson/certified.hpp"
#include "mtsirelson/coefficients.hpp"
#include "mtsirelson/finvec.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace mtsirelson;

namespace {

Rational Q(const char* s) { return parse_rational(s); }

// Reference decimals (50 digits, mpmath) widened by 10^-45.
RatInterval reference(const char* digits) {
  const Rational c = parse_rational(digits);
  const Rational eps = parse_rational("0.000000000000000000000000000000000000000000001");
  return {c - eps, c + eps};
}

}  // namespace

TEST(Rational, ParsesFractionsDecimalsAndIntegers) {
  EXPECT_EQ(Q("6/8"), Rational(3, 4));
  EXPECT_EQ(Q("-2/4"), Rational(-1, 2));
  EXPECT_EQ(Q("0.125"), Rational(1, 8));
  EXPECT_EQ(Q("7"), Rational(7));
  EXPECT_EQ(Q("010/09"), Rational(10, 9));
  EXPECT_EQ(Q("-0.05"), Rational(-1, 20));
  EXPECT_EQ(Q("+3/6"), Rational(1, 2));
  EXPECT_EQ(to_string(Q("10/4")), "5/2");
  EXPECT_EQ(to_string(Rational(1)), "1/1");
  EXPECT_THROW(Q("1/0"), std::invalid_argument);
  EXPECT_THROW(Q("abc"), std::invalid_argument);
  EXPECT_THROW(Q(""), std::invalid_argument);
  EXPECT_THROW(Q("1/-2"), std::invalid_argument);
}

TEST(Rational, DecimalRenderingTruncates) {
  EXPECT_EQ(to_decimal(Rational(2, 3), 4), "0.6666");
  EXPECT_EQ(to_decimal(Rational(-1, 8), 3), "-0.125");
  EXPECT_EQ(to_decimal(Rational(5), 2), "5.00");
}

TEST(RatInterval, ArithmeticAndPredicates) {
  RatInterval a(Rational(1), Rational(2)), b(Rational(3), Rational(5));
  EXPECT_EQ(a + b, RatInterval(Rational(4), Rational(7)));
  EXPECT_EQ(a * b, RatInterval(Rational(3), Rational(10)));
  EXPECT_EQ(divide_positive(a, b), RatInterval(Rational(1, 5), Rational(2, 3)));
  EXPECT_TRUE(a.contains(Rational(3, 2)));
  EXPECT_FALSE(a.overlaps(b));
  EXPECT_THROW(RatInterval(Rational(2), Rational(1)), std::invalid_argument);
  EXPECT_THROW((void)a.exact(), std::logic_error);
  EXPECT_EQ(RatInterval(Rational(1, 3)).exact(), Rational(1, 3));
}

TEST(Certified, ExactRootsAndPowers) {
  EXPECT_EQ(certified::exact_root(Integer(27), 3), Integer(3));
  EXPECT_FALSE(certified::exact_root(Integer(28), 3).has_value());
  EXPECT_EQ(certified::exact_power(Rational(4, 9), Rational(1, 2)), Rational(2, 3));
  EXPECT_EQ(certified::exact_power(Rational(8), Rational(-2, 3)), Rational(1, 4));
  EXPECT_FALSE(certified::exact_power(Rational(2), Rational(1, 2)).has_value());
}

TEST(Certified, EnclosuresContainReferenceValues) {
  const RatInterval l3 = certified::log2_enclosure(Integer(3), 128);
  EXPECT_TRUE(divide_positive(RatInterval(Rational(1)), l3).overlaps(reference("0.63092975357145743709952711434276085429958564013188")));
  EXPECT_TRUE(certified::log2_enclosure(Integer(10), 160).overlaps(reference("3.3219280948873623478703194294893901758648313930246")));
  const RatInterval ln2 = certified::ln2_enclosure(160);
  EXPECT_TRUE(ln2.overlaps(reference("0.69314718055994530941723212145817656807550013436025")));
  EXPECT_LT(ln2.width(), pow2_inverse(140));
  EXPECT_EQ(certified::log2_enclosure(Integer(1024), 64), RatInterval(Rational(10)));
}

TEST(Certified, IntegerSquareRootEnclosure) {
  const RatInterval r = certified::isqrt_enclosure(Integer(2), 100);
  EXPECT_TRUE(r.overlaps(reference("1.4142135623730950488016887242096980785696718753769")));
  EXPECT_LE(r.width(), pow2_inverse(100));
  EXPECT_EQ(certified::isqrt_enclosure(Integer(49), 10), RatInterval(Rational(7)));
}

TEST(Coefficients, ThetaAtCatalogForms) {
  EXPECT_EQ(theta_at(Constant{Rational(1, 2)}, 5), RatInterval(Rational(1, 2)));
  EXPECT_EQ(theta_at(InvLinear{}, 4), RatInterval(Rational(1, 4)));
  EXPECT_EQ(theta_at(InvLogPow{Rational(1)}, 3), RatInterval(Rational(1, 2)));
  EXPECT_EQ(theta_at(InvLogPow{Rational(1)}, 7), RatInterval(Rational(1, 3)));
  EXPECT_EQ(theta_at(PowerLaw{Rational(1), Rational(1, 2)}, 4), RatInterval(Rational(1, 2)));
  EXPECT_THROW(theta_at(InvLinear{}, 0), std::invalid_argument);
}

TEST(Coefficients, IrrationalThetaIsANarrowEnclosure) {
  const RatInterval t = theta_at(InvLogPow{Rational(1)}, 2, 20);
  EXPECT_FALSE(t.is_point());
  EXPECT_LE(t.width(), pow2_inverse(20));
  EXPECT_TRUE(t.overlaps(reference("0.63092975357145743709952711434276085429958564013188")));
  const RatInterval s = theta_at(PowerLaw{Rational(1), Rational(1, 2)}, 2, 30);
  EXPECT_FALSE(s.is_point());
  EXPECT_TRUE(s.overlaps(reference("0.70710678118654752440084436210484903928483593768847")));
}

TEST(Coefficients, RefinedEnclosuresNest) {
  for (Index k : {2, 5, 6, 10, 100}) {
    RatInterval prev = theta_at(InvLogPow{Rational(3, 2)}, k, 8);
    for (unsigned p : {16u, 32u, 64u}) {
      const RatInterval next = theta_at(InvLogPow{Rational(3, 2)}, k, p);
      EXPECT_TRUE(prev.overlaps(next)) << k << " " << p;
      EXPECT_LE(next.width(), pow2_inverse(p));
      prev = next;
    }
  }
}

TEST(Coefficients, EnvelopeOfExplicitList) {
  const CoefficientSeq s = ExplicitList{{Q("1/2"), Q("9/10"), Q("3/10")}, Q("3/10")};
  const CoefficientSeq want = ExplicitList{{Q("9/10"), Q("9/10"), Q("3/10")}, Q("3/10")};
  EXPECT_EQ(envelope(s), want);
  EXPECT_EQ(envelope(InvLinear{}), CoefficientSeq(InvLinear{}));
  EXPECT_TRUE(is_nonincreasing(envelope(s)));
  EXPECT_FALSE(is_nonincreasing(s));
}

TEST(Coefficients, EnvelopeIsIdempotentAndDominates) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> num(1, 10);
  for (int trial = 0; trial < 200; ++trial) {
    ExplicitList l;
    const int len = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < len; ++i) l.values.push_back(ratio(num(rng), 10));
    if (rng() % 2) l.tail = ratio(num(rng), 10);
    const CoefficientSeq s = l, e = envelope(s);
    EXPECT_EQ(envelope(e), e);
    for (Index k = 1; k <= len + 2; ++k) {
      if (k > len && !l.tail) break;
      EXPECT_GE(theta_at(e, k).lo, theta_at(s, k).lo);
      if (k > 1) {
        EXPECT_LE(theta_at(e, k).lo, theta_at(e, k - 1).lo);
      }
    }
  }
}

TEST(Coefficients, ValidationRejectsOutOfRange) {
  EXPECT_THROW(validate(CoefficientSeq(Constant{Rational(3, 2)})), std::invalid_argument);
  EXPECT_THROW(validate(CoefficientSeq(ExplicitList{{Rational(0)}, std::nullopt})), std::invalid_argument);
  EXPECT_NO_THROW(validate(CoefficientSeq(InvLogPow{Rational(1, 2)})));
  EXPECT_EQ(infimum(Constant{Rational(1, 3)}), Rational(1, 3));
  EXPECT_EQ(infimum(InvLinear{}), Rational(0));
}

TEST(FinSetAndVec, Basics) {
  EXPECT_THROW(FinSet({0, 1}), std::invalid_argument);
  EXPECT_THROW(FinSet({2, 2}), std::invalid_argument);
  EXPECT_EQ(FinSet({5, 1, 3}).elements(), (std::vector<Index>{1, 3, 5}));
  EXPECT_TRUE(precedes(FinSet{1, 2}, FinSet{3}));
  EXPECT_FALSE(precedes(FinSet{1, 3}, FinSet{3}));

  FinVec x{{1, Rational(1)}, {3, Rational(2)}};
  EXPECT_EQ(restrict(x, FinSet{3, 4}), (FinVec{{3, Rational(2)}}));
  EXPECT_TRUE(restrict(x, FinSet{}).is_zero());
  EXPECT_EQ(restrict(x, FinSet{1, 2, 3}), x);
  x.set(3, Rational(0));
  EXPECT_EQ(x.support(), FinSet{1});
  EXPECT_EQ(FinVec::segment(2, 4).l1_norm(), Rational(3));
}

TEST(FinSetAndVec, RestrictCommutesWithIntersection) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    FinVec x;
    std::vector<Index> e, f;
    for (Index i = 1; i <= 10; ++i) {
      if (rng() % 2) x.set(i, ratio(static_cast<long>(rng() % 7) - 3, 1 + static_cast<long>(rng() % 4)));
      if (rng() % 2) e.push_back(i);
      if (rng() % 2) f.push_back(i);
    }
    const FinSet E(e), F(f);
    EXPECT_EQ(restrict(restrict(x, E), F), restrict(x, E.intersect(F)));
    EXPECT_EQ(restrict(restrict(x, E), E), restrict(x, E));
  }
}

TEST(FixedArith, RoundsInTheRequestedDirection) {
  const Rational third(1, 3);
  const Rational lo = FixedArith<false>::to_rational(FixedArith<false>::from_rational(third));
  const Rational hi = FixedArith<true>::to_rational(FixedArith<true>::from_rational(third));
  EXPECT_LT(lo, third);
  EXPECT_GT(hi, third);
  EXPECT_EQ(hi - lo, pow2_inverse(48));
  EXPECT_EQ(FixedArith<true>::to_rational(FixedArith<true>::from_rational(Rational(3, 4))), Rational(3, 4));
  const auto w = FixedArith<true>::from_rational(third);
  EXPECT_GE(FixedArith<true>::to_rational(FixedArith<true>::mul(w, w)), third * third);
  const auto v = FixedArith<false>::from_rational(third);
  EXPECT_LE(FixedArith<false>::to_rational(FixedArith<false>::mul(v, v)), third * third);
  EXPECT_THROW(FixedArith<false>::from_rational(Rational(Integer(1) << 40)), std::overflow_error);
}
