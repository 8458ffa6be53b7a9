#pragma once

// Certified enclosures of the transcendental quantities the toolkit needs
// (binary logarithms, real powers, natural logarithms). Evaluation goes through
// MPFR with directed rounding; every result is converted exactly to rational
// endpoints, so downstream code never sees a floating-point value.

#include "mtsirelson/rational.hpp"

#include <mpfr.h>

#include <optional>
#include <utility>

namespace mtsirelson::certified {

/// Owning wrapper around an mpfr_t.
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t bits) { mpfr_init2(value_, bits); }
  BigFloat(const BigFloat&) = delete;
  BigFloat& operator=(const BigFloat&) = delete;
  ~BigFloat() { mpfr_clear(value_); }

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }

  Rational to_rational() const {
    Rational q;
    mpfr_get_q(q.get_mpq_t(), value_);
    return q;
  }

 private:
  mpfr_t value_;
};

inline void set_rational(BigFloat& f, const Rational& q, mpfr_rnd_t rnd) { mpfr_set_q(f.get(), q.get_mpq_t(), rnd); }

/// Integer b-th root when exact.
inline std::optional<Integer> exact_root(const Integer& n, unsigned long b) {
  if (n < 0) return std::nullopt;
  Integer r;
  if (mpz_root(r.get_mpz_t(), n.get_mpz_t(), b) != 0) return r;
  return std::nullopt;
}

/// base^exponent when the result is rational (base > 0).
inline std::optional<Rational> exact_power(const Rational& base, const Rational& exponent) {
  if (base <= 0) return std::nullopt;
  if (exponent == 0) return Rational(1);
  if (base == 1) return Rational(1);
  const Integer& a = exponent.get_num();
  const Integer& b = exponent.get_den();
  const Integer abs_a = abs(a);
  if (!b.fits_ulong_p() || !abs_a.fits_ulong_p()) return std::nullopt;
  auto rn = exact_root(base.get_num(), b.get_ui());
  auto rd = exact_root(base.get_den(), b.get_ui());
  if (!rn || !rd) return std::nullopt;
  Rational root(*rn, *rd);
  root.canonicalize();
  const unsigned long e = abs_a.get_ui();
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), root.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), root.get_den_mpz_t(), e);
  Rational out = a < 0 ? Rational(den, num) : Rational(num, den);
  out.canonicalize();
  return out;
}

/// Enclosure of log2(n) for an integer n >= 1; exact when n is a power of two.
inline RatInterval log2_enclosure(const Integer& n, mpfr_prec_t bits) {
  if (n < 1) throw std::domain_error("log2 of a non-positive integer");
  if (mpz_popcount(n.get_mpz_t()) == 1) {
    return RatInterval(Rational(static_cast<long>(mpz_sizeinbase(n.get_mpz_t(), 2) - 1)));
  }
  // The argument must be held exactly.
  BigFloat arg(static_cast<mpfr_prec_t>(mpz_sizeinbase(n.get_mpz_t(), 2) + 2));
  mpfr_set_z(arg.get(), n.get_mpz_t(), MPFR_RNDN);
  BigFloat lo(bits), hi(bits);
  mpfr_log2(lo.get(), arg.get(), MPFR_RNDD);
  mpfr_log2(hi.get(), arg.get(), MPFR_RNDU);
  return {lo.to_rational(), hi.to_rational()};
}

/// Enclosure of ln(q) for q > 0.
inline RatInterval ln_enclosure(const Rational& q, mpfr_prec_t bits) {
  if (q <= 0) throw std::domain_error("logarithm of a non-positive rational");
  if (q == 1) return RatInterval(Rational(0));
  BigFloat qlo(bits), qhi(bits), lo(bits), hi(bits);
  set_rational(qlo, q, MPFR_RNDD);
  set_rational(qhi, q, MPFR_RNDU);
  mpfr_log(lo.get(), qlo.get(), MPFR_RNDD);
  mpfr_log(hi.get(), qhi.get(), MPFR_RNDU);
  return {lo.to_rational(), hi.to_rational()};
}

/// Enclosure of ln 2.
inline RatInterval ln2_enclosure(mpfr_prec_t bits) {
  BigFloat lo(bits), hi(bits);
  mpfr_const_log2(lo.get(), MPFR_RNDD);
  mpfr_const_log2(hi.get(), MPFR_RNDU);
  return {lo.to_rational(), hi.to_rational()};
}

/// Enclosure of base^exponent for a positive base enclosure and exponent >= 0.
inline RatInterval pow_enclosure(const RatInterval& base, const Rational& exponent, mpfr_prec_t bits) {
  if (base.lo <= 0) throw std::domain_error("real power of a non-positive enclosure");
  if (exponent < 0) throw std::domain_error("negative exponent in pow_enclosure");
  if (base.is_point()) {
    if (auto exact = exact_power(base.lo, exponent)) return RatInterval(*exact);
  }
  BigFloat elo(bits), ehi(bits);
  set_rational(elo, exponent, MPFR_RNDD);
  set_rational(ehi, exponent, MPFR_RNDU);
  BigFloat blo(bits), bhi(bits);
  set_rational(blo, base.lo, MPFR_RNDD);
  set_rational(bhi, base.hi, MPFR_RNDU);

  // Monotone in each argument separately, so the extremes sit at corners.
  std::optional<Rational> lower, upper;
  for (BigFloat* b : {&blo, &bhi}) {
    for (BigFloat* e : {&elo, &ehi}) {
      BigFloat down(bits), up(bits);
      mpfr_pow(down.get(), b->get(), e->get(), MPFR_RNDD);
      mpfr_pow(up.get(), b->get(), e->get(), MPFR_RNDU);
      Rational d = down.to_rational(), u = up.to_rational();
      if (!lower || d < *lower) lower = d;
      if (!upper || u > *upper) upper = u;
    }
  }
  return {*lower, *upper};
}

/// Enclosure of base^(1/n) for a positive base enclosure.
inline RatInterval root_enclosure(const RatInterval& base, unsigned long n, mpfr_prec_t bits) {
  if (base.lo <= 0) throw std::domain_error("root of a non-positive enclosure");
  if (base.is_point()) {
    if (auto exact = exact_power(base.lo, Rational(1, static_cast<long>(n)))) return RatInterval(*exact);
  }
  BigFloat blo(bits), bhi(bits), lo(bits), hi(bits);
  set_rational(blo, base.lo, MPFR_RNDD);
  set_rational(bhi, base.hi, MPFR_RNDU);
  mpfr_rootn_ui(lo.get(), blo.get(), n, MPFR_RNDD);
  mpfr_rootn_ui(hi.get(), bhi.get(), n, MPFR_RNDU);
  return {lo.to_rational(), hi.to_rational()};
}

/// Enclosure of sqrt(k) from integer square roots: floor(sqrt(k 4^bits)) / 2^bits.
inline RatInterval isqrt_enclosure(const Integer& k, unsigned bits) {
  if (k < 0) throw std::domain_error("square root of a negative integer");
  Integer r;
  if (mpz_perfect_square_p(k.get_mpz_t())) {
    mpz_sqrt(r.get_mpz_t(), k.get_mpz_t());
    return RatInterval(Rational(r));
  }
  Integer scaled = k;
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), 2 * bits);
  mpz_sqrt(r.get_mpz_t(), scaled.get_mpz_t());
  Integer den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, bits);
  return {ratio(r, den), ratio(r + 1, den)};
}

/// Widens an enclosure outward onto the dyadic grid 2^-bits.
inline RatInterval snap_outward(const RatInterval& iv, unsigned bits) {
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 2, bits);
  Integer lo_num = iv.lo.get_num() * scale, hi_num = iv.hi.get_num() * scale;
  Integer lo_floor, hi_ceil;
  mpz_fdiv_q(lo_floor.get_mpz_t(), lo_num.get_mpz_t(), iv.lo.get_den_mpz_t());
  mpz_cdiv_q(hi_ceil.get_mpz_t(), hi_num.get_mpz_t(), iv.hi.get_den_mpz_t());
  Rational lo(lo_floor, scale), hi(hi_ceil, scale);
  lo.canonicalize();
  hi.canonicalize();
  return {lo, hi};
}

/// Runs `eval(bits)` with growing working precision until the enclosure is narrower than 2^-precision.
template <class Eval>
RatInterval refine_until(Eval&& eval, unsigned precision) {
  const Rational target = pow2_inverse(precision);
  mpfr_prec_t bits = static_cast<mpfr_prec_t>(precision) + 32;
  for (int attempt = 0; attempt < 12; ++attempt, bits *= 2) {
    RatInterval iv = eval(bits);
    if (iv.width() <= target) return iv;
  }
  throw std::runtime_error("enclosure did not reach the requested width");
}

}  // namespace mtsirelson::certified
