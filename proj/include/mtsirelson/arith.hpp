#pragma once

// Scalar policies for the norm dynamic program.
//
// ExactArith works in GMP rationals. FixedArith<Up> works on the dyadic grid
// 2^-48 held in 128-bit integers, rounding every product down (Up = false) or
// up (Up = true). Sums of grid values are exact, and the norm recursion is
// monotone in every weight and coefficient, so a Down run on lower weight
// endpoints and an Up run on upper endpoints bracket the true value.

#include "mtsirelson/rational.hpp"

#include <stdexcept>

namespace mtsirelson {

struct ExactArith {
  using Value = Rational;
  static constexpr bool exact = true;

  static Value from_rational(const Rational& q) { return q; }
  static Value mul(const Value& weight, const Value& v) { return weight * v; }
  static Rational to_rational(const Value& v) { return v; }
};

template <bool Up>
struct FixedArith {
  using Value = __int128;
  static constexpr bool exact = false;
  static constexpr int kFrac = 48;
  // Values stay below 2^(kFrac + kMagnitudeBits) so weight * value fits in 127 bits.
  static constexpr int kMagnitudeBits = 29;

  static Value from_rational(const Rational& q) {
    if (q < 0) throw std::domain_error("fixed-point values are non-negative");
    Integer scaled = q.get_num();
    mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), kFrac);
    Integer r;
    if constexpr (Up) {
      mpz_cdiv_q(r.get_mpz_t(), scaled.get_mpz_t(), q.get_den_mpz_t());
    } else {
      mpz_fdiv_q(r.get_mpz_t(), scaled.get_mpz_t(), q.get_den_mpz_t());
    }
    if (mpz_sizeinbase(r.get_mpz_t(), 2) > kFrac + kMagnitudeBits) {
      throw std::overflow_error("magnitude too large for the fixed-point grid");
    }
    Value out = 0;
    const std::string hex = r.get_str(16);
    for (char c : hex) out = out * 16 + (c <= '9' ? c - '0' : c - 'a' + 10);
    return out;
  }

  static Value mul(const Value& weight, const Value& v) {
    const Value p = weight * v;
    if constexpr (Up) {
      return (p + ((Value(1) << kFrac) - 1)) >> kFrac;
    } else {
      return p >> kFrac;
    }
  }

  static Rational to_rational(Value v) {
    Integer n = 0;
    const Value mask = (Value(1) << 64) - 1;
    const auto hi = static_cast<unsigned long>(static_cast<unsigned __int128>(v >> 64));
    const auto lo = static_cast<unsigned long>(static_cast<unsigned __int128>(v & mask));
    n = hi;
    mpz_mul_2exp(n.get_mpz_t(), n.get_mpz_t(), 64);
    n += Integer(lo);
    Rational out(n, 1);
    mpq_div_2exp(out.get_mpq_t(), out.get_mpq_t(), kFrac);
    return out;
  }
};

}  // namespace mtsirelson
