#pragma once

// Exact scalars and rational enclosures.
//
// Every norm value in the toolkit is an exact rational (GMP mpq) or, when a
// coefficient is irrational, a closed rational interval that provably contains
// the true value.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mtsirelson {

using Rational = mpq_class;
using Integer = mpz_class;
using Index = std::int64_t;

/// num/den in lowest terms (mpq_class(num, den) alone does not reduce).
inline Rational ratio(const Integer& num, const Integer& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Parses "p/q", "p" or a finite decimal such as "0.9" into a reduced rational.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return c == ' '; }), s.end());
  if (s.empty()) {
    throw std::invalid_argument("empty rational literal");
  }
  auto is_digits = [](std::string_view t) {
    return !t.empty() && std::all_of(t.begin(), t.end(), [](unsigned char c) { return c >= '0' && c <= '9'; });
  };
  auto strip_sign = [](std::string_view t) {
    if (!t.empty() && (t.front() == '-' || t.front() == '+')) t.remove_prefix(1);
    return t;
  };

  if (s.front() == '+') s.erase(0, 1);
  Rational out;
  if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string_view whole = std::string_view(s).substr(0, dot);
    std::string_view frac = std::string_view(s).substr(dot + 1);
    std::string_view unsigned_whole = strip_sign(whole);
    if ((!unsigned_whole.empty() && !is_digits(unsigned_whole)) || !is_digits(frac)) {
      throw std::invalid_argument("malformed decimal literal: " + s);
    }
    const bool negative = !whole.empty() && whole.front() == '-';
    Integer num(std::string(unsigned_whole.empty() ? "0" : unsigned_whole) + std::string(frac), 10);
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
    out = Rational(num, den);
    if (negative) out = -out;
  } else {
    auto slash = s.find('/');
    std::string_view num = std::string_view(s).substr(0, slash);
    if (!is_digits(strip_sign(num))) {
      throw std::invalid_argument("malformed rational literal: " + s);
    }
    if (slash == std::string::npos) {
      out = Rational(Integer(std::string(num), 10));
    } else {
      std::string_view den = std::string_view(s).substr(slash + 1);
      if (!is_digits(den)) {
        throw std::invalid_argument("malformed rational literal: " + s);
      }
      Integer d(std::string(den), 10);
      if (d == 0) {
        throw std::invalid_argument("zero denominator in rational literal: " + s);
      }
      out = Rational(Integer(std::string(num), 10), d);
    }
  }
  out.canonicalize();
  return out;
}

/// Canonical "p/q" form; the denominator is always written, so 1 prints as "1/1".
inline std::string to_string(const Rational& q) {
  Rational r = q;
  r.canonicalize();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

/// Decimal rendering truncated toward zero, for human-readable reports only.
inline std::string to_decimal(const Rational& q, int digits = 6) {
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  Integer scaled = q.get_num() * scale / q.get_den();
  const bool negative = scaled < 0 || (scaled == 0 && q < 0);
  Integer mag = abs(scaled);
  std::string body = mag.get_str();
  if (static_cast<int>(body.size()) <= digits) {
    body.insert(0, static_cast<std::size_t>(digits + 1 - static_cast<int>(body.size())), '0');
  }
  body.insert(body.size() - static_cast<std::size_t>(digits), ".");
  return (negative ? "-" : "") + body;
}

/// Closed interval [lo, hi] with rational endpoints. A degenerate interval is an exact value.
struct RatInterval {
  Rational lo;
  Rational hi;

  RatInterval() = default;
  explicit RatInterval(const Rational& point) : lo(point), hi(point) {}
  RatInterval(const Rational& lower, const Rational& upper) : lo(lower), hi(upper) {
    if (lo > hi) {
      throw std::invalid_argument("interval with lo > hi");
    }
  }

  bool is_point() const { return lo == hi; }
  Rational width() const { return hi - lo; }
  bool contains(const Rational& q) const { return lo <= q && q <= hi; }
  bool contains(const RatInterval& other) const { return lo <= other.lo && other.hi <= hi; }
  bool overlaps(const RatInterval& other) const { return !(hi < other.lo || other.hi < lo); }

  /// Exact value; throws if the interval is not degenerate.
  const Rational& exact() const {
    if (!is_point()) {
      throw std::logic_error("enclosure is not an exact value");
    }
    return lo;
  }

  friend bool operator==(const RatInterval& a, const RatInterval& b) { return a.lo == b.lo && a.hi == b.hi; }
};

inline std::string to_string(const RatInterval& iv) {
  if (iv.is_point()) return to_string(iv.lo);
  return "[" + to_string(iv.lo) + ", " + to_string(iv.hi) + "]";
}

inline std::ostream& operator<<(std::ostream& os, const RatInterval& iv) { return os << to_string(iv); }

/// 2^-bits as a rational.
inline Rational pow2_inverse(unsigned bits) {
  Integer den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, bits);
  return Rational(Integer(1), den);
}

inline RatInterval operator*(const RatInterval& a, const RatInterval& b) {
  Rational c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
}

inline RatInterval operator+(const RatInterval& a, const RatInterval& b) { return {a.lo + b.lo, a.hi + b.hi}; }

/// Quotient of intervals with positive denominators.
inline RatInterval divide_positive(const RatInterval& a, const RatInterval& b) {
  if (b.lo <= 0) {
    throw std::domain_error("interval division by a non-positive enclosure");
  }
  Rational c[4] = {a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi};
  return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
}

}  // namespace mtsirelson
