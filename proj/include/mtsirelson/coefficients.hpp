#pragma once

// Coefficient sequences (theta_k) with values in (0, 1].

#include "mtsirelson/certified.hpp"
#include "mtsirelson/rational.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace mtsirelson {

/// theta_k = values[k-1] for k <= values.size(), then `tail` (if present) for every later k.
/// Without a tail the sequence is finite and indexes only k = 1..values.size().
struct ExplicitList {
  std::vector<Rational> values;
  std::optional<Rational> tail;
  friend bool operator==(const ExplicitList&, const ExplicitList&) = default;
};

struct Constant {
  Rational c;
  friend bool operator==(const Constant&, const Constant&) = default;
};

/// theta_k = 1/k.
struct InvLinear {
  friend bool operator==(const InvLinear&, const InvLinear&) = default;
};

/// theta_k = gamma * k^(-alpha).
struct PowerLaw {
  Rational gamma;
  Rational alpha;
  friend bool operator==(const PowerLaw&, const PowerLaw&) = default;
};

/// theta_k = 1 / (log2(1+k))^r.
struct InvLogPow {
  Rational r;
  friend bool operator==(const InvLogPow&, const InvLogPow&) = default;
};

using CoefficientSeq = std::variant<ExplicitList, Constant, InvLinear, PowerLaw, InvLogPow>;

namespace detail {
inline bool in_unit_range(const Rational& q) { return q > 0 && q <= 1; }
}  // namespace detail

/// Throws std::invalid_argument unless every value of the sequence lies in (0, 1].
inline void validate(const CoefficientSeq& seq) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ExplicitList>) {
          if (s.values.empty() && !s.tail) throw std::invalid_argument("explicit coefficient list is empty");
          for (const auto& v : s.values) {
            if (!detail::in_unit_range(v)) throw std::invalid_argument("coefficient " + to_string(v) + " not in (0,1]");
          }
          if (s.tail && !detail::in_unit_range(*s.tail)) {
            throw std::invalid_argument("coefficient tail " + to_string(*s.tail) + " not in (0,1]");
          }
        } else if constexpr (std::is_same_v<T, Constant>) {
          if (!detail::in_unit_range(s.c)) throw std::invalid_argument("constant coefficient not in (0,1]");
        } else if constexpr (std::is_same_v<T, PowerLaw>) {
          if (!detail::in_unit_range(s.gamma)) throw std::invalid_argument("power-law gamma not in (0,1]");
          if (s.alpha < 0) throw std::invalid_argument("power-law alpha must be non-negative");
        } else if constexpr (std::is_same_v<T, InvLogPow>) {
          if (s.r < 0) throw std::invalid_argument("log-power exponent must be non-negative");
        }
      },
      seq);
}

/// Number of indexed coefficients; nullopt for infinite sequences.
inline std::optional<std::size_t> finite_length(const CoefficientSeq& seq) {
  if (const auto* list = std::get_if<ExplicitList>(&seq); list && !list->tail) return list->values.size();
  return std::nullopt;
}

/// theta_k, exact where the value is rational and otherwise an enclosure of width <= 2^-precision.
inline RatInterval theta_at(const CoefficientSeq& seq, Index k, unsigned precision = 64) {
  if (k < 1) throw std::invalid_argument("coefficient index must be >= 1");
  return std::visit(
      [&](const auto& s) -> RatInterval {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ExplicitList>) {
          if (static_cast<std::size_t>(k) <= s.values.size()) return RatInterval(s.values[static_cast<std::size_t>(k - 1)]);
          if (!s.tail) throw std::out_of_range("coefficient index beyond a finite list");
          return RatInterval(*s.tail);
        } else if constexpr (std::is_same_v<T, Constant>) {
          return RatInterval(s.c);
        } else if constexpr (std::is_same_v<T, InvLinear>) {
          return RatInterval(Rational(1, k));
        } else if constexpr (std::is_same_v<T, PowerLaw>) {
          const Rational kq(k);
          if (auto p = certified::exact_power(kq, s.alpha)) {
            Rational v = s.gamma / *p;
            v.canonicalize();
            return RatInterval(v);
          }
          if (s.alpha == Rational(1, 2)) {
            RatInterval root = certified::isqrt_enclosure(Integer(k), precision + 4);
            return divide_positive(RatInterval(s.gamma), root);
          }
          return certified::refine_until(
              [&](mpfr_prec_t bits) {
                return divide_positive(RatInterval(s.gamma), certified::pow_enclosure(RatInterval(kq), s.alpha, bits));
              },
              precision);
        } else {
          if (s.r == 0 || k == 1) return RatInterval(Rational(1));
          const Integer arg = Integer(k) + 1;
          if (mpz_popcount(arg.get_mpz_t()) == 1) {
            const Rational base(static_cast<long>(mpz_sizeinbase(arg.get_mpz_t(), 2) - 1));
            if (auto p = certified::exact_power(base, s.r)) return RatInterval(Rational(1) / *p);
          }
          return certified::refine_until(
              [&](mpfr_prec_t bits) {
                RatInterval lg = certified::log2_enclosure(arg, bits);
                return divide_positive(RatInterval(Rational(1)), certified::pow_enclosure(lg, s.r, bits));
              },
              precision);
        }
      },
      seq);
}

/// True for forms whose values never increase with k.
inline bool is_nonincreasing(const CoefficientSeq& seq) {
  if (const auto* list = std::get_if<ExplicitList>(&seq)) {
    for (std::size_t i = 1; i < list->values.size(); ++i) {
      if (list->values[i] > list->values[i - 1]) return false;
    }
    return !(list->tail && !list->values.empty() && *list->tail > list->values.back());
  }
  return true;
}

/// theta'_k = sup{theta_j : j >= k}. Catalog forms other than ExplicitList are already non-increasing.
inline CoefficientSeq envelope(const CoefficientSeq& seq) {
  const auto* list = std::get_if<ExplicitList>(&seq);
  if (!list) return seq;
  ExplicitList out = *list;
  std::optional<Rational> running = list->tail;
  for (std::size_t i = out.values.size(); i-- > 0;) {
    if (running && *running > out.values[i]) out.values[i] = *running;
    running = out.values[i];
  }
  return out;
}

/// sup{theta_j : j >= d}; nullopt when a finite list has no index >= d.
inline std::optional<RatInterval> envelope_at(const CoefficientSeq& seq, Index d, unsigned precision = 64) {
  if (const auto* list = std::get_if<ExplicitList>(&seq)) {
    std::optional<Rational> best = list->tail;
    for (std::size_t i = static_cast<std::size_t>(std::max<Index>(d, 1) - 1); i < list->values.size(); ++i) {
      if (!best || list->values[i] > *best) best = list->values[i];
    }
    if (!best) return std::nullopt;
    return RatInterval(*best);
  }
  return theta_at(seq, std::max<Index>(d, 1), precision);
}

/// Smallest k >= d attaining the envelope value at d.
inline Index envelope_argmax(const CoefficientSeq& seq, Index d) {
  if (const auto* list = std::get_if<ExplicitList>(&seq)) {
    auto env = envelope_at(seq, d);
    for (std::size_t i = static_cast<std::size_t>(d - 1); i < list->values.size(); ++i) {
      if (list->values[i] == env->lo) return static_cast<Index>(i + 1);
    }
    return std::max<Index>(d, static_cast<Index>(list->values.size()) + 1);
  }
  return d;
}

/// inf{theta_k}; zero for sequences converging to zero.
inline Rational infimum(const CoefficientSeq& seq) {
  return std::visit(
      [](const auto& s) -> Rational {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ExplicitList>) {
          Rational m = s.tail ? *s.tail : s.values.front();
          for (const auto& v : s.values) m = std::min<Rational>(m, v);
          return m;
        } else if constexpr (std::is_same_v<T, Constant>) {
          return s.c;
        } else if constexpr (std::is_same_v<T, PowerLaw>) {
          return s.alpha == 0 ? s.gamma : Rational(0);
        } else if constexpr (std::is_same_v<T, InvLogPow>) {
          return s.r == 0 ? Rational(1) : Rational(0);
        } else {
          return Rational(0);
        }
      },
      seq);
}

inline std::string describe(const CoefficientSeq& seq) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ExplicitList>) {
          std::string out = "ExplicitList[";
          for (std::size_t i = 0; i < s.values.size(); ++i) out += (i ? "," : "") + to_string(s.values[i]);
          out += "]";
          if (s.tail) out += " tail " + to_string(*s.tail);
          return out;
        } else if constexpr (std::is_same_v<T, Constant>) {
          return "Constant(" + to_string(s.c) + ")";
        } else if constexpr (std::is_same_v<T, InvLinear>) {
          return "InvLinear";
        } else if constexpr (std::is_same_v<T, PowerLaw>) {
          return "PowerLaw(" + to_string(s.gamma) + ", " + to_string(s.alpha) + ")";
        } else {
          return "InvLogPow(" + to_string(s.r) + ")";
        }
      },
      seq);
}

}  // namespace mtsirelson
