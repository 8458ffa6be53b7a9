#pragma once

// Mixed Tsirelson space descriptions: a finite list of (family, theta) pairs, or
// the scheme (A_k, theta_k) for k = 1, 2, ... driven by a coefficient sequence.

#include "mtsirelson/coefficients.hpp"
#include "mtsirelson/families.hpp"

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace mtsirelson {

struct MixedEntry {
  FamilyDescriptor family;
  Rational theta;
  friend bool operator==(const MixedEntry&, const MixedEntry&) = default;
};

struct FiniteMixed {
  std::vector<MixedEntry> entries;
  friend bool operator==(const FiniteMixed&, const FiniteMixed&) = default;
};

/// T[(A_k, theta_k)] over every k the sequence indexes.
struct AdmissibleSeq {
  CoefficientSeq coeffs;
  friend bool operator==(const AdmissibleSeq&, const AdmissibleSeq&) = default;
};

struct SpaceSpec {
  std::variant<FiniteMixed, AdmissibleSeq> form;
  friend bool operator==(const SpaceSpec&, const SpaceSpec&) = default;
};

inline void validate(const SpaceSpec& space) {
  if (const auto* fm = std::get_if<FiniteMixed>(&space.form)) {
    if (fm->entries.empty()) throw std::invalid_argument("a finite mixed space needs at least one entry");
    for (const auto& e : fm->entries) {
      if (e.theta <= 0 || e.theta > 1) throw std::invalid_argument("theta " + to_string(e.theta) + " not in (0,1]");
    }
  } else {
    validate(std::get<AdmissibleSeq>(space.form).coeffs);
  }
}

namespace space {

inline SpaceSpec finite_mixed(std::vector<MixedEntry> entries) {
  SpaceSpec s{FiniteMixed{std::move(entries)}};
  validate(s);
  return s;
}

inline SpaceSpec single(FamilyDescriptor fam, Rational theta) { return finite_mixed({{std::move(fam), std::move(theta)}}); }

inline SpaceSpec admissible_seq(CoefficientSeq coeffs) {
  SpaceSpec s{AdmissibleSeq{std::move(coeffs)}};
  validate(s);
  return s;
}

inline SpaceSpec tsirelson() { return single(family::schreier(), Rational(1, 2)); }

}  // namespace space

inline bool is_finite_mixed(const SpaceSpec& s) { return std::holds_alternative<FiniteMixed>(s.form); }

namespace detail {
inline bool only_cardinality_families(const FamilyDescriptor& f) {
  if (std::holds_alternative<AnK>(f.kind) || std::holds_alternative<Singletons>(f.kind)) return true;
  if (const auto* u = std::get_if<UnionOf>(&f.kind)) {
    for (const auto& p : u->parts) {
      if (!only_cardinality_families(p)) return false;
    }
    return true;
  }
  return false;
}
}  // namespace detail

/// True when ||sum_{i in F} e_i|| depends only on |F|: every family constrains cardinality alone.
inline bool is_position_invariant(const SpaceSpec& s) {
  if (const auto* fm = std::get_if<FiniteMixed>(&s.form)) {
    for (const auto& e : fm->entries) {
      if (!detail::only_cardinality_families(e.family)) return false;
    }
  }
  return true;
}

inline std::string describe(const SpaceSpec& s) {
  if (const auto* fm = std::get_if<FiniteMixed>(&s.form)) {
    std::string out = "T[";
    for (std::size_t i = 0; i < fm->entries.size(); ++i) {
      out += (i ? ", (" : "(") + describe(fm->entries[i].family) + ", " + to_string(fm->entries[i].theta) + ")";
    }
    return out + "]";
  }
  return "T[(A_k, theta_k)] with theta = " + describe(std::get<AdmissibleSeq>(s.form).coeffs);
}

}  // namespace mtsirelson
