#pragma once

#include "mtsirelson/norm_engine.hpp"

#include <functional>
#include <random>

namespace mtsirelson::reference {

/// Random rational vector with support inside [1, max_pos]; never zero.
inline FinVec random_vector(std::mt19937_64& rng, Index max_pos, int max_num = 6, int max_den = 4, bool signs = true) {
  FinVec x;
  while (x.is_zero()) {
    for (Index i = 1; i <= max_pos; ++i) {
      if (rng() % 3 == 0) continue;
      long num = 1 + static_cast<long>(rng() % static_cast<unsigned>(max_num));
      if (signs && rng() % 2) num = -num;
      x.set(i, ratio(num, 1 + static_cast<long>(rng() % static_cast<unsigned>(max_den))));
    }
  }
  return x;
}

/// Right-hand side of the implicit norm equation evaluated with the engine's own
/// values for the parts: max(||x||_inf, max over admissible interval splits of
/// theta * sum ||E_i x||). Exact spaces only.
inline Rational implicit_rhs(const NormEngine& engine, const FinVec& x) {
  const auto& space = engine.space();
  std::vector<std::pair<FamilyDescriptor, Rational>> entries;
  std::size_t m = x.support().size();
  if (const auto* fm = std::get_if<FiniteMixed>(&space.form)) {
    for (const auto& e : fm->entries) entries.emplace_back(e.family, e.theta);
  } else {
    const auto& seq = std::get<AdmissibleSeq>(space.form).coeffs;
    std::size_t k_max = std::max<std::size_t>(m, 1);
    if (const auto* l = std::get_if<ExplicitList>(&seq)) k_max = std::max(k_max, l->values.size() + 1);
    if (auto len = finite_length(seq)) k_max = std::min(k_max, *len);
    for (std::size_t k = 1; k <= k_max; ++k) entries.emplace_back(family::ank(static_cast<Index>(k)), theta_at(seq, static_cast<Index>(k)).exact());
  }
  const std::vector<Index> pos = x.support().elements();
  Rational best = x.sup_norm();
  // Interval parts over support positions, gaps allowed, at least two parts.
  std::vector<std::pair<std::size_t, std::size_t>> parts;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (parts.size() >= 2) {
      std::vector<FinSet> sets;
      Rational sum = 0;
      for (const auto& [a, b] : parts) {
        sets.push_back(FinSet::interval(pos[a], pos[b]));
        sum += engine.norm(restrict(x, sets.back())).value.exact();
      }
      for (const auto& [fam, theta] : entries) {
        if (theta * sum > best && admissible(fam, std::span<const FinSet>(sets))) best = theta * sum;
      }
    }
    for (std::size_t a = start; a < m; ++a) {
      for (std::size_t b = a; b < m; ++b) {
        if (parts.empty() && b + 1 == m && a == 0) continue;
        parts.emplace_back(a, b);
        rec(b + 1);
        parts.pop_back();
      }
    }
  };
  rec(0);
  return best;
}

}  // namespace mtsirelson::reference
