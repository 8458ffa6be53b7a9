#pragma once

#include "mtsirelson/rational.hpp"

#include <algorithm>
#include <initializer_list>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mtsirelson {

/// Finite subset of the positive integers, kept strictly increasing.
class FinSet {
 public:
  FinSet() = default;
  FinSet(std::initializer_list<Index> elems) : FinSet(std::vector<Index>(elems)) {}

  /// Sorts and validates; duplicates and non-positive elements are rejected.
  explicit FinSet(std::vector<Index> elems) : elems_(std::move(elems)) {
    std::sort(elems_.begin(), elems_.end());
    if (!elems_.empty() && elems_.front() < 1) {
      throw std::invalid_argument("finite sets hold positive integers only");
    }
    if (std::adjacent_find(elems_.begin(), elems_.end()) != elems_.end()) {
      throw std::invalid_argument("duplicate element in finite set");
    }
  }

  static FinSet interval(Index a, Index b) {
    std::vector<Index> v;
    for (Index i = a; i <= b; ++i) v.push_back(i);
    return FinSet(std::move(v));
  }

  bool empty() const { return elems_.empty(); }
  std::size_t size() const { return elems_.size(); }
  Index min() const { return elems_.front(); }
  Index max() const { return elems_.back(); }
  bool contains(Index i) const { return std::binary_search(elems_.begin(), elems_.end(), i); }
  const std::vector<Index>& elements() const { return elems_; }
  auto begin() const { return elems_.begin(); }
  auto end() const { return elems_.end(); }

  bool is_subset_of(const FinSet& other) const {
    return std::includes(other.elems_.begin(), other.elems_.end(), elems_.begin(), elems_.end());
  }

  FinSet intersect(const FinSet& other) const {
    std::vector<Index> out;
    std::set_intersection(elems_.begin(), elems_.end(), other.elems_.begin(), other.elems_.end(),
                          std::back_inserter(out));
    return FinSet(std::move(out));
  }

  friend bool operator==(const FinSet&, const FinSet&) = default;
  friend auto operator<=>(const FinSet&, const FinSet&) = default;

 private:
  std::vector<Index> elems_;
};

/// E < F: every element of E is below every element of F. Empty sets compare vacuously.
inline bool precedes(const FinSet& e, const FinSet& f) { return e.empty() || f.empty() || e.max() < f.min(); }

inline std::string to_string(const FinSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s.elements()[i]);
  }
  return out + "}";
}

/// Finitely supported vector of exact rationals indexed by positive integers.
/// Zero coefficients are never stored, so the key set is the support.
class FinVec {
 public:
  FinVec() = default;
  FinVec(std::initializer_list<std::pair<const Index, Rational>> entries) {
    for (const auto& [i, a] : entries) set(i, a);
  }

  /// Sum of e_i for a <= i <= b.
  static FinVec segment(Index a, Index b) {
    FinVec v;
    for (Index i = a; i <= b; ++i) v.set(i, Rational(1));
    return v;
  }

  void set(Index i, const Rational& a) {
    if (i < 1) throw std::invalid_argument("vector positions start at 1");
    if (a == 0) {
      entries_.erase(i);
    } else {
      entries_[i] = a;
      entries_[i].canonicalize();
    }
  }

  Rational operator[](Index i) const {
    auto it = entries_.find(i);
    return it == entries_.end() ? Rational(0) : it->second;
  }

  bool is_zero() const { return entries_.empty(); }
  std::size_t support_size() const { return entries_.size(); }
  const std::map<Index, Rational>& entries() const { return entries_; }

  FinSet support() const {
    std::vector<Index> s;
    s.reserve(entries_.size());
    for (const auto& [i, a] : entries_) s.push_back(i);
    return FinSet(std::move(s));
  }

  Rational sup_norm() const {
    Rational m = 0;
    for (const auto& [i, a] : entries_) m = std::max<Rational>(m, abs(a));
    return m;
  }

  Rational l1_norm() const {
    Rational s = 0;
    for (const auto& [i, a] : entries_) s += abs(a);
    return s;
  }

  FinVec abs_values() const {
    FinVec out;
    for (const auto& [i, a] : entries_) out.entries_[i] = abs(a);
    return out;
  }

  FinVec scaled(const Rational& c) const {
    FinVec out;
    if (c == 0) return out;
    for (const auto& [i, a] : entries_) out.set(i, a * c);
    return out;
  }

  friend FinVec operator+(const FinVec& x, const FinVec& y) {
    FinVec out = x;
    for (const auto& [i, a] : y.entries_) out.set(i, out[i] + a);
    return out;
  }

  friend bool operator==(const FinVec& x, const FinVec& y) { return x.entries_ == y.entries_; }

 private:
  std::map<Index, Rational> entries_;
};

/// E x: coefficients outside E are zeroed.
inline FinVec restrict(const FinVec& x, const FinSet& e) {
  FinVec out;
  for (const auto& [i, a] : x.entries()) {
    if (e.contains(i)) out.set(i, a);
  }
  return out;
}

inline std::string to_string(const FinVec& x) {
  if (x.is_zero()) return "0";
  std::string out;
  for (const auto& [i, a] : x.entries()) {
    if (!out.empty()) out += " + ";
    out += to_string(a) + "*e" + std::to_string(i);
  }
  return out;
}

}  // namespace mtsirelson
