#pragma once

// JSON encoding of space descriptions. Rationals are always "p/q" strings.
//
//   {"schemaVersion": 1, "name": "...", "space": SPACE, "options": {...}}
//   SPACE  = {"form": "FiniteMixed", "entries": [{"family": FAMILY, "theta": "1/2"}, ...]}
//          | {"form": "AdmissibleSeq", "coeffs": COEFFS}
//   FAMILY = {"kind": "AnK", "k": 3} | {"kind": "Schreier"} | {"kind": "Singletons"}
//          | {"kind": "ExplicitFinite", "members": [[1, 2], [3]]} | {"kind": "PairTailPow2"}
//          | {"kind": "PairConsecutive"} | {"kind": "UnionOf", "parts": [FAMILY, ...]}
//   COEFFS = {"form": "ExplicitList", "values": ["1", "1/2"], "tail": "1/3"} | {"form": "Constant", "c": "1/2"}
//          | {"form": "InvLinear"} | {"form": "PowerLaw", "gamma": "1", "alpha": "1/2"}
//          | {"form": "InvLogPow", "r": "1"}
//
// Unknown fields are rejected everywhere.

#include "mtsirelson/space.hpp"

#include "json.hpp"

#include <initializer_list>
#include <stdexcept>
#include <string>

namespace mtsirelson {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

class SchemaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void allow_only(const Json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* key : keys) ok = ok || k == key;
    if (!ok) throw SchemaError(where + ": unknown field \"" + k + "\"");
  }
}

inline const Json& require(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw SchemaError(where + ": missing field \"" + key + "\"");
  return j.at(key);
}

inline Rational rational_field(const Json& j, const char* key, const std::string& where) {
  const Json& v = require(j, key, where);
  if (!v.is_string()) throw SchemaError(where + "." + key + ": rationals are written as strings");
  try {
    return parse_rational(v.get<std::string>());
  } catch (const std::exception& e) {
    throw SchemaError(where + "." + key + ": " + e.what());
  }
}

inline std::string string_field(const Json& j, const char* key, const std::string& where) {
  const Json& v = require(j, key, where);
  if (!v.is_string()) throw SchemaError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

inline Index integer_field(const Json& j, const char* key, const std::string& where) {
  const Json& v = require(j, key, where);
  if (!v.is_number_integer()) throw SchemaError(where + "." + key + ": expected an integer");
  return v.get<Index>();
}

}  // namespace detail

inline Json to_json(const FinSet& s) { return Json(s.elements()); }

inline FinSet finset_from_json(const Json& j, const std::string& where = "set") {
  if (!j.is_array()) throw SchemaError(where + ": expected an array of positive integers");
  std::vector<Index> v;
  for (const auto& e : j) {
    if (!e.is_number_integer()) throw SchemaError(where + ": expected integers");
    v.push_back(e.get<Index>());
  }
  try {
    return FinSet(std::move(v));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(where + ": " + e.what());
  }
}

inline Json to_json(const FamilyDescriptor& f) {
  return std::visit(
      [](const auto& k) -> Json {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, AnK>) {
          return Json{{"kind", "AnK"}, {"k", k.k}};
        } else if constexpr (std::is_same_v<T, Schreier>) {
          return Json{{"kind", "Schreier"}};
        } else if constexpr (std::is_same_v<T, Singletons>) {
          return Json{{"kind", "Singletons"}};
        } else if constexpr (std::is_same_v<T, ExplicitFinite>) {
          Json members = Json::array();
          for (const auto& m : k.members) members.push_back(to_json(m));
          return Json{{"kind", "ExplicitFinite"}, {"members", members}};
        } else if constexpr (std::is_same_v<T, PairTailPow2>) {
          return Json{{"kind", "PairTailPow2"}};
        } else if constexpr (std::is_same_v<T, PairConsecutive>) {
          return Json{{"kind", "PairConsecutive"}};
        } else {
          Json parts = Json::array();
          for (const auto& p : k.parts) parts.push_back(to_json(p));
          return Json{{"kind", "UnionOf"}, {"parts", parts}};
        }
      },
      f.kind);
}

inline FamilyDescriptor family_from_json(const Json& j, std::vector<std::string>* warnings = nullptr,
                                         const std::string& where = "family") {
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  const std::string kind = detail::string_field(j, "kind", where);
  if (kind == "AnK") {
    detail::allow_only(j, {"kind", "k"}, where);
    const Index k = detail::integer_field(j, "k", where);
    if (k < 1) throw SchemaError(where + ".k: must be positive");
    return family::ank(k);
  }
  if (kind == "ExplicitFinite") {
    detail::allow_only(j, {"kind", "members"}, where);
    const Json& m = detail::require(j, "members", where);
    if (!m.is_array()) throw SchemaError(where + ".members: expected an array");
    std::vector<FinSet> members;
    for (std::size_t i = 0; i < m.size(); ++i) members.push_back(finset_from_json(m[i], where + ".members[" + std::to_string(i) + "]"));
    return family::explicit_finite(members, warnings);
  }
  if (kind == "UnionOf") {
    detail::allow_only(j, {"kind", "parts"}, where);
    const Json& p = detail::require(j, "parts", where);
    if (!p.is_array() || p.empty()) throw SchemaError(where + ".parts: expected a non-empty array");
    std::vector<FamilyDescriptor> parts;
    for (std::size_t i = 0; i < p.size(); ++i) parts.push_back(family_from_json(p[i], warnings, where + ".parts[" + std::to_string(i) + "]"));
    return family::union_of(std::move(parts));
  }
  detail::allow_only(j, {"kind"}, where);
  if (kind == "Schreier") return family::schreier();
  if (kind == "Singletons") return family::singletons();
  if (kind == "PairTailPow2") return family::pair_tail_pow2();
  if (kind == "PairConsecutive") return family::pair_consecutive();
  throw SchemaError(where + ": unknown family kind \"" + kind + "\"");
}

inline Json to_json(const CoefficientSeq& c) {
  return std::visit(
      [](const auto& s) -> Json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ExplicitList>) {
          Json values = Json::array();
          for (const auto& v : s.values) values.push_back(to_string(v));
          Json out{{"form", "ExplicitList"}, {"values", values}};
          if (s.tail) out["tail"] = to_string(*s.tail);
          return out;
        } else if constexpr (std::is_same_v<T, Constant>) {
          return Json{{"form", "Constant"}, {"c", to_string(s.c)}};
        } else if constexpr (std::is_same_v<T, InvLinear>) {
          return Json{{"form", "InvLinear"}};
        } else if constexpr (std::is_same_v<T, PowerLaw>) {
          return Json{{"form", "PowerLaw"}, {"gamma", to_string(s.gamma)}, {"alpha", to_string(s.alpha)}};
        } else {
          return Json{{"form", "InvLogPow"}, {"r", to_string(s.r)}};
        }
      },
      c);
}

inline CoefficientSeq coeffs_from_json(const Json& j, const std::string& where = "coeffs") {
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  const std::string form = detail::string_field(j, "form", where);
  CoefficientSeq out;
  if (form == "ExplicitList") {
    detail::allow_only(j, {"form", "values", "tail"}, where);
    const Json& v = detail::require(j, "values", where);
    if (!v.is_array()) throw SchemaError(where + ".values: expected an array");
    ExplicitList list;
    for (const auto& e : v) {
      if (!e.is_string()) throw SchemaError(where + ".values: rationals are written as strings");
      list.values.push_back(parse_rational(e.get<std::string>()));
    }
    if (j.contains("tail")) list.tail = detail::rational_field(j, "tail", where);
    out = list;
  } else if (form == "Constant") {
    detail::allow_only(j, {"form", "c"}, where);
    out = Constant{detail::rational_field(j, "c", where)};
  } else if (form == "InvLinear") {
    detail::allow_only(j, {"form"}, where);
    out = InvLinear{};
  } else if (form == "PowerLaw") {
    detail::allow_only(j, {"form", "gamma", "alpha"}, where);
    out = PowerLaw{detail::rational_field(j, "gamma", where), detail::rational_field(j, "alpha", where)};
  } else if (form == "InvLogPow") {
    detail::allow_only(j, {"form", "r"}, where);
    out = InvLogPow{detail::rational_field(j, "r", where)};
  } else {
    throw SchemaError(where + ": unknown coefficient form \"" + form + "\"");
  }
  try {
    validate(out);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(where + ": " + e.what());
  }
  return out;
}

inline Json to_json(const SpaceSpec& s) {
  if (const auto* fm = std::get_if<FiniteMixed>(&s.form)) {
    Json entries = Json::array();
    for (const auto& e : fm->entries) entries.push_back(Json{{"family", to_json(e.family)}, {"theta", to_string(e.theta)}});
    return Json{{"form", "FiniteMixed"}, {"entries", entries}};
  }
  return Json{{"form", "AdmissibleSeq"}, {"coeffs", to_json(std::get<AdmissibleSeq>(s.form).coeffs)}};
}

inline SpaceSpec space_from_json(const Json& j, std::vector<std::string>* warnings = nullptr,
                                 const std::string& where = "space") {
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  const std::string form = detail::string_field(j, "form", where);
  SpaceSpec out;
  if (form == "FiniteMixed") {
    detail::allow_only(j, {"form", "entries"}, where);
    const Json& e = detail::require(j, "entries", where);
    if (!e.is_array() || e.empty()) throw SchemaError(where + ".entries: expected a non-empty array");
    FiniteMixed fm;
    for (std::size_t i = 0; i < e.size(); ++i) {
      const std::string w = where + ".entries[" + std::to_string(i) + "]";
      detail::allow_only(e[i], {"family", "theta"}, w);
      const Rational theta = detail::rational_field(e[i], "theta", w);
      if (theta <= 0 || theta > 1) throw SchemaError(w + ".theta: " + to_string(theta) + " not in (0,1]");
      fm.entries.push_back({family_from_json(detail::require(e[i], "family", w), warnings, w + ".family"), theta});
    }
    out.form = std::move(fm);
  } else if (form == "AdmissibleSeq") {
    detail::allow_only(j, {"form", "coeffs"}, where);
    out.form = AdmissibleSeq{coeffs_from_json(detail::require(j, "coeffs", where), where + ".coeffs")};
  } else {
    throw SchemaError(where + ": unknown space form \"" + form + "\"");
  }
  return out;
}

/// Tunables carried by a spec document; zero means "use the command default".
struct SpecOptions {
  unsigned precision = 64;
  int index_cap = 32;
  std::size_t max_support = 128;
  std::size_t max_cells = std::size_t{1} << 21;
  std::size_t node_budget = 200000;
  friend bool operator==(const SpecOptions&, const SpecOptions&) = default;
};

struct SpecDocument {
  int schema_version = kSchemaVersion;
  std::string name;
  SpaceSpec space;
  SpecOptions options;
  std::vector<std::string> warnings;
};

inline Json to_json(const SpecOptions& o) {
  return Json{{"precision", o.precision},
              {"indexCap", o.index_cap},
              {"maxSupport", o.max_support},
              {"maxCells", o.max_cells},
              {"nodeBudget", o.node_budget}};
}

inline SpecOptions options_from_json(const Json& j) {
  detail::allow_only(j, {"precision", "indexCap", "maxSupport", "maxCells", "nodeBudget"}, "options");
  SpecOptions o;
  auto positive = [&](const char* key) {
    const Index v = detail::integer_field(j, key, "options");
    if (v < 1) throw SchemaError(std::string("options.") + key + ": must be positive");
    return v;
  };
  if (j.contains("precision")) o.precision = static_cast<unsigned>(positive("precision"));
  if (j.contains("indexCap")) o.index_cap = static_cast<int>(positive("indexCap"));
  if (j.contains("maxSupport")) o.max_support = static_cast<std::size_t>(positive("maxSupport"));
  if (j.contains("maxCells")) o.max_cells = static_cast<std::size_t>(positive("maxCells"));
  if (j.contains("nodeBudget")) o.node_budget = static_cast<std::size_t>(positive("nodeBudget"));
  return o;
}

inline SpecDocument parse_document(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
  detail::allow_only(j, {"schemaVersion", "name", "space", "options"}, "document");
  SpecDocument doc;
  if (j.contains("schemaVersion")) {
    doc.schema_version = static_cast<int>(detail::integer_field(j, "schemaVersion", "document"));
    if (doc.schema_version != kSchemaVersion) {
      throw SchemaError("document: unsupported schemaVersion " + std::to_string(doc.schema_version));
    }
  }
  if (j.contains("name")) doc.name = detail::string_field(j, "name", "document");
  doc.space = space_from_json(detail::require(j, "space", "document"), &doc.warnings);
  if (j.contains("options")) doc.options = options_from_json(j.at("options"));
  return doc;
}

/// Parses a spec document and returns its space.
inline SpaceSpec parse_spec(const std::string& text, std::vector<std::string>* warnings = nullptr) {
  SpecDocument doc = parse_document(text);
  if (warnings) warnings->insert(warnings->end(), doc.warnings.begin(), doc.warnings.end());
  return doc.space;
}

inline std::string emit_spec(const SpaceSpec& space, const std::string& name = "") {
  Json j{{"schemaVersion", kSchemaVersion}};
  if (!name.empty()) j["name"] = name;
  j["space"] = to_json(space);
  return j.dump(2) + "\n";
}

/// Vectors: {"3": "1/2", "5": "-1"} or the string "segment a..b".
inline FinVec vector_from_json(const Json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    const std::string prefix = "segment ";
    const auto dots = s.find("..");
    if (s.rfind(prefix, 0) != 0 || dots == std::string::npos) throw SchemaError("vector: expected \"segment a..b\"");
    try {
      const Index a = std::stoll(s.substr(prefix.size(), dots - prefix.size()));
      const Index b = std::stoll(s.substr(dots + 2));
      if (a < 1 || a > b) throw SchemaError("vector: segment needs 1 <= a <= b");
      return FinVec::segment(a, b);
    } catch (const std::logic_error&) {
      throw SchemaError("vector: bad segment bounds in \"" + s + "\"");
    }
  }
  if (!j.is_object()) throw SchemaError("vector: expected an object or a segment string");
  FinVec x;
  for (const auto& [k, v] : j.items()) {
    Index pos = 0;
    try {
      std::size_t used = 0;
      pos = std::stoll(k, &used);
      if (used != k.size()) throw std::invalid_argument(k);
    } catch (const std::logic_error&) {
      throw SchemaError("vector: position \"" + k + "\" is not an integer");
    }
    if (pos < 1) throw SchemaError("vector: positions start at 1");
    if (!v.is_string()) throw SchemaError("vector: coefficients are written as strings");
    x.set(pos, parse_rational(v.get<std::string>()));
  }
  return x;
}

inline Json to_json(const FinVec& x) {
  Json j = Json::object();
  for (const auto& [i, a] : x.entries()) j[std::to_string(i)] = to_string(a);
  return j;
}

inline FinVec parse_vector(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error&) {
    j = Json(text);  // bare "segment a..b"
  }
  return vector_from_json(j);
}

}  // namespace mtsirelson
