#pragma once

// Command-line frontend. run_cli() does all the work so it can be driven from
// tests; tools/mtsirelson_cli.cpp only forwards argv.
//
// Exit codes: 0 success, 1 usage or input error, 2 computation budget exceeded,
// 3 undetermined verdict (classify) or evidence-only comparison (compare).

#include "mtsirelson/classifier.hpp"
#include "mtsirelson/dual_ball.hpp"
#include "mtsirelson/serialization.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace mtsirelson::cli {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode { kOk = 0, kUsage = 1, kBudget = 2, kUndetermined = 3 };

enum class Format { Text, Csv, Json };

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct RunReport {
  std::vector<std::string> command;
  std::string digest;
  Json results = Json::object();
  std::vector<std::string> lines;  // text rendering
  Table table;                     // csv rendering
  double seconds = 0;
  int exit_code = kOk;
};

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ull) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

inline Json report_json(const RunReport& r, bool timing = true) {
  Json j{{"schemaVersion", kSchemaVersion}, {"command", r.command}, {"inputsDigest", r.digest},
         {"results", r.results}, {"exitCode", r.exit_code}};
  if (timing) j["timing"] = Json{{"seconds", r.seconds}};
  j["versions"] = Json{{"mtsirelson", kVersion}, {"gmp", gmp_version}, {"mpfr", mpfr_get_version()}};
  return j;
}

inline std::string emit_report(const RunReport& r, Format format, bool timing = true) {
  std::string out;
  switch (format) {
    case Format::Json:
      return report_json(r, timing).dump(2) + "\n";
    case Format::Csv:
      for (std::size_t i = 0; i < r.table.columns.size(); ++i) out += (i ? "," : "") + csv_field(r.table.columns[i]);
      out += "\n";
      for (const auto& row : r.table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_field(row[i]);
        out += "\n";
      }
      return out;
    case Format::Text:
      for (const auto& l : r.lines) out += l + "\n";
      return out;
  }
  return out;
}

// ---- JSON views of results -------------------------------------------------

inline Json to_json(const RatInterval& iv) {
  if (iv.is_point()) return to_string(iv.lo);
  return Json{{"lo", to_string(iv.lo)}, {"hi", to_string(iv.hi)}};
}

inline std::string text(const RatInterval& iv) {
  if (iv.is_point()) return to_string(iv.lo);
  return "[" + to_string(iv.lo) + ", " + to_string(iv.hi) + "] ~ " + to_decimal(iv.lo, 9);
}

inline Json to_json(const PartitionNode& n) {
  Json j{{"rule", n.rule}, {"tag", n.tag}, {"weight", to_string(n.weight)}, {"support", mtsirelson::to_json(n.support)}};
  if (n.marks) j["marks"] = mtsirelson::to_json(*n.marks);
  if (n.children.empty()) {
    j["argmax"] = n.argmax;
  } else {
    Json c = Json::array();
    for (const auto& ch : n.children) c.push_back(to_json(ch));
    j["children"] = c;
  }
  return j;
}

inline void partition_lines(const PartitionNode& n, std::vector<std::string>& out, int depth = 0) {
  std::string line(2 * depth + 2, ' ');
  if (n.children.empty()) {
    line += "sup at e" + std::to_string(n.argmax) + " over " + to_string(n.support);
  } else {
    line += to_string(n.weight) + " * (" + n.rule + ")";
    if (n.marks) line += " marks " + to_string(*n.marks);
  }
  out.push_back(line);
  for (const auto& c : n.children) partition_lines(c, out, depth + 1);
}

inline Json to_json(const Evidence& e) { return Json{{"name", e.name}, {"columns", e.columns}, {"rows", e.rows}}; }

inline Json to_json(const PValue& p) {
  Json j{{"n", p.n}, {"theta", to_string(p.theta)}, {"expression", p.expression}, {"enclosure", to_json(p.enclosure)},
         {"decimal", to_decimal(p.enclosure.lo, 9)}};
  j["exact"] = p.exact ? Json(to_string(*p.exact)) : Json(nullptr);
  return j;
}

inline Json to_json(const ClassificationReport& r) {
  Json verdicts = Json::array();
  for (const auto& v : r.verdicts) {
    verdicts.push_back(Json{{"property", to_string(v.property)}, {"rule", v.rule}, {"detail", v.detail}, {"evidenceOnly", v.evidence_only}});
  }
  Json evidence = Json::array();
  for (const auto& e : r.evidence) evidence.push_back(to_json(e));
  Json j{{"space", r.space}, {"verdicts", verdicts}};
  j["p"] = r.p ? to_json(*r.p) : Json(nullptr);
  j["reflexive"] = r.reflexive ? Json(*r.reflexive) : Json(nullptr);
  j["reflexiveRule"] = r.reflexive_rule;
  j["reductions"] = r.reductions;
  j["evidence"] = evidence;
  j["diagnostics"] = r.diagnostics;
  return j;
}

inline void report_lines(const ClassificationReport& r, std::vector<std::string>& out, const std::string& indent = "") {
  out.push_back(indent + "space: " + r.space);
  for (const auto& red : r.reductions) out.push_back(indent + "reduction: " + red);
  for (const auto& v : r.verdicts) {
    out.push_back(indent + (v.evidence_only ? "evidence: " : "verdict: ") + to_string(v.property) + " [" + v.rule + "] " + v.detail);
  }
  if (r.p) out.push_back(indent + "p: " + detail::p_text(*r.p));
  if (r.reflexive) out.push_back(indent + "reflexive: " + (*r.reflexive ? "yes" : "no") + " [" + r.reflexive_rule + "]");
  for (const auto& d : r.diagnostics) out.push_back(indent + "diagnostic: " + d);
  for (const auto& e : r.evidence) {
    std::string head;
    for (const auto& c : e.columns) head += (head.empty() ? "" : " ") + c;
    out.push_back(indent + "table " + e.name + " (" + head + "):");
    for (const auto& row : e.rows) {
      std::string l;
      for (const auto& c : row) l += (l.empty() ? "" : " ") + c;
      out.push_back(indent + "  " + l);
    }
  }
}

// ---- input helpers ---------------------------------------------------------

struct Inputs {
  std::string digest_material;

  std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    digest_material += ss.str();
    digest_material.push_back('\0');
    return ss.str();
  }

  /// Inline JSON (starting with '{' or '[') or a path.
  std::string text_or_file(const std::string& arg) {
    const auto first = arg.find_first_not_of(" \t\n");
    if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[' || arg[first] == '"')) return arg;
    return read_file(arg);
  }

  SpecDocument document(const std::string& arg) { return parse_document(text_or_file(arg)); }

  Json json(const std::string& arg, const std::string& what) {
    try {
      return Json::parse(text_or_file(arg));
    } catch (const Json::parse_error& e) {
      throw SchemaError(what + ": malformed JSON: " + e.what());
    }
  }
};

inline FinSet parse_support(const std::string& s) {
  if (const auto dots = s.find(".."); dots != std::string::npos) {
    try {
      return FinSet::interval(std::stoll(s.substr(0, dots)), std::stoll(s.substr(dots + 2)));
    } catch (const std::logic_error&) {
      throw SchemaError("support: expected a..b or a comma list");
    }
  }
  std::vector<Index> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      v.push_back(std::stoll(tok));
    } catch (const std::logic_error&) {
      throw SchemaError("support: \"" + tok + "\" is not an integer");
    }
  }
  return FinSet(std::move(v));
}

struct Overrides {
  unsigned precision = 0;
  int index_cap = 0;
  std::size_t max_support = 0;
  std::size_t max_cells = 0;
  std::size_t node_budget = 0;

  SpecOptions apply(SpecOptions o) const {
    if (precision) o.precision = precision;
    if (index_cap) o.index_cap = index_cap;
    if (max_support) o.max_support = max_support;
    if (max_cells) o.max_cells = max_cells;
    if (node_budget) o.node_budget = node_budget;
    return o;
  }
};

inline EngineOptions engine_options(const SpecOptions& o, bool fixed_point) {
  EngineOptions e;
  e.certified = true;
  e.fixed_point = fixed_point;
  e.precision = o.precision;
  e.max_support = o.max_support;
  e.max_cells = o.max_cells;
  return e;
}

// ---- entry point -----------------------------------------------------------

/// Runs one command. `args` excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Norms, lambda tables and structural verdicts for mixed Tsirelson spaces", "mtsirelson"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "text", out_path;
  Overrides ov;
  app.add_option("--format", format, "stdout format")->check(CLI::IsMember({"text", "csv", "json"}));
  app.add_option("--out", out_path, "also write the JSON report here");
  app.add_option("--precision", ov.precision, "enclosure bits for irrational weights (default 64)");
  app.add_option("--index-cap", ov.index_cap, "derivative steps before an index is reported as capped (default 32)");
  app.add_option("--max-support", ov.max_support, "largest support the norm engine accepts (default 128)");
  app.add_option("--max-cells", ov.max_cells, "DP table cells per evaluation (default 2097152)");
  app.add_option("--node-budget", ov.node_budget, "functional count limit for dualball (default 200000)");

  std::string spec, spec_b, family_arg, sets_arg, vector_file, support_arg, path_arg = "auto", eps_arg = "1/10";
  std::vector<std::string> vectors;
  int iterated = -1, depth = 1, probe_depth = 16, dyadic = 5, lmax = 12, limit = 50;
  unsigned jobs = 1;
  std::size_t max_n = 16, probe_n = 16, max_length = 2048;
  Index block_n = 2;
  bool fixed = false, show_witness = false;

  auto* c_norm = app.add_subcommand("norm", "norm of one or more vectors");
  c_norm->add_option("spec", spec, "spec file or inline JSON")->required();
  c_norm->add_option("--vector", vectors, "{\"pos\":\"p/q\",...} or \"segment a..b\" (repeatable)");
  c_norm->add_option("--vector-file", vector_file, "JSON vector or array of vectors");
  c_norm->add_option("--iterated", iterated, "also report |x|_0..|x|_S");
  c_norm->add_option("--jobs", jobs, "worker threads for several vectors");
  c_norm->add_flag("--fixed-point", fixed, "use the directed-rounding grid");
  c_norm->add_flag("--witness", show_witness, "print the optimal partition tree");

  auto* c_lambda = app.add_subcommand("lambda", "lambda_n = ||e_1 + ... + e_n|| for n = 1..N");
  c_lambda->add_option("spec", spec)->required();
  c_lambda->add_option("--max", max_n, "N")->required();
  c_lambda->add_option("--path", path_arg, "auto, fast or generic")->check(CLI::IsMember({"auto", "fast", "generic"}));
  c_lambda->add_flag("--fixed-point", fixed, "use the directed-rounding grid");

  auto* c_classify = app.add_subcommand("classify", "structural verdicts with rule tags");
  c_classify->add_option("spec", spec)->required();
  c_classify->add_option("--probe-depth", probe_depth, "lambda/theta probe length for A_k schemes");
  c_classify->add_option("--dyadic-levels", dyadic, "levels of the dyadic block probe");

  auto* c_compare = app.add_subcommand("compare", "total incomparability of two spaces");
  c_compare->add_option("a", spec)->required();
  c_compare->add_option("b", spec_b)->required();
  c_compare->add_option("--probe", probe_n, "lambda ratio probe length");

  auto* c_index = app.add_subcommand("index", "index of a family");
  c_index->add_option("--family", family_arg, "family JSON or file")->required();

  auto* c_adm = app.add_subcommand("admissible", "admissibility of successive sets");
  c_adm->add_option("--family", family_arg, "family JSON or file")->required();
  c_adm->add_option("--sets", sets_arg, "JSON array of sets, e.g. [[2,3],[4,5]]")->required();

  auto* c_dual = app.add_subcommand("dualball", "functionals of K_depth on a support");
  c_dual->add_option("spec", spec)->required();
  c_dual->add_option("--support", support_arg, "a..b or comma list")->required();
  c_dual->add_option("--depth", depth, "nesting depth s");
  c_dual->add_option("--vector", vectors, "also evaluate the oracle norm of this vector");
  c_dual->add_option("--limit", limit, "functionals to print");

  auto* c_wit = app.add_subcommand("witness", "l1^n block witness search");
  c_wit->add_option("spec", spec)->required();
  c_wit->add_option("--n", block_n, "number of blocks")->required();
  c_wit->add_option("--eps", eps_arg, "epsilon in (0,1)");
  c_wit->add_option("--lmax", lmax, "largest scale");
  c_wit->add_option("--max-length", max_length, "longest sum e_1 + ... + e_N examined");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  report.command = args;
  Inputs inputs;
  try {
    std::vector<std::string> warnings;
    auto load = [&](const std::string& arg, SpecOptions* opts = nullptr) {
      SpecDocument doc = inputs.document(arg);
      warnings.insert(warnings.end(), doc.warnings.begin(), doc.warnings.end());
      if (opts) *opts = ov.apply(doc.options);
      return doc.space;
    };
    SpecOptions opts = ov.apply({});
    Json& res = report.results;

    if (c_norm->parsed()) {
      const SpaceSpec space = load(spec, &opts);
      std::vector<FinVec> xs;
      for (const auto& v : vectors) xs.push_back(parse_vector(v));
      if (!vector_file.empty()) {
        const Json j = inputs.json(vector_file, "vector file");
        if (j.is_array()) {
          for (const auto& e : j) xs.push_back(vector_from_json(e));
        } else {
          xs.push_back(vector_from_json(j));
        }
      }
      if (xs.empty()) throw SchemaError("norm needs --vector or --vector-file");
      NormEngine engine(space, engine_options(opts, fixed));
      const auto results = engine.norm_batch(xs, std::max(1u, jobs));
      res["space"] = mtsirelson::to_json(space);
      res["norms"] = Json::array();
      const bool exact = std::all_of(results.begin(), results.end(), [](const NormResult& r) { return r.is_exact(); });
      report.table.columns = exact ? std::vector<std::string>{"vector", "norm"} : std::vector<std::string>{"vector", "norm_lo", "norm_hi"};
      for (std::size_t i = 0; i < xs.size(); ++i) {
        Json item{{"vector", mtsirelson::to_json(xs[i])}, {"value", to_json(results[i].value)}};
        if (results[i].witness) item["witness"] = to_json(*results[i].witness);
        report.lines.push_back("||" + to_string(xs[i]) + "|| = " + text(results[i].value));
        if (show_witness && results[i].witness) partition_lines(*results[i].witness, report.lines);
        std::vector<std::string> row{to_string(xs[i]), to_string(results[i].value.lo)};
        if (!exact) row.push_back(to_string(results[i].value.hi));
        report.table.rows.push_back(row);
        if (iterated >= 0) {
          const IteratedNorms it = engine.norm_iterated(xs[i], iterated);
          Json vals = Json::array();
          for (std::size_t s = 0; s < it.values.size(); ++s) {
            vals.push_back(to_json(it.values[s]));
            report.lines.push_back("  |x|_" + std::to_string(s) + " = " + text(it.values[s]));
          }
          item["iterated"] = vals;
          item["stabilizedAt"] = it.stabilized_at ? Json(*it.stabilized_at) : Json(nullptr);
          report.lines.push_back(it.stabilized_at ? "  stabilized at s = " + std::to_string(*it.stabilized_at)
                                                  : "  not stabilized by s = " + std::to_string(iterated));
        }
        res["norms"].push_back(item);
      }
    } else if (c_lambda->parsed()) {
      const SpaceSpec space = load(spec, &opts);
      if (max_n < 1) throw SchemaError("--max must be positive");
      const LambdaPath path = path_arg == "fast" ? LambdaPath::Fast : path_arg == "generic" ? LambdaPath::Generic : LambdaPath::Auto;
      const LambdaTable t = NormEngine(space, engine_options(opts, fixed)).lambda_table(max_n, path);
      const bool exact = std::all_of(t.values.begin(), t.values.end(), [](const RatInterval& v) { return v.is_point(); });
      report.table.columns = exact ? std::vector<std::string>{"n", "lambda"} : std::vector<std::string>{"n", "lambda_lo", "lambda_hi"};
      Json vals = Json::array();
      report.lines.push_back("lambda table for " + describe(space) + " (" + t.path + " path)");
      for (std::size_t n = 1; n <= t.size(); ++n) {
        vals.push_back(to_json(t.at(n)));
        report.lines.push_back(std::to_string(n) + " " + text(t.at(n)));
        std::vector<std::string> row{std::to_string(n), to_string(t.at(n).lo)};
        if (!exact) row.push_back(to_string(t.at(n).hi));
        report.table.rows.push_back(row);
      }
      res["space"] = mtsirelson::to_json(space);
      res["path"] = t.path;
      res["lambda"] = vals;
    } else if (c_classify->parsed()) {
      const SpaceSpec space = load(spec, &opts);
      ClassifierOptions co;
      co.index_cap = opts.index_cap;
      co.probe_depth = probe_depth;
      co.dyadic_levels = dyadic;
      const ClassificationReport r = classify(space, co);
      res["space"] = mtsirelson::to_json(space);
      res["report"] = to_json(r);
      report_lines(r, report.lines);
      report.table.columns = {"property", "rule", "detail"};
      for (const auto& v : r.verdicts) report.table.rows.push_back({to_string(v.property), v.rule, v.detail});
      if (r.undetermined()) report.exit_code = kUndetermined;
    } else if (c_compare->parsed()) {
      const SpaceSpec a = load(spec, &opts);
      const SpaceSpec b = load(spec_b);
      ClassifierOptions co;
      co.index_cap = opts.index_cap;
      const ComparisonReport r = compare(a, b, co, probe_n);
      res["verdict"] = to_string(r.verdict);
      res["rule"] = r.fired;
      res["detail"] = r.detail;
      report.lines.push_back("verdict: " + to_string(r.verdict) + " [" + r.fired + "] " + r.detail);
      if (r.probe) {
        Json ratios = Json::array();
        std::string l = "lambda ratios (" + r.probe->trend + "):";
        for (const auto& q : r.probe->ratios) {
          ratios.push_back(to_json(q));
          l += " " + to_decimal(q.lo, 4);
        }
        res["ratioProbe"] = Json{{"trend", r.probe->trend}, {"ratios", ratios}};
        report.lines.push_back(l);
      } else {
        res["ratioProbe"] = nullptr;
      }
      res["a"] = to_json(r.a);
      res["b"] = to_json(r.b);
      report.lines.push_back("first:");
      report_lines(r.a, report.lines, "  ");
      report.lines.push_back("second:");
      report_lines(r.b, report.lines, "  ");
      report.table.columns = {"verdict", "rule", "detail"};
      report.table.rows.push_back({to_string(r.verdict), r.fired, r.detail});
      if (r.verdict == Comparison::EvidenceOnly) report.exit_code = kUndetermined;
    } else if (c_index->parsed()) {
      const FamilyDescriptor fam = family_from_json(inputs.json(family_arg, "family"), &warnings);
      const IndexValue v = index(fam, opts.index_cap);
      res["family"] = mtsirelson::to_json(fam);
      res["index"] = v.finite ? Json(*v.finite) : Json(nullptr);
      res["cap"] = opts.index_cap;
      res["infinite"] = has_infinite_index(fam);
      report.lines.push_back("index(" + describe(fam) + ") = " + to_string(v));
      report.table.columns = {"family", "index"};
      report.table.rows.push_back({describe(fam), to_string(v)});
    } else if (c_adm->parsed()) {
      const FamilyDescriptor fam = family_from_json(inputs.json(family_arg, "family"), &warnings);
      const Json sj = inputs.json(sets_arg, "sets");
      if (!sj.is_array()) throw SchemaError("sets: expected an array of sets");
      std::vector<FinSet> sets;
      for (std::size_t i = 0; i < sj.size(); ++i) sets.push_back(finset_from_json(sj[i], "sets[" + std::to_string(i) + "]"));
      const Admissibility a = admissible(fam, std::span<const FinSet>(sets));
      res["family"] = mtsirelson::to_json(fam);
      res["admissible"] = a.admissible;
      res["witness"] = a.witness ? mtsirelson::to_json(*a.witness) : Json(nullptr);
      report.lines.push_back(std::string("admissible: ") + (a.admissible ? "yes" : "no") +
                             (a.witness ? ", witness " + to_string(*a.witness) : ""));
      report.table.columns = {"admissible", "witness"};
      report.table.rows.push_back({a.admissible ? "true" : "false", a.witness ? to_string(*a.witness) : ""});
    } else if (c_dual->parsed()) {
      const SpaceSpec space = load(spec, &opts);
      OracleOptions oo;
      oo.max_support = std::min<std::size_t>(opts.max_support, 64);
      oo.node_budget = opts.node_budget;
      const FinSet bound = parse_support(support_arg);
      const auto fs = enumerate_K(space, bound, depth, oo);
      res["space"] = mtsirelson::to_json(space);
      res["support"] = mtsirelson::to_json(bound);
      res["depth"] = depth;
      res["count"] = fs.size();
      Json list = Json::array();
      report.lines.push_back(std::to_string(fs.size()) + " functional(s) in K_" + std::to_string(depth) + " on " + to_string(bound));
      report.table.columns = {"functional", "height"};
      for (std::size_t i = 0; i < fs.size(); ++i) {
        list.push_back(to_string(fs[i]));
        report.table.rows.push_back({to_string(fs[i]), std::to_string(height(fs[i]))});
        if (static_cast<int>(i) < limit) report.lines.push_back("  " + to_string(fs[i]));
      }
      if (static_cast<int>(fs.size()) > limit) report.lines.push_back("  ... (" + std::to_string(fs.size() - limit) + " more)");
      res["functionals"] = list;
      for (const auto& v : vectors) {
        const FinVec x = parse_vector(v);
        const OracleResult o = oracle_norm(space, x, oo);
        report.lines.push_back("oracle ||" + to_string(x) + "|| = " + to_string(o.value) + " via " + to_string(o.witness));
        res["oracle"].push_back(Json{{"vector", mtsirelson::to_json(x)}, {"value", to_string(o.value)}, {"witness", to_string(o.witness)}});
      }
    } else if (c_wit->parsed()) {
      const SpaceSpec space = load(spec, &opts);
      const Rational eps = parse_rational(eps_arg);
      const auto w = l1_block_witness(space, block_n, eps, lmax, max_length);
      res["space"] = mtsirelson::to_json(space);
      res["n"] = block_n;
      res["eps"] = to_string(eps);
      report.table.columns = {"scale", "block_length", "value_lo", "value_hi"};
      if (w) {
        Json blocks = Json::array();
        for (const auto& [a, b] : w->blocks) blocks.push_back(Json::array({a, b}));
        res["witness"] = Json{{"scale", w->scale}, {"blockLength", w->block_length}, {"value", to_json(w->value)}, {"blocks", blocks}};
        report.lines.push_back("witness at scale " + std::to_string(w->scale) + ": " + std::to_string(block_n) +
                               " blocks of length " + std::to_string(w->block_length) + ", ||sum y_i|| = " + text(w->value));
        report.table.rows.push_back({std::to_string(w->scale), std::to_string(w->block_length), to_string(w->value.lo), to_string(w->value.hi)});
      } else {
        res["witness"] = nullptr;
        report.lines.push_back("no witness within scale " + std::to_string(lmax) + " and length " + std::to_string(max_length));
      }
    }
    if (!warnings.empty()) {
      res["warnings"] = warnings;
      for (const auto& w : warnings) err << "warning: " << w << "\n";
    }
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const std::overflow_error& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  std::string material;
  for (const auto& a : args) {
    material += a;
    material.push_back('\0');
  }
  report.digest = "fnv1a64:" + hex64(fnv1a(inputs.digest_material, fnv1a(material)));
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const Format fmt = format == "csv" ? Format::Csv : format == "json" ? Format::Json : Format::Text;
  out << emit_report(report, fmt);
  if (!out_path.empty()) {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
      err << "error: cannot write " << out_path << "\n";
      return kUsage;
    }
    f << emit_report(report, Format::Json);
  }
  return report.exit_code;
}

}  // namespace mtsirelson::cli
