#pragma once

// JSON file formats for systems, sampled products, spectra, ground truth,
// ranked output and evaluation reports. Every reader reports the location of
// a bad value as a path such as `spectra[2].tests[0].covered[3]`.

#include "vfl/baselines.hpp"
#include "vfl/core_model.hpp"
#include "vfl/evaluation.hpp"
#include "vfl/localize.hpp"
#include "vfl/spectra.hpp"

#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace vfl::io {

using nlohmann::json;

inline constexpr const char *kToolVersion = "vfl 1.0.0";

inline json read_json_file(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw ValidationError("cannot read '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error &e) {
    throw ValidationError("'" + path.string() + "' is not valid JSON: " +
                          e.what());
  }
}

inline void write_json_file(const std::filesystem::path &path,
                            const json &doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw ValidationError("cannot write '" + path.string() + "'");
  out << doc.dump(2) << '\n';
}

namespace detail {

[[noreturn]] inline void fail(const std::string &path, const std::string &msg) {
  throw ValidationError(path + ": " + msg);
}

inline const json &field(const json &obj, const std::string &path,
                         const char *key) {
  if (!obj.is_object())
    fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end())
    fail(path, std::string("missing field '") + key + "'");
  return *it;
}

inline const json &array_field(const json &obj, const std::string &path,
                               const char *key) {
  const auto &v = field(obj, path, key);
  if (!v.is_array())
    fail(path + "." + key, "expected an array");
  return v;
}

inline std::string string_value(const json &v, const std::string &path) {
  if (!v.is_string() || v.get<std::string>().empty())
    fail(path, "expected a non-empty string");
  return v.get<std::string>();
}

inline std::set<std::string> string_set(const json &v,
                                        const std::string &path) {
  if (!v.is_array())
    fail(path, "expected an array of strings");
  std::set<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.insert(string_value(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

inline bool bool_value(const json &v, const std::string &path) {
  if (!v.is_boolean())
    fail(path, "expected a boolean");
  return v.get<bool>();
}

inline std::string idx(const std::string &base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

} // namespace detail

inline SplSystem parse_system(const json &doc) {
  using namespace detail;
  std::vector<FeatureDecl> features;
  const auto &fs = array_field(doc, "system", "features");
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const auto p = idx("features", i);
    FeatureDecl d{FeatureId(string_value(field(fs[i], p, "id"), p + ".id")),
                  false};
    if (fs[i].contains("mandatory"))
      d.mandatory = bool_value(fs[i]["mandatory"], p + ".mandatory");
    features.push_back(std::move(d));
  }
  std::vector<Statement> statements;
  const auto &ss = array_field(doc, "system", "statements");
  for (std::size_t i = 0; i < ss.size(); ++i) {
    const auto p = idx("statements", i);
    Statement st{
        StatementId(string_value(field(ss[i], p, "id"), p + ".id")),
        FeatureId(string_value(field(ss[i], p, "feature"), p + ".feature")),
        {},
        {}};
    if (ss[i].contains("defs"))
      st.defs = string_set(ss[i]["defs"], p + ".defs");
    if (ss[i].contains("uses"))
      st.uses = string_set(ss[i]["uses"], p + ".uses");
    statements.push_back(std::move(st));
  }
  std::vector<DepEdge> edges;
  if (doc.contains("dependencies")) {
    const auto &ds = array_field(doc, "system", "dependencies");
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const auto p = idx("dependencies", i);
      const auto kind = string_value(field(ds[i], p, "kind"), p + ".kind");
      if (kind != "control" && kind != "data")
        fail(p + ".kind", "expected 'control' or 'data', got '" + kind + "'");
      edges.push_back(
          {StatementId(string_value(field(ds[i], p, "from"), p + ".from")),
           StatementId(string_value(field(ds[i], p, "to"), p + ".to")),
           kind == "control" ? DepKind::control : DepKind::data});
    }
  }
  std::vector<FeatureConstraint> constraints;
  if (doc.contains("constraints")) {
    const auto &cs = array_field(doc, "system", "constraints");
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const auto p = idx("constraints", i);
      const auto kind = string_value(field(cs[i], p, "kind"), p + ".kind");
      if (kind != "requires" && kind != "excludes")
        fail(p + ".kind", "expected 'requires' or 'excludes'");
      constraints.push_back(
          {kind == "requires" ? ConstraintKind::requires_
                              : ConstraintKind::excludes,
           FeatureId(string_value(field(cs[i], p, "a"), p + ".a")),
           FeatureId(string_value(field(cs[i], p, "b"), p + ".b"))});
    }
  }
  return SplSystem(std::move(features), std::move(statements),
                   std::move(edges), std::move(constraints));
}

inline json system_to_json(const SplSystem &system) {
  json doc;
  doc["features"] = json::array();
  for (const auto &f : system.features())
    doc["features"].push_back({{"id", f.id.str()}, {"mandatory", f.mandatory}});
  doc["statements"] = json::array();
  for (const auto &s : system.statements())
    doc["statements"].push_back({{"id", s.id.str()},
                                 {"feature", s.feature.str()},
                                 {"defs", s.defs},
                                 {"uses", s.uses}});
  doc["dependencies"] = json::array();
  for (const auto &e : system.dependencies())
    doc["dependencies"].push_back({{"from", e.from.str()},
                                   {"to", e.to.str()},
                                   {"kind", std::string(to_string(e.kind))}});
  if (!system.constraints().empty()) {
    doc["constraints"] = json::array();
    for (const auto &c : system.constraints())
      doc["constraints"].push_back(
          {{"kind", c.kind == ConstraintKind::requires_ ? "requires"
                                                        : "excludes"},
           {"a", c.a.str()},
           {"b", c.b.str()}});
  }
  return doc;
}

/// Products in file order, each composed against `system`.
inline std::vector<Product> parse_products(const SplSystem &system,
                                           const json &doc) {
  using namespace detail;
  std::vector<Product> out;
  std::set<std::string> seen;
  const auto &ps = array_field(doc, "products", "products");
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto p = idx("products", i);
    const auto id = string_value(field(ps[i], p, "id"), p + ".id");
    if (!seen.insert(id).second)
      fail(p + ".id", "duplicate product '" + id + "'");
    const auto &cfg = field(ps[i], p, "config");
    if (!cfg.is_object())
      fail(p + ".config", "expected an object");
    Configuration config;
    for (const auto &[name, value] : cfg.items()) {
      const auto fp = p + ".config." + name;
      FeatureId f(name);
      if (!system.has_feature(f))
        fail(fp, "unknown feature '" + name + "'");
      config[f] = bool_value(value, fp);
    }
    try {
      out.push_back(compose_product(system, ProductId(id), config));
    } catch (const ValidationError &e) {
      fail(p, e.what());
    }
  }
  return out;
}

inline json products_to_json(const std::vector<Product> &products) {
  json doc;
  doc["products"] = json::array();
  for (const auto &p : products) {
    json cfg = json::object();
    for (const auto &[f, on] : p.config)
      cfg[f.str()] = on;
    doc["products"].push_back({{"id", p.id.str()}, {"config", cfg}});
  }
  return doc;
}

/// Spectra in product order. Every product needs exactly one spectra entry.
inline std::vector<ProductSpectra>
parse_spectra(const SplSystem &system, const std::vector<Product> &products,
              const json &doc) {
  using namespace detail;
  std::map<std::string, const Product *> by_id;
  for (const auto &p : products)
    by_id[p.id.str()] = &p;
  std::map<std::string, ProductSpectra> found;
  const auto &ss = array_field(doc, "spectra", "spectra");
  for (std::size_t i = 0; i < ss.size(); ++i) {
    const auto p = idx("spectra", i);
    const auto pid = string_value(field(ss[i], p, "product"), p + ".product");
    auto pit = by_id.find(pid);
    if (pit == by_id.end())
      fail(p + ".product", "unknown product '" + pid + "'");
    if (found.contains(pid))
      fail(p + ".product", "duplicate spectra for product '" + pid + "'");
    ProductSpectra spectra{*pit->second, {}};
    const auto &ts = array_field(ss[i], p, "tests");
    std::set<std::string> test_ids;
    for (std::size_t j = 0; j < ts.size(); ++j) {
      const auto tp = idx(p + ".tests", j);
      TestCase t;
      t.id = string_value(field(ts[j], tp, "id"), tp + ".id");
      if (!test_ids.insert(t.id).second)
        fail(tp + ".id", "duplicate test '" + t.id + "'");
      const auto outcome =
          string_value(field(ts[j], tp, "outcome"), tp + ".outcome");
      if (outcome != "pass" && outcome != "fail")
        fail(tp + ".outcome", "expected 'pass' or 'fail', got '" + outcome +
                                  "'");
      t.outcome = outcome == "fail" ? Outcome::fail : Outcome::pass;
      const auto covered =
          string_set(field(ts[j], tp, "covered"), tp + ".covered");
      for (const auto &s : covered) {
        StatementId sid(s);
        if (!system.has_statement(sid))
          fail(tp + ".covered", "unknown statement '" + s + "'");
        t.covered.insert(std::move(sid));
      }
      if (ts[j].contains("failure_point") && !ts[j]["failure_point"].is_null()) {
        StatementId fp(string_value(ts[j]["failure_point"],
                                    tp + ".failure_point"));
        if (!system.has_statement(fp))
          fail(tp + ".failure_point", "unknown statement '" + fp.str() + "'");
        t.failure_point = std::move(fp);
      }
      spectra.tests.push_back(std::move(t));
    }
    try {
      validate_spectra(spectra);
    } catch (const ValidationError &e) {
      fail(p, e.what());
    }
    found.emplace(pid, std::move(spectra));
  }
  std::vector<ProductSpectra> out;
  for (const auto &p : products) {
    auto it = found.find(p.id.str());
    if (it == found.end())
      fail("spectra", "no spectra for product '" + p.id.str() + "'");
    out.push_back(std::move(it->second));
  }
  return out;
}

inline json spectra_to_json(const std::vector<ProductSpectra> &all) {
  json doc;
  doc["spectra"] = json::array();
  for (const auto &ps : all) {
    json tests = json::array();
    for (const auto &t : ps.tests) {
      json covered = json::array();
      for (const auto &s : t.covered)
        covered.push_back(s.str());
      json jt = {{"id", t.id},
                 {"outcome", t.failed() ? "fail" : "pass"},
                 {"covered", covered}};
      if (t.failure_point)
        jt["failure_point"] = t.failure_point->str();
      tests.push_back(std::move(jt));
    }
    doc["spectra"].push_back(
        {{"product", ps.product.id.str()}, {"tests", std::move(tests)}});
  }
  return doc;
}

inline GroundTruth parse_truth(const json &doc,
                               const SplSystem *system = nullptr) {
  using namespace detail;
  GroundTruth out;
  const auto &bs = array_field(doc, "truth", "buggy");
  for (std::size_t i = 0; i < bs.size(); ++i) {
    StatementId s(string_value(bs[i], idx("buggy", i)));
    if (system && !system->has_statement(s))
      fail(idx("buggy", i), "unknown statement '" + s.str() + "'");
    out.buggy.insert(std::move(s));
  }
  if (out.buggy.empty())
    fail("buggy", "ground truth lists no buggy statement");
  return out;
}

inline json truth_to_json(const GroundTruth &truth) {
  json doc;
  doc["buggy"] = json::array();
  for (const auto &s : truth.buggy)
    doc["buggy"].push_back(s.str());
  return doc;
}

/// Rounds to 12 significant digits so the serialized text is stable.
inline double round_score(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

struct RunManifest {
  std::string technique = "varcop";
  std::string metric = "op2";
  double weight = 0.5;
  std::string aggregation = "mean";
  std::string normalization = "minmax";
  int max_interaction = default_k();
  bool include_forward = false;
  std::map<std::string, std::string> inputs;
  std::string version = kToolVersion;
  std::optional<std::uint64_t> seed;

  static RunManifest from_options(const LocalizeOptions &opts) {
    RunManifest m;
    m.technique = std::string(to_string(opts.technique));
    m.metric = std::string(format_metric(opts.ranking.metric));
    m.weight = opts.ranking.weight;
    m.aggregation = std::string(to_string(opts.ranking.aggregation));
    m.normalization = std::string(to_string(opts.ranking.normalization));
    m.max_interaction = opts.max_interaction;
    m.include_forward = opts.include_forward;
    return m;
  }
};

inline json manifest_to_json(const RunManifest &m) {
  json doc = {{"technique", m.technique},
              {"metric", m.metric},
              {"weight", m.weight},
              {"aggregation", m.aggregation},
              {"normalization", m.normalization},
              {"K", m.max_interaction},
              {"include_forward", m.include_forward},
              {"inputs", m.inputs},
              {"version", m.version}};
  if (m.seed)
    doc["seed"] = *m.seed;
  return doc;
}

inline json ranked_to_json(const RunManifest &manifest,
                           const LocalizeResult &result) {
  json doc;
  doc["manifest"] = manifest_to_json(manifest);
  doc["entries"] = json::array();
  for (const auto &e : result.ranking.entries)
    doc["entries"].push_back({{"statement", e.statement.str()},
                              {"score", round_score(e.score)},
                              {"rank", e.rank}});
  if (!result.features.empty()) {
    doc["features"] = json::array();
    for (const auto &f : result.features)
      doc["features"].push_back({{"feature", f.feature.str()},
                                 {"score", round_score(f.score)},
                                 {"rank", f.rank}});
  }
  if (!result.spcs.empty()) {
    doc["suspicious_pcs"] = json::array();
    for (const auto &spc : result.spcs) {
      json sel = json::object();
      for (const auto &s : spc.selections)
        sel[s.feature.str()] = s.enabled;
      json origin = json::array();
      for (const auto &o : spc.origin)
        origin.push_back(o.str());
      doc["suspicious_pcs"].push_back(
          {{"selections", sel}, {"origin", origin}});
    }
  }
  if (!result.warnings.empty())
    doc["warnings"] = result.warnings;
  return doc;
}

/// Reads the entries of a ranked output file. Order in the file is
/// authoritative; scores are taken as written.
inline RankedList parse_ranked(const json &doc) {
  using namespace detail;
  RankedList out;
  const auto &es = array_field(doc, "ranked", "entries");
  for (std::size_t i = 0; i < es.size(); ++i) {
    const auto p = idx("entries", i);
    RankedEntry e;
    e.statement =
        StatementId(string_value(field(es[i], p, "statement"), p + ".statement"));
    const auto &sc = field(es[i], p, "score");
    if (!sc.is_number())
      fail(p + ".score", "expected a number");
    e.score = sc.get<double>();
    const auto &rk = field(es[i], p, "rank");
    if (!rk.is_number_integer())
      fail(p + ".rank", "expected an integer");
    e.rank = rk.get<int>();
    out.entries.push_back(std::move(e));
  }
  return out;
}

inline json report_to_json(const EvalReport &report, const json &manifest) {
  json doc;
  doc["manifest"] = manifest;
  json ranks = json::object();
  for (const auto &[s, r] : report.rank.ranks)
    ranks[s.str()] = r ? json(*r) : json("unranked");
  doc["rank"] = ranks;
  doc["best_rank"] =
      report.rank.best_rank ? json(*report.rank.best_rank) : json("unranked");
  doc["exam"] = round_score(report.exam.percent);
  doc["exam_unranked"] = report.exam.unranked;
  json hits = json::object();
  for (const auto &[x, h] : report.hit_at)
    hits[std::to_string(x)] = h;
  doc["hit_at"] = hits;
  json curve = json::array();
  for (const auto &[n, prop] : report.pbl_curve)
    curve.push_back({{"examined", n}, {"proportion", round_score(prop)}});
  doc["pbl_curve"] = curve;
  doc["list_size"] = report.list_size;
  return doc;
}

} // namespace vfl::io
