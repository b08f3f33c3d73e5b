#pragma once

// Declarative model of a product line: features, statements with feature
// ownership and def/use symbols, dependency edges, configurations and the
// products composed from them.

#include "vfl/error.hpp"

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace vfl {

/// Case-sensitive, non-empty identifier. The tag keeps feature, statement and
/// product names from being mixed up.
template <typename Tag> class Identifier {
public:
  Identifier() = default;
  explicit Identifier(std::string name) : name_(std::move(name)) {
    if (name_.empty())
      throw ValidationError(std::string(Tag::kind) + " id must not be empty");
  }

  const std::string &str() const noexcept { return name_; }

  friend auto operator<=>(const Identifier &, const Identifier &) = default;
  friend bool operator==(const Identifier &, const Identifier &) = default;

private:
  std::string name_;
};

struct FeatureTag {
  static constexpr const char *kind = "feature";
};
struct StatementTag {
  static constexpr const char *kind = "statement";
};
struct ProductTag {
  static constexpr const char *kind = "product";
};

using FeatureId = Identifier<FeatureTag>;
using StatementId = Identifier<StatementTag>;
using ProductId = Identifier<ProductTag>;

using StatementSet = std::set<StatementId>;

/// The on/off state of one feature. Ordered by feature name, then off < on.
struct FeatureSelection {
  FeatureId feature;
  bool enabled = false;

  friend auto operator<=>(const FeatureSelection &,
                          const FeatureSelection &) = default;
  friend bool operator==(const FeatureSelection &,
                         const FeatureSelection &) = default;
};

inline std::string to_string(const FeatureSelection &sel) {
  return sel.feature.str() + (sel.enabled ? "=T" : "=F");
}

/// Total assignment of a selection to every feature of a system.
using Configuration = std::map<FeatureId, bool>;

/// Non-empty set of selections, at most one per feature.
class PartialConfiguration {
public:
  PartialConfiguration() = default;
  explicit PartialConfiguration(std::set<FeatureSelection> selections)
      : selections_(std::move(selections)) {
    if (selections_.empty())
      throw ValidationError("partial configuration must not be empty");
    const FeatureId *prev = nullptr;
    for (const auto &sel : selections_) {
      if (prev && *prev == sel.feature)
        throw ValidationError("partial configuration selects feature '" +
                              sel.feature.str() + "' twice");
      prev = &sel.feature;
    }
  }
  PartialConfiguration(std::initializer_list<FeatureSelection> selections)
      : PartialConfiguration(std::set<FeatureSelection>(selections)) {}

  const std::set<FeatureSelection> &selections() const noexcept {
    return selections_;
  }
  std::size_t size() const noexcept { return selections_.size(); }
  auto begin() const { return selections_.begin(); }
  auto end() const { return selections_.end(); }

  /// True iff every selection of `this` also appears in `other`.
  bool is_subset_of(const PartialConfiguration &other) const {
    return std::includes(other.selections_.begin(), other.selections_.end(),
                         selections_.begin(), selections_.end());
  }

  friend auto operator<=>(const PartialConfiguration &,
                          const PartialConfiguration &) = default;
  friend bool operator==(const PartialConfiguration &,
                         const PartialConfiguration &) = default;

private:
  std::set<FeatureSelection> selections_;
};

inline std::string to_string(const PartialConfiguration &pc) {
  std::string out = "{";
  bool first = true;
  for (const auto &sel : pc) {
    if (!first)
      out += ", ";
    out += to_string(sel);
    first = false;
  }
  return out + "}";
}

struct Statement {
  StatementId id;
  FeatureId feature;
  std::set<std::string> defs;
  std::set<std::string> uses;
};

struct FeatureDecl {
  FeatureId id;
  bool mandatory = false;
};

enum class DepKind { control, data };

inline std::string_view to_string(DepKind kind) {
  return kind == DepKind::control ? "control" : "data";
}

/// `to` is control/data dependent on `from`.
struct DepEdge {
  StatementId from;
  StatementId to;
  DepKind kind = DepKind::data;
};

enum class ConstraintKind { requires_, excludes };

/// Cross-tree constraint between two features: `a` requires `b`, or `a` and
/// `b` exclude each other.
struct FeatureConstraint {
  ConstraintKind kind = ConstraintKind::requires_;
  FeatureId a;
  FeatureId b;
};

struct Product {
  ProductId id;
  Configuration config;
  StatementSet statements;
  /// Membership by system statement index; parallel to `statements`.
  std::vector<bool> mask;

  bool has(std::size_t statement_index) const {
    return statement_index < mask.size() && mask[statement_index];
  }
};

/// Immutable product line system. Construction validates every reference and
/// builds the index structures the analyses run on.
class SplSystem {
public:
  SplSystem(std::vector<FeatureDecl> features,
            std::vector<Statement> statements,
            std::vector<DepEdge> dependencies,
            std::vector<FeatureConstraint> constraints = {})
      : features_(std::move(features)), statements_(std::move(statements)),
        dependencies_(std::move(dependencies)),
        constraints_(std::move(constraints)) {
    for (std::size_t i = 0; i < features_.size(); ++i) {
      if (!feature_index_.emplace(features_[i].id.str(), i).second)
        throw ValidationError("duplicate feature '" + features_[i].id.str() +
                              "'");
    }
    feature_statements_.resize(features_.size());
    for (std::size_t i = 0; i < statements_.size(); ++i) {
      const auto &st = statements_[i];
      if (!statement_index_.emplace(st.id.str(), i).second)
        throw ValidationError("duplicate statement '" + st.id.str() + "'");
      auto fit = feature_index_.find(st.feature.str());
      if (fit == feature_index_.end())
        throw ValidationError("statement '" + st.id.str() +
                              "' belongs to unknown feature '" +
                              st.feature.str() + "'");
      feature_statements_[fit->second].push_back(i);
      for (const auto &sym : st.uses)
        users_[sym].push_back(i);
    }
    successors_.resize(statements_.size());
    predecessors_.resize(statements_.size());
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto &edge : dependencies_) {
      const auto from = statement_index(edge.from);
      const auto to = statement_index(edge.to);
      if (from == to)
        throw ValidationError("self dependency on '" + edge.from.str() + "'");
      if (!seen.emplace(from, to).second)
        throw ValidationError("duplicate dependency " + edge.from.str() +
                              " -> " + edge.to.str());
      successors_[from].push_back(to);
      predecessors_[to].push_back(from);
    }
    for (const auto &c : constraints_) {
      feature_index(c.a);
      feature_index(c.b);
    }
  }

  const std::vector<FeatureDecl> &features() const noexcept {
    return features_;
  }
  const std::vector<Statement> &statements() const noexcept {
    return statements_;
  }
  const std::vector<DepEdge> &dependencies() const noexcept {
    return dependencies_;
  }
  const std::vector<FeatureConstraint> &constraints() const noexcept {
    return constraints_;
  }

  bool has_feature(const FeatureId &f) const {
    return feature_index_.contains(f.str());
  }
  bool has_statement(const StatementId &s) const {
    return statement_index_.contains(s.str());
  }

  std::size_t feature_index(const FeatureId &f) const {
    auto it = feature_index_.find(f.str());
    if (it == feature_index_.end())
      throw ValidationError("unknown feature '" + f.str() + "'");
    return it->second;
  }
  std::size_t statement_index(const StatementId &s) const {
    auto it = statement_index_.find(s.str());
    if (it == statement_index_.end())
      throw ValidationError("unknown statement '" + s.str() + "'");
    return it->second;
  }

  const Statement &statement(std::size_t index) const {
    return statements_.at(index);
  }
  const Statement &statement(const StatementId &s) const {
    return statements_[statement_index(s)];
  }

  /// Indices of the statements implementing `f` (its phi set).
  const std::vector<std::size_t> &implementation(const FeatureId &f) const {
    return feature_statements_[feature_index(f)];
  }

  StatementSet implementation_ids(const FeatureId &f) const {
    StatementSet out;
    for (auto i : implementation(f))
      out.insert(statements_[i].id);
    return out;
  }

  const std::vector<std::size_t> &successors(std::size_t i) const {
    return successors_[i];
  }
  const std::vector<std::size_t> &predecessors(std::size_t i) const {
    return predecessors_[i];
  }

  /// Statements whose use set contains `symbol`.
  const std::vector<std::size_t> &users_of(const std::string &symbol) const {
    static const std::vector<std::size_t> none;
    auto it = users_.find(symbol);
    return it == users_.end() ? none : it->second;
  }

  /// Checks totality, mandatory features and declared constraints.
  void validate_configuration(const Configuration &config) const {
    for (const auto &[f, on] : config)
      feature_index(f);
    for (const auto &decl : features_) {
      auto it = config.find(decl.id);
      if (it == config.end())
        throw ValidationError("configuration has no selection for feature '" +
                              decl.id.str() + "'");
      if (decl.mandatory && !it->second)
        throw ValidationError("mandatory feature '" + decl.id.str() +
                              "' is disabled");
    }
    for (const auto &c : constraints_) {
      const bool a = config.at(c.a), b = config.at(c.b);
      if (c.kind == ConstraintKind::requires_ && a && !b)
        throw ValidationError("feature '" + c.a.str() + "' requires '" +
                              c.b.str() + "'");
      if (c.kind == ConstraintKind::excludes && a && b)
        throw ValidationError("features '" + c.a.str() + "' and '" +
                              c.b.str() + "' exclude each other");
    }
  }

private:
  std::vector<FeatureDecl> features_;
  std::vector<Statement> statements_;
  std::vector<DepEdge> dependencies_;
  std::vector<FeatureConstraint> constraints_;

  std::unordered_map<std::string, std::size_t> feature_index_;
  std::unordered_map<std::string, std::size_t> statement_index_;
  std::vector<std::vector<std::size_t>> feature_statements_;
  std::vector<std::vector<std::size_t>> successors_;
  std::vector<std::vector<std::size_t>> predecessors_;
  std::unordered_map<std::string, std::vector<std::size_t>> users_;
};

/// Builds the product of `config`: the union of the implementations of the
/// enabled features.
inline Product compose_product(const SplSystem &system, ProductId id,
                               const Configuration &config) {
  system.validate_configuration(config);
  Product product{std::move(id), config, {},
                  std::vector<bool>(system.statements().size(), false)};
  for (const auto &[feature, enabled] : config) {
    if (!enabled)
      continue;
    for (auto i : system.implementation(feature)) {
      product.mask[i] = true;
      product.statements.insert(system.statement(i).id);
    }
  }
  return product;
}

/// True iff every selection of `pc` agrees with `config`.
inline bool contains(const Configuration &config,
                     const PartialConfiguration &pc) {
  for (const auto &sel : pc) {
    auto it = config.find(sel.feature);
    if (it == config.end())
      throw ValidationError("unknown feature '" + sel.feature.str() +
                            "' in partial configuration");
    if (it->second != sel.enabled)
      return false;
  }
  return true;
}

/// Selections of `c` that `c_prime` does not share: { (f, c(f)) : c(f) !=
/// c_prime(f) }.
inline std::set<FeatureSelection> config_diff(const Configuration &c,
                                              const Configuration &c_prime) {
  if (c.size() != c_prime.size())
    throw ValidationError("configurations have different feature domains");
  std::set<FeatureSelection> out;
  auto it = c_prime.begin();
  for (const auto &[f, on] : c) {
    if (it->first != f)
      throw ValidationError("configurations have different feature domains");
    if (it->second != on)
      out.insert({f, on});
    ++it;
  }
  return out;
}

} // namespace vfl
