#pragma once

// Synthetic product lines with a seeded variability bug, plus brute-force
// oracles used to cross-check the analyses.

#include "vfl/bpc.hpp"
#include "vfl/core_model.hpp"
#include "vfl/dependency.hpp"
#include "vfl/evaluation.hpp"
#include "vfl/spectra.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace vfl::testkit {

struct GeneratorSpec {
  int n_features = 4;
  int n_statements = 16;
  double edge_density = 0.15;
  int n_products = 8;
  int tests_per_product = 4;
  std::uint64_t seed = 42;
  /// Seeded bug; both are drawn from the seed when absent.
  std::optional<StatementId> buggy;
  std::optional<PartialConfiguration> buggy_pc;
  int max_buggy_pc_size = 3;
  /// Adds the dependence and def-use links that make the buggy statement part
  /// of the interaction of the buggy PC's features.
  bool wire_interaction = true;
};

struct GeneratedCase {
  SplSystem system;
  std::vector<ProductSpectra> spectra;
  GroundTruth truth;
  PartialConfiguration buggy_pc;
  std::uint64_t seed = 0;
};

namespace detail {

/// Distribution-free helpers over mt19937_64 so output does not depend on
/// the standard library's distribution implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::size_t below(std::size_t n) {
    return static_cast<std::size_t>(engine_() % n);
  }
  bool chance(double p) {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p;
  }

private:
  std::mt19937_64 engine_;
};

inline std::string padded(char prefix, int i, int count) {
  const auto width = std::to_string(std::max(count - 1, 0)).size();
  auto num = std::to_string(i);
  return std::string(1, prefix) + std::string(width - num.size(), '0') + num;
}

} // namespace detail

inline FeatureId feature_name(int i, int n) {
  return FeatureId(detail::padded('f', i, n));
}

/// Builds a case whose failing products are exactly those containing the
/// buggy PC: a test fails iff it covers the buggy statement and the
/// product's configuration contains the buggy PC, and every such product has
/// a test covering the buggy statement.
inline GeneratedCase generate_system(const GeneratorSpec &spec) {
  if (spec.n_features < 2)
    throw ValidationError("need at least 2 features (one optional)");
  if (spec.n_statements < spec.n_features)
    throw ValidationError("need at least one statement per feature");
  if (spec.n_products < 2)
    throw ValidationError("need at least 2 products");
  if (spec.tests_per_product < 1)
    throw ValidationError("need at least 1 test per product");
  if (!(spec.edge_density >= 0.0 && spec.edge_density <= 1.0))
    throw ValidationError("edge density must lie in [0, 1]");
  if (spec.n_features - 1 < 62 &&
      static_cast<std::uint64_t>(spec.n_products) >
          (std::uint64_t{1} << (spec.n_features - 1)))
    throw ValidationError("more products requested than distinct "
                          "configurations exist");

  detail::Rng rng(spec.seed);
  const int nf = spec.n_features, ns = spec.n_statements;

  std::vector<FeatureDecl> features;
  for (int i = 0; i < nf; ++i)
    features.push_back({feature_name(i, nf), i == 0});

  std::vector<Statement> statements;
  const int n_symbols = std::max(2, ns / 2);
  auto symbol = [&](std::size_t i) { return "v" + std::to_string(i); };
  for (int i = 0; i < ns; ++i) {
    const int owner = i < nf ? i : static_cast<int>(rng.below(nf));
    Statement st{StatementId(detail::padded('s', i, ns)),
                 features[owner].id,
                 {},
                 {}};
    if (rng.chance(0.6))
      st.defs.insert(symbol(rng.below(n_symbols)));
    const auto n_uses = rng.below(3);
    for (std::size_t u = 0; u < n_uses; ++u)
      st.uses.insert(symbol(rng.below(n_symbols)));
    statements.push_back(std::move(st));
  }

  std::set<std::pair<int, int>> edge_set;
  std::vector<DepEdge> edges;
  for (int a = 0; a < ns; ++a)
    for (int b = 0; b < ns; ++b)
      if (a != b && rng.chance(spec.edge_density)) {
        edge_set.emplace(a, b);
        edges.push_back({statements[a].id, statements[b].id,
                         rng.chance(0.5) ? DepKind::control : DepKind::data});
      }

  auto feature_pos = [&](const FeatureId &f) -> int {
    for (int i = 0; i < nf; ++i)
      if (features[i].id == f)
        return i;
    throw ValidationError("buggy PC names unknown feature '" + f.str() + "'");
  };

  PartialConfiguration bpc;
  if (spec.buggy_pc) {
    bpc = *spec.buggy_pc;
    for (const auto &sel : bpc) {
      if (feature_pos(sel.feature) == 0)
        throw ValidationError("buggy PC cannot select the mandatory feature");
    }
  } else {
    const auto k = 1 + rng.below(static_cast<std::size_t>(
                       std::min(spec.max_buggy_pc_size, nf - 1)));
    std::vector<int> optional;
    for (int i = 1; i < nf; ++i)
      optional.push_back(i);
    std::set<FeatureSelection> sel;
    for (std::size_t j = 0; j < k; ++j) {
      const auto pick = rng.below(optional.size());
      sel.insert({features[optional[pick]].id, rng.chance(0.6)});
      optional.erase(optional.begin() + static_cast<long>(pick));
    }
    bpc = PartialConfiguration(std::move(sel));
  }
  if (bpc.size() > static_cast<std::size_t>(nf - 1))
    throw ValidationError("buggy PC selects more features than exist");

  auto owned_by = [&](int f) {
    std::vector<int> out;
    for (int i = 0; i < ns; ++i)
      if (statements[i].feature == features[f].id)
        out.push_back(i);
    return out;
  };

  int buggy = -1;
  if (spec.buggy) {
    for (int i = 0; i < ns; ++i)
      if (statements[i].id == *spec.buggy)
        buggy = i;
    if (buggy < 0)
      throw ValidationError("unknown buggy statement '" + spec.buggy->str() +
                            "'");
    const int owner = feature_pos(statements[buggy].feature);
    bool present = owner == 0;
    for (const auto &sel : bpc)
      present = present || (sel.enabled && feature_pos(sel.feature) == owner);
    if (!present)
      throw ValidationError("buggy statement is absent from products "
                            "containing the buggy PC");
  } else {
    std::vector<int> hosts;
    for (const auto &sel : bpc)
      if (sel.enabled)
        hosts.push_back(feature_pos(sel.feature));
    const int host = hosts.empty() ? 0 : hosts[rng.below(hosts.size())];
    const auto owned = owned_by(host);
    buggy = owned[rng.below(owned.size())];
  }

  if (spec.wire_interaction) {
    for (const auto &sel : bpc) {
      const int f = feature_pos(sel.feature);
      const int first = owned_by(f).front();
      if (sel.enabled) {
        if (first != buggy && edge_set.emplace(first, buggy).second)
          edges.push_back(
              {statements[first].id, statements[buggy].id, DepKind::data});
      } else {
        const auto sym = "x_" + sel.feature.str();
        statements[first].defs.insert(sym);
        statements[buggy].uses.insert(sym);
      }
    }
  }

  SplSystem system(features, statements, edges);

  // Sample distinct configurations: one containing the buggy PC, one
  // violating it, the rest random.
  std::vector<Configuration> configs;
  std::set<Configuration> seen;
  auto random_config = [&] {
    Configuration c;
    for (int i = 0; i < nf; ++i)
      c[features[i].id] = i == 0 || rng.chance(0.5);
    return c;
  };
  const int max_attempts = 1000 * spec.n_products;
  for (int attempt = 0;
       static_cast<int>(configs.size()) < spec.n_products; ++attempt) {
    if (attempt >= max_attempts)
      throw ValidationError("could not sample enough distinct configurations");
    auto c = random_config();
    if (configs.empty()) {
      for (const auto &sel : bpc)
        c[sel.feature] = sel.enabled;
    } else if (configs.size() == 1) {
      for (const auto &sel : bpc)
        c[sel.feature] = sel.enabled;
      const auto flip = std::next(bpc.begin(),
                                  static_cast<long>(rng.below(bpc.size())));
      c[flip->feature] = !flip->enabled;
    }
    if (seen.insert(c).second)
      configs.push_back(std::move(c));
  }

  const auto buggy_id = statements[buggy].id;
  std::vector<ProductSpectra> all;
  for (std::size_t k = 0; k < configs.size(); ++k) {
    auto product = compose_product(
        system, ProductId(detail::padded('p', static_cast<int>(k),
                                         spec.n_products)),
        configs[k]);
    const bool buggy_config = contains(configs[k], bpc);
    const auto impacted = impact_set(system, buggy_id, product);
    ProductSpectra ps{product, {}};
    for (int t = 0; t < spec.tests_per_product; ++t) {
      TestCase tc;
      tc.id = detail::padded('t', t, spec.tests_per_product);
      for (const auto &s : product.statements)
        if (rng.chance(0.5))
          tc.covered.insert(s);
      if (buggy_config && t == 0)
        tc.covered.insert(buggy_id);
      if (buggy_config && tc.covered.contains(buggy_id)) {
        tc.outcome = Outcome::fail;
        std::vector<StatementId> points;
        for (const auto &s : impacted)
          if (tc.covered.contains(s))
            points.push_back(s);
        tc.failure_point = points[rng.below(points.size())];
      }
      ps.tests.push_back(std::move(tc));
    }
    all.push_back(std::move(ps));
  }

  std::size_t failing = 0;
  for (const auto &ps : all)
    failing += ps.failing() ? 1 : 0;
  if (failing == 0 || failing == all.size())
    throw Error("generated case is not a variability bug");

  return {std::move(system), std::move(all), GroundTruth{{buggy_id}}, bpc,
          spec.seed};
}

/// Every failing configuration's non-empty subsets that no passing
/// configuration contains, reduced to the subset-minimal ones.
inline std::vector<SuspiciousPC>
oracle_spcs(const std::vector<SampledConfig> &passing,
            const std::vector<SampledConfig> &failing,
            const SplSystem &system) {
  const auto n = system.features().size();
  if (n > 12)
    throw ValidationError("oracle_spcs supports at most 12 features");
  std::map<std::set<FeatureSelection>, std::set<ProductId>> revealing;
  for (const auto &c : failing) {
    const std::vector<std::pair<FeatureId, bool>> sel(c.config.begin(),
                                                      c.config.end());
    for (std::uint32_t mask = 1; mask < (1u << sel.size()); ++mask) {
      std::set<FeatureSelection> subset;
      for (std::size_t i = 0; i < sel.size(); ++i)
        if (mask & (1u << i))
          subset.insert({sel[i].first, sel[i].second});
      bool in_passing = false;
      for (const auto &p : passing) {
        bool all_match = true;
        for (const auto &s : subset)
          all_match = all_match && p.config.at(s.feature) == s.enabled;
        if (all_match) {
          in_passing = true;
          break;
        }
      }
      if (!in_passing)
        revealing[subset].insert(c.id);
    }
  }
  std::vector<SuspiciousPC> out;
  for (const auto &[subset, origin] : revealing) {
    bool minimal = true;
    for (const auto &[other, o2] : revealing) {
      if (other.size() < subset.size() &&
          std::includes(subset.begin(), subset.end(), other.begin(),
                        other.end())) {
        minimal = false;
        break;
      }
    }
    if (minimal)
      out.push_back({PartialConfiguration(subset), origin});
  }
  std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
    if (a.selections.size() != b.selections.size())
      return a.selections.size() < b.selections.size();
    return a.selections < b.selections;
  });
  return out;
}

/// Omega by naive fixed point: relax every system edge until nothing
/// changes.
inline StatementSet oracle_closure(const SplSystem &system,
                                   const StatementId &s, const Product &p) {
  StatementSet out;
  if (!p.statements.contains(s))
    return out;
  out.insert(s);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto &e : system.dependencies()) {
      if (out.contains(e.from) && p.statements.contains(e.to) &&
          out.insert(e.to).second)
        changed = true;
    }
  }
  return out;
}

} // namespace vfl::testkit
