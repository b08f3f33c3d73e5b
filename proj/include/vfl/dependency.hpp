#pragma once

// Product-scoped dependence analysis. A product's dependence graph is the
// subgraph of the system edges induced by the product's statements; all
// closures below are reachability queries on that subgraph, so cycles need
// no special treatment.

#include "vfl/core_model.hpp"

#include <deque>
#include <set>
#include <vector>

namespace vfl {

namespace detail {

enum class Direction { forward, backward };

/// Breadth-first reachability within `p` from `seeds` (seeds outside `p` are
/// dropped). Returns a membership vector over system statement indices.
inline std::vector<bool> reach(const SplSystem &system, const Product &p,
                               const std::vector<std::size_t> &seeds,
                               Direction dir) {
  std::vector<bool> seen(system.statements().size(), false);
  std::deque<std::size_t> work;
  for (auto s : seeds) {
    if (p.has(s) && !seen[s]) {
      seen[s] = true;
      work.push_back(s);
    }
  }
  while (!work.empty()) {
    const auto cur = work.front();
    work.pop_front();
    const auto &next = dir == Direction::forward ? system.successors(cur)
                                                 : system.predecessors(cur);
    for (auto n : next) {
      if (p.has(n) && !seen[n]) {
        seen[n] = true;
        work.push_back(n);
      }
    }
  }
  return seen;
}

inline StatementSet to_ids(const SplSystem &system,
                           const std::vector<bool> &mask) {
  StatementSet out;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i])
      out.insert(system.statement(i).id);
  return out;
}

} // namespace detail

/// Omega(s, p): `s` plus every statement of `p` transitively control/data
/// dependent on it. Empty when `s` is not in `p`.
inline StatementSet impact_set(const SplSystem &system, const StatementId &s,
                               const Product &p) {
  const auto i = system.statement_index(s);
  return detail::to_ids(
      system, detail::reach(system, p, {i}, detail::Direction::forward));
}

/// alpha(f, p): union of Omega over the implementation of `f`.
inline StatementSet feature_impact(const SplSystem &system, const FeatureId &f,
                                   const Product &p) {
  return detail::to_ids(system,
                        detail::reach(system, p, system.implementation(f),
                                      detail::Direction::forward));
}

/// beta(F, p): intersection of alpha over `features`. The features interact
/// in `p` iff the result is non-empty.
inline StatementSet interaction_impl(const SplSystem &system,
                                     const std::set<FeatureId> &features,
                                     const Product &p) {
  if (features.empty())
    throw ValidationError("interaction_impl needs at least one feature");
  std::vector<bool> acc;
  for (const auto &f : features) {
    auto alpha = detail::reach(system, p, system.implementation(f),
                               detail::Direction::forward);
    if (acc.empty()) {
      acc = std::move(alpha);
    } else {
      for (std::size_t i = 0; i < acc.size(); ++i)
        acc[i] = acc[i] && alpha[i];
    }
  }
  return detail::to_ids(system, acc);
}

/// gamma(f, p): statements of `p` using a symbol defined by the
/// implementation of `f`, closed under dependence within `p`. Meant for a
/// feature disabled in `p`, but defined for any feature.
inline StatementSet defuse_impact(const SplSystem &system, const FeatureId &f,
                                  const Product &p) {
  std::set<std::string> defined;
  for (auto t : system.implementation(f)) {
    const auto &defs = system.statement(t).defs;
    defined.insert(defs.begin(), defs.end());
  }
  std::vector<std::size_t> seeds;
  for (const auto &sym : defined)
    for (auto user : system.users_of(sym))
      seeds.push_back(user);
  return detail::to_ids(
      system, detail::reach(system, p, seeds, detail::Direction::forward));
}

/// Static backward slice of `s` within `p`.
inline StatementSet backward_slice(const SplSystem &system,
                                   const StatementId &s, const Product &p) {
  const auto i = system.statement_index(s);
  if (!p.has(i))
    throw ValidationError("statement '" + s.str() + "' is not in product '" +
                          p.id.str() + "'");
  return detail::to_ids(
      system, detail::reach(system, p, {i}, detail::Direction::backward));
}

} // namespace vfl
