#pragma once

// Suspicious statement isolation: for a suspicious PC and a failing product,
// the statements implementing the interaction of its enabled features that
// its disabled features can reach through shared symbols, plus the
// statements impacting them, filtered to those executed by failed tests.

#include "vfl/bpc.hpp"
#include "vfl/dependency.hpp"
#include "vfl/spectra.hpp"

#include <algorithm>
#include <compare>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace vfl {

struct IsolationResult {
  ProductId product;
  SuspiciousPC spc;
  StatementSet core;
  StatementSet candidates;
  StatementSet suspicious;
};

namespace detail {
inline std::vector<std::size_t> to_indices(const SplSystem &system,
                                           const StatementSet &ids) {
  std::vector<std::size_t> out;
  out.reserve(ids.size());
  for (const auto &s : ids)
    out.push_back(system.statement_index(s));
  return out;
}

inline StatementSet intersect(const StatementSet &a, const StatementSet &b) {
  StatementSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(out, out.end()));
  return out;
}
} // namespace detail

/// beta(F_E, p) intersected with gamma(f_d, p) for every disabled f_d. With
/// no enabled feature the gamma intersection alone is returned.
inline StatementSet interaction_core(const SplSystem &system,
                                     const SuspiciousPC &spc,
                                     const Product &p) {
  if (!contains(p.config, spc.selections))
    throw ValidationError("suspicious PC " + to_string(spc.selections) +
                          " is not contained in product '" + p.id.str() + "'");
  const auto enabled = spc.enabled_features();
  std::optional<StatementSet> core;
  if (!enabled.empty())
    core = interaction_impl(system, enabled, p);
  for (const auto &fd : spc.disabled_features()) {
    auto gamma = defuse_impact(system, fd, p);
    core = core ? detail::intersect(*core, gamma) : std::move(gamma);
  }
  return core.value_or(StatementSet{});
}

/// Statements of the failing product `spectra.product` that implement or
/// impact the interaction of `spc` (and, with `include_forward`, those the
/// interaction impacts), restricted to failed-test coverage.
inline IsolationResult suspicious_statements(const SplSystem &system,
                                             const SuspiciousPC &spc,
                                             const ProductSpectra &spectra,
                                             bool include_forward = false) {
  const auto &p = spectra.product;
  IsolationResult out{p.id, spc, interaction_core(system, spc, p), {}, {}};
  const auto seeds = detail::to_indices(system, out.core);
  auto mask = detail::reach(system, p, seeds, detail::Direction::backward);
  if (include_forward) {
    const auto fwd = detail::reach(system, p, seeds, detail::Direction::forward);
    for (std::size_t i = 0; i < mask.size(); ++i)
      mask[i] = mask[i] || fwd[i];
  }
  out.candidates = detail::to_ids(system, mask);
  out.suspicious = detail::intersect(out.candidates, failed_coverage(spectra));
  return out;
}

struct Evidence {
  ProductId product;
  /// Index into the suspicious PC list the space was built from.
  std::size_t spc;

  friend auto operator<=>(const Evidence &, const Evidence &) = default;
  friend bool operator==(const Evidence &, const Evidence &) = default;
};

struct SuspiciousSpace {
  std::map<StatementId, std::set<Evidence>> statements;
  std::vector<IsolationResult> results;

  bool empty() const noexcept { return statements.empty(); }
  StatementSet ids() const {
    StatementSet out;
    for (const auto &[s, ev] : statements)
      out.insert(s);
    return out;
  }
};

/// Isolates every (failing product, applicable suspicious PC) pair and merges
/// the results. A PC applies to a product whose configuration contains it.
inline SuspiciousSpace suspicious_space(const SplSystem &system,
                                        const std::vector<ProductSpectra> &all,
                                        const std::vector<SuspiciousPC> &spcs,
                                        bool include_forward = false) {
  std::vector<const ProductSpectra *> failing;
  for (const auto &ps : all)
    if (ps.failing())
      failing.push_back(&ps);
  std::sort(failing.begin(), failing.end(),
            [](auto *a, auto *b) { return a->product.id < b->product.id; });

  SuspiciousSpace space;
  for (const auto *ps : failing) {
    for (std::size_t k = 0; k < spcs.size(); ++k) {
      if (!contains(ps->product.config, spcs[k].selections))
        continue;
      auto res = suspicious_statements(system, spcs[k], *ps, include_forward);
      for (const auto &s : res.suspicious)
        space.statements[s].insert({ps->product.id, k});
      space.results.push_back(std::move(res));
    }
  }
  return space;
}

} // namespace vfl
