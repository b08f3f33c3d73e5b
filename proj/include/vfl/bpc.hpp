#pragma once

// Suspicious partial configuration detection: the minimal sets of feature
// selections that, on the sampled configurations, appear only in failing
// ones.

#include "vfl/core_model.hpp"

#include <algorithm>
#include <cstddef>
#include <set>
#include <vector>

namespace vfl {

/// A sampled configuration labelled with the product it specifies.
struct SampledConfig {
  ProductId id;
  Configuration config;
};

struct SuspiciousPC {
  PartialConfiguration selections;
  /// Failing configurations the set was detected in.
  std::set<ProductId> origin;

  std::set<FeatureId> enabled_features() const {
    std::set<FeatureId> out;
    for (const auto &sel : selections)
      if (sel.enabled)
        out.insert(sel.feature);
    return out;
  }
  std::set<FeatureId> disabled_features() const {
    std::set<FeatureId> out;
    for (const auto &sel : selections)
      if (!sel.enabled)
        out.insert(sel.feature);
    return out;
  }
};

struct SfsSet {
  ProductId config;
  std::set<FeatureSelection> selections;
};

/// Interactions up to this size are examined unless overridden.
constexpr int default_k() noexcept { return 7; }

/// SFS_c: union of c \ c' over the passing configurations. With no passing
/// configuration there is nothing to diff against and the whole of `c` is
/// suspicious.
inline SfsSet suspicious_feature_selections(
    const SampledConfig &c, const std::vector<SampledConfig> &passing) {
  SfsSet out{c.id, {}};
  if (passing.empty()) {
    for (const auto &[f, on] : c.config)
      out.selections.insert({f, on});
    return out;
  }
  for (const auto &p : passing) {
    auto diff = config_diff(c.config, p.config);
    out.selections.insert(diff.begin(), diff.end());
  }
  return out;
}

/// No passing configuration contains `pc`, and at least one failing one does.
inline bool bug_revelation(const PartialConfiguration &pc,
                           const std::vector<SampledConfig> &passing,
                           const std::vector<SampledConfig> &failing) {
  for (const auto &p : passing)
    if (contains(p.config, pc))
      return false;
  for (const auto &f : failing)
    if (contains(f.config, pc))
      return true;
  return false;
}

namespace detail {

/// Calls `visit(indices)` for every k-subset of [0, n) in lexicographic order.
template <typename Visit>
void for_each_combination(std::size_t n, std::size_t k, Visit &&visit) {
  if (k == 0 || k > n)
    return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i)
    idx[i] = i;
  while (true) {
    visit(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1))
      --i;
    if (i == 0)
      return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j)
      idx[j] = idx[j - 1] + 1;
  }
}

inline bool canonical_less(const SuspiciousPC &a, const SuspiciousPC &b) {
  if (a.selections.size() != b.selections.size())
    return a.selections.size() < b.selections.size();
  return a.selections < b.selections;
}

} // namespace detail

/// Throws if `spcs` is not an antichain of bug-revealing sets.
inline void verify_spcs(const std::vector<SuspiciousPC> &spcs,
                        const std::vector<SampledConfig> &passing,
                        const std::vector<SampledConfig> &failing) {
  for (const auto &a : spcs) {
    if (!bug_revelation(a.selections, passing, failing))
      throw Error("suspicious PC " + to_string(a.selections) +
                  " lacks bug revelation");
    for (const auto &b : spcs)
      if (&a != &b && a.selections.is_subset_of(b.selections))
        throw Error("suspicious PC " + to_string(b.selections) +
                    " is not minimal");
  }
}

/// Enumerates subsets of each failing configuration's SFS by ascending size
/// up to `max_size`, accepting bug-revealing candidates that contain no
/// already accepted set. Output is sorted by (size, selections).
inline std::vector<SuspiciousPC>
detect_spcs(const std::vector<SampledConfig> &passing,
            const std::vector<SampledConfig> &failing, int max_size) {
  if (max_size < 1)
    throw ValidationError("maximum interaction size K must be at least 1");
  if (failing.empty())
    throw PreconditionError("no failing configuration to analyse");

  std::vector<const SampledConfig *> order;
  for (const auto &f : failing)
    order.push_back(&f);
  std::sort(order.begin(), order.end(),
            [](auto *a, auto *b) { return a->id < b->id; });

  std::vector<SuspiciousPC> accepted;
  for (const auto *c : order) {
    const auto sfs_set = suspicious_feature_selections(*c, passing);
    const std::vector<FeatureSelection> sfs(sfs_set.selections.begin(),
                                            sfs_set.selections.end());
    const auto kmax =
        std::min<std::size_t>(static_cast<std::size_t>(max_size), sfs.size());
    for (std::size_t k = 1; k <= kmax; ++k) {
      detail::for_each_combination(
          sfs.size(), k, [&](const std::vector<std::size_t> &idx) {
            std::set<FeatureSelection> sel;
            for (auto i : idx)
              sel.insert(sfs[i]);
            PartialConfiguration cand(std::move(sel));
            for (auto &a : accepted) {
              if (a.selections == cand) {
                a.origin.insert(c->id);
                return;
              }
              if (a.selections.is_subset_of(cand))
                return;
            }
            if (bug_revelation(cand, passing, failing))
              accepted.push_back({std::move(cand), {c->id}});
          });
    }
  }
  std::sort(accepted.begin(), accepted.end(), detail::canonical_less);
  verify_spcs(accepted, passing, failing);
  return accepted;
}

} // namespace vfl
