#pragma once

// End-to-end localization for every supported technique.

#include "vfl/baselines.hpp"
#include "vfl/bpc.hpp"
#include "vfl/isolation.hpp"
#include "vfl/ranking.hpp"

#include <string>
#include <vector>

namespace vfl {

struct LocalizeOptions {
  Technique technique = Technique::varcop;
  RankingConfig ranking;
  int max_interaction = default_k();
  bool include_forward = false;
};

struct LocalizeResult {
  RankedList ranking;
  std::vector<SuspiciousPC> spcs;
  /// Feature ranking, only filled for the feature-based technique.
  std::vector<FeatureScore> features;
  std::vector<std::string> warnings;
};

inline std::vector<SampledConfig>
sampled_configs(const std::vector<ProductSpectra> &all, bool failing) {
  std::vector<SampledConfig> out;
  for (const auto &ps : all)
    if (ps.failing() == failing)
      out.push_back({ps.product.id, ps.product.config});
  return out;
}

/// Runs suspicious PC detection, isolation and ranking. When no suspicious
/// statement is isolated the result falls back to global SBFL and says so in
/// `warnings`.
inline LocalizeResult run_varcop(const SplSystem &system,
                                 const std::vector<ProductSpectra> &all,
                                 const LocalizeOptions &opts) {
  opts.ranking.validate();
  LocalizeResult out;
  const auto passing = sampled_configs(all, false);
  const auto failing = sampled_configs(all, true);
  if (failing.empty())
    throw PreconditionError("no failing product: nothing to localize");
  out.spcs = detect_spcs(passing, failing, opts.max_interaction);
  const auto space =
      suspicious_space(system, all, out.spcs, opts.include_forward);
  if (space.empty()) {
    out.warnings.push_back(
        "empty suspicious space; falling back to global SBFL over statements "
        "covered by failed tests");
    out.ranking = sbfl_global(all, opts.ranking.metric);
    return out;
  }
  out.ranking = rank_suspicious(all, space.ids(), opts.ranking);
  return out;
}

inline LocalizeResult localize(const SplSystem &system,
                               const std::vector<ProductSpectra> &all,
                               const LocalizeOptions &opts) {
  opts.ranking.validate();
  if (opts.max_interaction < 1)
    throw ValidationError("maximum interaction size K must be at least 1");
  switch (opts.technique) {
  case Technique::varcop:
    return run_varcop(system, all, opts);
  case Technique::sbfl:
    return {sbfl_global(all, opts.ranking.metric), {}, {}, {}};
  case Technique::ssbfl:
    return {s_sbfl(system, all, opts.ranking.metric), {}, {}, {}};
  case Technique::fb: {
    auto fb = feature_based(system, all, opts.ranking.metric);
    return {std::move(fb.statements), {}, std::move(fb.features), {}};
  }
  }
  return {};
}

} // namespace vfl
