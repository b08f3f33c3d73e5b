#pragma once

// Comparison techniques: SBFL over the whole product line, SBFL restricted
// to backward slices from failure points, and feature-level SBFL.

#include "vfl/dependency.hpp"
#include "vfl/metrics.hpp"
#include "vfl/ranking.hpp"
#include "vfl/spectra.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace vfl {

enum class Technique { varcop, sbfl, ssbfl, fb };

inline std::string_view to_string(Technique t) {
  switch (t) {
  case Technique::varcop:
    return "varcop";
  case Technique::sbfl:
    return "sbfl";
  case Technique::ssbfl:
    return "ssbfl";
  case Technique::fb:
    return "fb";
  }
  return "varcop";
}

inline Technique parse_technique(std::string_view s) {
  for (auto t : {Technique::varcop, Technique::sbfl, Technique::ssbfl,
                 Technique::fb})
    if (to_string(t) == s)
      return t;
  throw ValidationError("unknown technique '" + std::string(s) + "'");
}

/// Statements executed by at least one failed test in any product.
inline StatementSet sbfl_candidates(const std::vector<ProductSpectra> &all) {
  StatementSet out;
  for (const auto &ps : all) {
    auto cov = failed_coverage(ps);
    out.insert(cov.begin(), cov.end());
  }
  return out;
}

/// Ranks `candidates` by the metric over globally pooled test counts.
inline RankedList rank_global(const std::vector<ProductSpectra> &all,
                              const StatementSet &candidates, Metric metric) {
  std::vector<RankedEntry> entries;
  for (const auto &s : candidates)
    entries.push_back({s, score(metric, count_spectrum_global(all, s)), 0});
  return make_ranked_list(std::move(entries));
}

inline RankedList sbfl_global(const std::vector<ProductSpectra> &all,
                              Metric metric) {
  auto candidates = sbfl_candidates(all);
  if (candidates.empty())
    throw PreconditionError("sbfl needs at least one failed test");
  return rank_global(all, candidates, metric);
}

/// Union over failed tests of backward_slice(failure point) intersected with
/// the test's coverage.
inline StatementSet ssbfl_candidates(const SplSystem &system,
                                     const std::vector<ProductSpectra> &all) {
  StatementSet out;
  bool any_failed = false;
  for (const auto &ps : all) {
    for (const auto &t : ps.tests) {
      if (!t.failed())
        continue;
      any_failed = true;
      if (!t.failure_point)
        throw PreconditionError("failed test '" + t.id + "' of product '" +
                                ps.product.id.str() +
                                "' has no failure_point");
      for (const auto &s :
           backward_slice(system, *t.failure_point, ps.product))
        if (t.covered.contains(s))
          out.insert(s);
    }
  }
  if (!any_failed)
    throw PreconditionError("ssbfl needs at least one failed test");
  return out;
}

inline RankedList s_sbfl(const SplSystem &system,
                         const std::vector<ProductSpectra> &all,
                         Metric metric) {
  return rank_global(all, ssbfl_candidates(system, all), metric);
}

struct FeatureScore {
  FeatureId feature;
  double score = 0.0;
  int rank = 0;
};

struct FeatureBasedResult {
  std::vector<FeatureScore> features;
  RankedList statements;
};

/// Feature-level SBFL: each product is a test, each enabled feature is
/// "executed" by it. Every statement inherits its feature's score.
inline FeatureBasedResult feature_based(const SplSystem &system,
                                        const std::vector<ProductSpectra> &all,
                                        Metric metric) {
  bool any_failing = false;
  for (const auto &ps : all)
    any_failing = any_failing || ps.failing();
  if (!any_failing)
    throw PreconditionError("feature-based ranking needs a failing product");

  std::map<FeatureId, double> feature_score;
  for (const auto &decl : system.features()) {
    SpectrumCounts c;
    for (const auto &ps : all) {
      const bool on = ps.product.config.at(decl.id);
      if (ps.failing())
        ++(on ? c.ef : c.nf);
      else
        ++(on ? c.ep : c.np);
    }
    feature_score[decl.id] = score(metric, c);
  }

  FeatureBasedResult out;
  for (const auto &[f, sc] : feature_score)
    out.features.push_back({f, sc, 0});
  std::stable_sort(out.features.begin(), out.features.end(),
                   [](const FeatureScore &a, const FeatureScore &b) {
                     return a.score > b.score;
                   });
  int rank = 0;
  for (std::size_t i = 0; i < out.features.size(); ++i) {
    if (i == 0 || out.features[i].score != out.features[i - 1].score)
      ++rank;
    out.features[i].rank = rank;
  }

  std::vector<RankedEntry> entries;
  std::map<StatementId, FeatureId> owner;
  for (const auto &st : system.statements()) {
    entries.push_back({st.id, feature_score.at(st.feature), 0});
    owner.emplace(st.id, st.feature);
  }
  out.statements = make_ranked_list(
      std::move(entries), [&](const RankedEntry &a, const RankedEntry &b) {
        const auto &fa = owner.at(a.statement), &fb = owner.at(b.statement);
        if (fa != fb)
          return fa < fb;
        return a.statement < b.statement;
      });
  return out;
}

} // namespace vfl
