#pragma once

// Two-dimensional suspiciousness: a product-based score treating each
// sampled product as one test, a test-case-based score aggregating
// normalized per-product scores, and their weighted combination.

#include "vfl/isolation.hpp"
#include "vfl/metrics.hpp"
#include "vfl/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace vfl {

enum class Aggregation { mean, geometric, max, min, median };
enum class Normalization { minmax, none };

inline std::string_view to_string(Aggregation a) {
  switch (a) {
  case Aggregation::mean:
    return "mean";
  case Aggregation::geometric:
    return "geometric";
  case Aggregation::max:
    return "max";
  case Aggregation::min:
    return "min";
  case Aggregation::median:
    return "median";
  }
  return "mean";
}

inline Aggregation parse_aggregation(std::string_view s) {
  for (auto a : {Aggregation::mean, Aggregation::geometric, Aggregation::max,
                 Aggregation::min, Aggregation::median})
    if (to_string(a) == s)
      return a;
  throw ValidationError("unknown aggregation '" + std::string(s) + "'");
}

inline std::string_view to_string(Normalization n) {
  return n == Normalization::minmax ? "minmax" : "none";
}

inline Normalization parse_normalization(std::string_view s) {
  if (s == "minmax")
    return Normalization::minmax;
  if (s == "none")
    return Normalization::none;
  throw ValidationError("unknown normalization '" + std::string(s) + "'");
}

struct RankingConfig {
  Metric metric = Metric::op2;
  double weight = 0.5;
  Aggregation aggregation = Aggregation::mean;
  Normalization normalization = Normalization::minmax;

  void validate() const {
    if (!(weight >= 0.0 && weight <= 1.0))
      throw ValidationError("combination weight must lie in [0, 1], got " +
                            std::to_string(weight));
  }
};

struct RankedEntry {
  StatementId statement;
  double score = 0.0;
  /// Dense rank: 1 for the top score, tied entries share a rank.
  int rank = 0;
};

struct RankedList {
  std::vector<RankedEntry> entries;

  std::size_t size() const noexcept { return entries.size(); }
  bool empty() const noexcept { return entries.empty(); }
  StatementSet ids() const {
    StatementSet out;
    for (const auto &e : entries)
      out.insert(e.statement);
    return out;
  }
};

/// Sorts by score descending, breaking ties with `tie_less` (statement id
/// ascending by default), and assigns dense ranks.
inline RankedList make_ranked_list(
    std::vector<RankedEntry> entries,
    const std::function<bool(const RankedEntry &, const RankedEntry &)>
        &tie_less = {}) {
  std::sort(entries.begin(), entries.end(),
            [&](const RankedEntry &a, const RankedEntry &b) {
              if (a.score != b.score)
                return a.score > b.score;
              if (tie_less)
                return tie_less(a, b);
              return a.statement < b.statement;
            });
  int rank = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i == 0 || entries[i].score != entries[i - 1].score)
      ++rank;
    entries[i].rank = rank;
  }
  return RankedList{std::move(entries)};
}

/// Min-max scaling to [0, 1]; a degenerate range maps everything to 0.5.
template <typename Key>
void normalize_minmax(std::map<Key, double> &values) {
  if (values.empty())
    return;
  auto [lo, hi] = std::minmax_element(
      values.begin(), values.end(),
      [](const auto &a, const auto &b) { return a.second < b.second; });
  const double min = lo->second, max = hi->second;
  for (auto &[k, v] : values)
    v = max == min ? 0.5 : (v - min) / (max - min);
}

/// Aggregates local scores. Values are consumed in the given order so sums
/// are reproducible. Geometric mean clamps negative inputs to 0.
inline double aggregate(std::vector<double> values, Aggregation how) {
  if (values.empty())
    return 0.0;
  switch (how) {
  case Aggregation::mean: {
    double sum = 0.0;
    for (double v : values)
      sum += v;
    return sum / static_cast<double>(values.size());
  }
  case Aggregation::geometric: {
    double log_sum = 0.0;
    for (double v : values) {
      if (v <= 0.0)
        return 0.0;
      log_sum += std::log(v);
    }
    return std::exp(log_sum / static_cast<double>(values.size()));
  }
  case Aggregation::max:
    return *std::max_element(values.begin(), values.end());
  case Aggregation::min:
    return *std::min_element(values.begin(), values.end());
  case Aggregation::median: {
    std::sort(values.begin(), values.end());
    const auto n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  }
  }
  return 0.0;
}

/// ps(s, M): the metric over (failing products containing s, passing
/// products containing s, and their complements).
inline double product_based_score(const StatementId &s,
                                  const std::vector<const Product *> &passing,
                                  const std::vector<const Product *> &failing,
                                  Metric metric) {
  SpectrumCounts c;
  for (const auto *p : failing)
    ++(p->statements.contains(s) ? c.ef : c.nf);
  for (const auto *p : passing)
    ++(p->statements.contains(s) ? c.ep : c.np);
  return score(metric, c);
}

/// Local scores of the `scope` statements present in one product, normalized
/// per `cfg.normalization` over exactly that set.
inline std::map<StatementId, double>
local_scores(const ProductSpectra &spectra, const StatementSet &scope,
             const RankingConfig &cfg) {
  std::map<StatementId, double> out;
  for (const auto &s : scope)
    if (spectra.product.statements.contains(s))
      out.emplace(s, score(cfg.metric, count_spectrum(spectra, s)));
  if (cfg.normalization == Normalization::minmax)
    normalize_minmax(out);
  return out;
}

/// ts(s, M) from precomputed per-product local scores (one map per failing
/// product, in canonical product order). Zero when no product contains s.
inline double
testcase_based_score(const StatementId &s,
                     const std::vector<std::map<StatementId, double>> &locals,
                     Aggregation how) {
  std::vector<double> values;
  for (const auto &local : locals) {
    auto it = local.find(s);
    if (it != local.end())
      values.push_back(it->second);
  }
  return aggregate(std::move(values), how);
}

/// ts(s, M) for one statement; normalization scope per product is `scope`
/// restricted to the product.
inline double
testcase_based_score(const StatementId &s,
                     const std::vector<const ProductSpectra *> &failing,
                     const RankingConfig &cfg, const StatementSet &scope) {
  std::vector<std::map<StatementId, double>> locals;
  for (const auto *ps : failing)
    locals.push_back(local_scores(*ps, scope, cfg));
  return testcase_based_score(s, locals, cfg.aggregation);
}

inline double combine(double ps, double ts, double w) {
  if (!(w >= 0.0 && w <= 1.0))
    throw ValidationError("combination weight must lie in [0, 1]");
  return w * ps + (1.0 - w) * ts;
}

/// Per-statement breakdown kept alongside the final ranking.
struct ScoreParts {
  double ps = 0.0;
  double ts = 0.0;
};

/// Scores and ranks the suspicious space.
inline RankedList rank_suspicious(const std::vector<ProductSpectra> &all,
                                  const StatementSet &space,
                                  const RankingConfig &cfg,
                                  std::map<StatementId, ScoreParts> *parts =
                                      nullptr) {
  cfg.validate();
  std::vector<const Product *> passing, failing;
  std::vector<const ProductSpectra *> failing_spectra;
  for (const auto &ps : all) {
    if (ps.failing()) {
      failing.push_back(&ps.product);
      failing_spectra.push_back(&ps);
    } else {
      passing.push_back(&ps.product);
    }
  }
  std::sort(failing_spectra.begin(), failing_spectra.end(),
            [](auto *a, auto *b) { return a->product.id < b->product.id; });

  std::vector<std::map<StatementId, double>> locals;
  for (const auto *ps : failing_spectra)
    locals.push_back(local_scores(*ps, space, cfg));

  std::map<StatementId, double> ps_scores, ts_scores;
  for (const auto &s : space) {
    ps_scores[s] = product_based_score(s, passing, failing, cfg.metric);
    ts_scores[s] = testcase_based_score(s, locals, cfg.aggregation);
  }
  if (cfg.normalization == Normalization::minmax) {
    normalize_minmax(ps_scores);
    normalize_minmax(ts_scores);
  }

  std::vector<RankedEntry> entries;
  for (const auto &s : space) {
    entries.push_back({s, combine(ps_scores[s], ts_scores[s], cfg.weight), 0});
    if (parts)
      (*parts)[s] = {ps_scores[s], ts_scores[s]};
  }
  return make_ranked_list(std::move(entries));
}

} // namespace vfl
