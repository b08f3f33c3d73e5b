#pragma once

// Localization quality: Rank (buggy statements last among ties), EXAM,
// Hit@X and proportion of bugs localized.

#include "vfl/ranking.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace vfl {

struct GroundTruth {
  StatementSet buggy;
};

/// Worst-position rank of every buggy statement; nullopt when unranked.
struct RankReport {
  std::map<StatementId, std::optional<int>> ranks;
  std::optional<int> best_rank;
};

inline RankReport rank_of(const RankedList &list, const GroundTruth &truth) {
  RankReport out;
  for (const auto &b : truth.buggy) {
    auto it = std::find_if(list.entries.begin(), list.entries.end(),
                           [&](const RankedEntry &e) { return e.statement == b; });
    if (it == list.entries.end()) {
      out.ranks[b] = std::nullopt;
      continue;
    }
    int position = 0;
    for (const auto &e : list.entries)
      if (e.score >= it->score)
        ++position;
    out.ranks[b] = position;
    if (!out.best_rank || position < *out.best_rank)
      out.best_rank = position;
  }
  return out;
}

struct ExamResult {
  double percent = 100.0;
  bool unranked = false;
};

/// 100 * r / N for the first buggy statement reached; 100% and flagged
/// unranked when no buggy statement is in the list.
inline ExamResult exam(const RankedList &list, const GroundTruth &truth) {
  const auto report = rank_of(list, truth);
  if (!report.best_rank)
    return {100.0, true};
  return {100.0 * *report.best_rank / static_cast<double>(list.size()), false};
}

inline bool hit_at(const RankedList &list, const GroundTruth &truth, int x) {
  if (x < 1)
    throw ValidationError("Hit@X needs X >= 1");
  const auto report = rank_of(list, truth);
  return report.best_rank && *report.best_rank <= x;
}

/// Fraction of buggy statements with rank <= examined.
inline double pbl(const RankedList &list, const GroundTruth &truth,
                  int examined) {
  if (examined < 0)
    throw ValidationError("examined statement count must be >= 0");
  if (truth.buggy.empty())
    return 0.0;
  const auto report = rank_of(list, truth);
  std::size_t found = 0;
  for (const auto &[s, r] : report.ranks)
    if (r && *r <= examined)
      ++found;
  return static_cast<double>(found) / static_cast<double>(truth.buggy.size());
}

struct EvalReport {
  RankReport rank;
  ExamResult exam;
  std::map<int, bool> hit_at;
  std::vector<std::pair<int, double>> pbl_curve;
  std::size_t list_size = 0;
};

/// Full report with Hit@1..`max_hit` and the PBL curve over 0..N examined.
inline EvalReport evaluate(const RankedList &list, const GroundTruth &truth,
                           int max_hit = 5) {
  if (truth.buggy.empty())
    throw ValidationError("ground truth has no buggy statement");
  EvalReport out;
  out.rank = rank_of(list, truth);
  out.exam = exam(list, truth);
  for (int x = 1; x <= max_hit; ++x)
    out.hit_at[x] = hit_at(list, truth, x);
  for (int n = 0; n <= static_cast<int>(list.size()); ++n)
    out.pbl_curve.emplace_back(n, pbl(list, truth, n));
  out.list_size = list.size();
  return out;
}

} // namespace vfl
