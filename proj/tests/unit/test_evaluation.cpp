#include "elevator.hpp"
#include "vfl/evaluation.hpp"
#include "vfl/localize.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace vfl;
using elevator::ids;

namespace {

RankedList list_of(std::vector<std::pair<const char *, double>> scores) {
  std::vector<RankedEntry> entries;
  for (const auto &[s, v] : scores)
    entries.push_back({StatementId(s), v, 0});
  return make_ranked_list(std::move(entries));
}

RankedList descending(int n) {
  std::vector<RankedEntry> entries;
  for (int i = 0; i < n; ++i)
    entries.push_back({StatementId("s" + std::to_string(i + 1)),
                       static_cast<double>(n - i), 0});
  return make_ranked_list(std::move(entries));
}

} // namespace

TEST_CASE("buggy statements rank last among ties") {
  const auto list = list_of({{"a", 0.9}, {"buggy", 0.9}, {"b", 0.5}});
  const auto r = rank_of(list, {ids({"buggy"})});
  CHECK(r.ranks.at(StatementId("buggy")) == 2);
  CHECK(r.best_rank == 2);
  // Even though the id sorts first among the tie.
  const auto r2 = rank_of(list_of({{"z", 0.9}, {"a", 0.9}}), {ids({"a"})});
  CHECK(r2.best_rank == 2);
}

TEST_CASE("rank_of basics") {
  CHECK(rank_of(list_of({{"bug", 1.0}, {"x", 0.2}}), {ids({"bug"})}).best_rank ==
        1);
  const auto ten = descending(10);
  const auto r = rank_of(ten, {ids({"s4", "s9"})});
  CHECK(r.ranks.at(StatementId("s4")) == 4);
  CHECK(r.ranks.at(StatementId("s9")) == 9);
  CHECK(r.best_rank == 4);
  const auto missing = rank_of(ten, {ids({"s99"})});
  CHECK_FALSE(missing.ranks.at(StatementId("s99")).has_value());
  CHECK_FALSE(missing.best_rank.has_value());
}

TEST_CASE("EXAM") {
  const auto ten = descending(10);
  const auto e1 = exam(ten, {ids({"s2"})});
  CHECK(e1.percent == 20.0);
  CHECK_FALSE(e1.unranked);
  CHECK(exam(ten, {ids({"s10"})}).percent == 100.0);
  const auto none = exam(ten, {ids({"s99"})});
  CHECK(none.percent == 100.0);
  CHECK(none.unranked);
  const auto empty = exam(RankedList{}, {ids({"s1"})});
  CHECK(empty.unranked);
}

TEST_CASE("Hit@X") {
  const auto ten = descending(10);
  CHECK(hit_at(ten, {ids({"s1"})}, 1));
  CHECK_FALSE(hit_at(ten, {ids({"s6"})}, 5));
  CHECK(hit_at(ten, {ids({"s6"})}, 6));
  CHECK_THROWS_AS(hit_at(ten, {ids({"s1"})}, 0), ValidationError);
}

TEST_CASE("PBL") {
  const auto ten = descending(10);
  const GroundTruth two{ids({"s1", "s4"})};
  CHECK(pbl(ten, two, 0) == 0.0);
  CHECK(pbl(ten, two, 2) == 0.5);
  CHECK(pbl(ten, two, 10) == 1.0);
  CHECK(pbl(ten, {ids({"s1", "s99"})}, 10) == 0.5);
  CHECK_THROWS_AS(pbl(ten, two, -1), ValidationError);
}

TEST_CASE("evaluate on the fixture") {
  const auto &e = elevator::load();
  const auto result = localize(e.system, e.spectra, {});
  const auto report = evaluate(result.ranking, e.truth);
  CHECK(report.rank.best_rank == 1);
  CHECK(report.hit_at.at(1));
  CHECK(report.exam.percent == 100.0 / static_cast<double>(result.ranking.size()));
  CHECK(report.hit_at.size() == 5);
  CHECK(report.pbl_curve.size() == result.ranking.size() + 1);
  CHECK_THROWS_AS(evaluate(result.ranking, GroundTruth{}), ValidationError);
}

TEST_CASE("empty ranked list leaves every bug unranked") {
  const auto report = evaluate(RankedList{}, {ids({"s1", "s2"})});
  CHECK(report.exam.unranked);
  CHECK(report.exam.percent == 100.0);
  for (const auto &[s, r] : report.rank.ranks)
    CHECK_FALSE(r.has_value());
}

TEST_CASE("rank is invariant under strictly increasing transforms") {
  const auto base = list_of({{"a", 0.3}, {"b", 0.3}, {"c", 0.9}, {"d", 0.1},
                             {"e", 0.5}, {"f", 0.5}});
  std::vector<RankedEntry> warped;
  for (const auto &entry : base.entries)
    warped.push_back({entry.statement, std::exp(5.0 * entry.score) + 2.0, 0});
  const auto other = make_ranked_list(std::move(warped));
  for (const char *s : {"a", "b", "c", "d", "e", "f"}) {
    const GroundTruth t{ids({s})};
    CHECK(rank_of(base, t).best_rank == rank_of(other, t).best_rank);
  }
}

TEST_CASE("monotone evaluation curves") {
  const auto list = list_of({{"a", 0.3}, {"b", 0.3}, {"c", 0.9}, {"d", 0.1},
                             {"e", 0.5}, {"f", 0.5}, {"g", 0.2}});
  for (const char *bug : {"a", "c", "d", "f"}) {
    const GroundTruth t{ids({bug, "g"})};
    const auto report = evaluate(list, t, 7);
    bool prev_hit = false;
    for (const auto &[x, hit] : report.hit_at) {
      CHECK((!prev_hit || hit));
      prev_hit = hit;
    }
    for (std::size_t i = 1; i < report.pbl_curve.size(); ++i)
      CHECK(report.pbl_curve[i].second >= report.pbl_curve[i - 1].second);
    CHECK(report.exam.percent > 0.0);
    CHECK(report.exam.percent <= 100.0);
    CHECK(report.exam.percent ==
          100.0 * *report.rank.best_rank / static_cast<double>(list.size()));
  }
}
