#include "elevator.hpp"
#include "vfl/isolation.hpp"
#include "vfl/localize.hpp"
#include "vfl/testkit.hpp"

#include <catch_amalgamated.hpp>

using namespace vfl;
using elevator::ids;
using elevator::sel;

namespace {

const SuspiciousPC d1{{sel("TwoThirdsFull", false), sel("Overloaded", true)},
                      {ProductId("p6"), ProductId("p7")}};
const SuspiciousPC d2{{sel("Empty", true), sel("Overloaded", true)},
                      {ProductId("p6")}};

bool subset(const StatementSet &a, const StatementSet &b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

testkit::GeneratedCase wired_case(std::uint64_t seed) {
  testkit::GeneratorSpec spec;
  spec.seed = seed;
  spec.n_features = 3 + static_cast<int>(seed % 5);
  spec.n_statements = 10 + static_cast<int>(seed % 30);
  spec.n_products = 4 + static_cast<int>(seed % 5);
  spec.edge_density = 0.03 + 0.02 * static_cast<double>(seed % 5);
  return testkit::generate_system(spec);
}

} // namespace

TEST_CASE("interaction core examples") {
  const auto &e = elevator::load();
  CHECK(interaction_core(e.system, d1, e.product("p7")) ==
        ids({"s36", "s37", "s38"}));
  CHECK(interaction_core(e.system, d2, e.product("p6")).empty());

  const SuspiciousPC enabled_only{{sel("Weight", true), sel("Overloaded", true)},
                                  {}};
  CHECK(interaction_core(e.system, enabled_only, e.product("p7")) ==
        interaction_impl(e.system, {FeatureId("Weight"), FeatureId("Overloaded")},
                         e.product("p7")));

  const SuspiciousPC disabled_only{{sel("TwoThirdsFull", false)}, {}};
  CHECK(interaction_core(e.system, disabled_only, e.product("p7")) ==
        defuse_impact(e.system, FeatureId("TwoThirdsFull"), e.product("p7")));

  CHECK_THROWS_AS(interaction_core(e.system, d2, e.product("p7")),
                  ValidationError);
}

TEST_CASE("suspicious statements for D1 in p7") {
  const auto &e = elevator::load();
  const auto r = suspicious_statements(e.system, d1, e.spectra_of("p7"));
  CHECK(subset(ids({"s9", "s15", "s31"}), r.suspicious));
  CHECK(r.suspicious.contains(StatementId("s31")));
  const auto cov = failed_coverage(e.spectra_of("p7"));
  CHECK(subset(r.suspicious, cov));
  CHECK(subset(r.suspicious, r.candidates));
  CHECK(subset(r.candidates, e.product("p7").statements));
  CHECK(subset(r.core, r.candidates));
}

TEST_CASE("empty core gives no suspicious statements") {
  const auto &e = elevator::load();
  const auto r = suspicious_statements(e.system, d2, e.spectra_of("p6"));
  CHECK(r.core.empty());
  CHECK(r.suspicious.empty());
}

TEST_CASE("suspicious space on the fixture") {
  const auto &e = elevator::load();
  const auto space = suspicious_space(e.system, e.spectra, {d1, d2});
  REQUIRE(space.statements.contains(StatementId("s31")));
  std::set<ProductId> from;
  for (const auto &ev : space.statements.at(StatementId("s31")))
    from.insert(ev.product);
  CHECK(from == std::set<ProductId>{ProductId("p6"), ProductId("p7")});
  CHECK(space.ids() == ids({"s1", "s15", "s2", "s31", "s36", "s9"}));
  // s40 is only executed by passing tests.
  CHECK_FALSE(space.statements.contains(StatementId("s40")));
  CHECK(suspicious_space(e.system, e.spectra, {}).empty());
}

TEST_CASE("forward extension only adds statements") {
  const auto &e = elevator::load();
  const auto narrow = suspicious_statements(e.system, d1, e.spectra_of("p7"));
  const auto wide =
      suspicious_statements(e.system, d1, e.spectra_of("p7"), true);
  CHECK(subset(narrow.suspicious, wide.suspicious));
  CHECK(subset(narrow.candidates, wide.candidates));
}

TEST_CASE("isolation invariants on generated cases") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto g = wired_case(seed);
    const auto spcs = detect_spcs(sampled_configs(g.spectra, false),
                                  sampled_configs(g.spectra, true), default_k());
    const auto narrow = suspicious_space(g.system, g.spectra, spcs, false);
    const auto wide = suspicious_space(g.system, g.spectra, spcs, true);
    CHECK(subset(narrow.ids(), wide.ids()));
    for (const auto &r : narrow.results) {
      const auto &ps = *std::find_if(
          g.spectra.begin(), g.spectra.end(),
          [&](const ProductSpectra &x) { return x.product.id == r.product; });
      CHECK(subset(r.core, ps.product.statements));
      CHECK(subset(r.suspicious, r.candidates));
      CHECK(subset(r.candidates, ps.product.statements));
      CHECK(subset(r.suspicious, failed_coverage(ps)));
    }
    const auto &bug = *g.truth.buggy.begin();
    if (!narrow.statements.contains(bug))
      FAIL("seeded bug missing from the suspicious space, seed " << seed);
  }
}
