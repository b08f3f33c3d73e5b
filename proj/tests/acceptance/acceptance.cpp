// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Tolerances and time limits are fixed below.

#include "vfl/io.hpp"
#include "vfl/localize.hpp"
#include "vfl/testkit.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

namespace {

using namespace vfl;
using Clock = std::chrono::steady_clock;

constexpr double kTol = 1e-9;
constexpr double kFixtureSpcSeconds = 1.0;
constexpr double kEndToEndSeconds = 5.0;
constexpr double kOracleSuiteSeconds = 60.0;
constexpr int kRandomCases = 200;

const std::string kData = VFL_DATA_DIR;

struct Fixture {
  SplSystem system;
  std::vector<Product> products;
  std::vector<ProductSpectra> spectra;
  GroundTruth truth;
};

Fixture load_fixture() {
  auto system = io::parse_system(io::read_json_file(kData + "/system.json"));
  auto products =
      io::parse_products(system, io::read_json_file(kData + "/products.json"));
  auto spectra = io::parse_spectra(
      system, products, io::read_json_file(kData + "/spectra.json"));
  auto truth =
      io::parse_truth(io::read_json_file(kData + "/truth.json"), &system);
  return {std::move(system), std::move(products), std::move(spectra),
          std::move(truth)};
}

const Product &product(const Fixture &f, const std::string &id) {
  for (const auto &p : f.products)
    if (p.id.str() == id)
      return p;
  throw std::out_of_range(id);
}

const ProductSpectra &spectra_of(const Fixture &f, const std::string &id) {
  for (const auto &ps : f.spectra)
    if (ps.product.id.str() == id)
      return ps;
  throw std::out_of_range(id);
}

StatementSet ids(std::initializer_list<const char *> names) {
  StatementSet out;
  for (const auto *n : names)
    out.insert(StatementId(n));
  return out;
}

FeatureSelection sel(const char *f, bool on) { return {FeatureId(f), on}; }

std::string show(const StatementSet &s) {
  std::string out = "{";
  for (const auto &x : s)
    out += (out.size() > 1 ? "," : "") + x.str();
  return out + "}";
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool subset(const StatementSet &a, const StatementSet &b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

struct Verdict {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string &name,
            const std::function<Verdict()> &run) {
  Verdict o{false, ""};
  try {
    o = run();
  } catch (const std::exception &e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass)
    ++failures;
  std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << id << "  "
            << name << "  (" << o.detail << ")" << std::endl;
}

std::vector<SampledConfig> configs(const std::vector<ProductSpectra> &all,
                                   bool failing) {
  return sampled_configs(all, failing);
}

testkit::GeneratedCase oracle_case(std::uint64_t seed) {
  testkit::GeneratorSpec spec;
  spec.seed = seed;
  spec.n_features = 3 + static_cast<int>(seed % 4); // 3..6
  const int space = 1 << (spec.n_features - 1);
  spec.n_products = std::min(space, 2 + static_cast<int>(seed % 15));
  spec.n_statements = 12;
  spec.tests_per_product = 3;
  return testkit::generate_system(spec);
}

std::string slurp(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

int main() {
  const Fixture fx = load_fixture();

  report(1, "fixture suspicious PCs are exactly D1 and D2", [&]() -> Verdict {
    const auto t0 = Clock::now();
    const auto spcs = detect_spcs(configs(fx.spectra, false),
                                  configs(fx.spectra, true), default_k());
    const double dt = seconds_since(t0);
    std::set<PartialConfiguration> got, want{
        {sel("TwoThirdsFull", false), sel("Overloaded", true)},
        {sel("Empty", true), sel("Overloaded", true)}};
    std::string text;
    for (const auto &s : spcs) {
      got.insert(s.selections);
      text += to_string(s.selections) + " ";
    }
    return {got == want && dt < kFixtureSpcSeconds,
            text + "in " + std::to_string(dt) + "s"};
  });

  report(2, "SFS of c6 and c7", [&]() -> Verdict {
    const auto passing = configs(fx.spectra, false);
    const auto &p6 = product(fx, "p6"), &p7 = product(fx, "p7");
    const auto sfs6 =
        suspicious_feature_selections({p6.id, p6.config}, passing).selections;
    const auto sfs7 =
        suspicious_feature_selections({p7.id, p7.config}, passing).selections;
    const std::set<FeatureSelection> want6{
        sel("Empty", true), sel("Weight", true), sel("TwoThirdsFull", false),
        sel("Overloaded", true)};
    const std::set<FeatureSelection> want7{
        sel("Empty", false), sel("Weight", true), sel("TwoThirdsFull", false),
        sel("Overloaded", true)};
    return {sfs6 == want6 && sfs7 == want7,
            "|SFS6|=" + std::to_string(sfs6.size()) +
                " |SFS7|=" + std::to_string(sfs7.size())};
  });

  report(3, "impact set example and closure oracle on 200 graphs",
         [&]() -> Verdict {
           const auto omega =
               impact_set(fx.system, StatementId("s33"), product(fx, "p5"));
           const bool example = omega == ids({"s33", "s36", "s37", "s38"});
           long compared = 0, mismatches = 0;
           for (std::uint64_t seed = 0; seed < kRandomCases; ++seed) {
             testkit::GeneratorSpec spec;
             spec.seed = 1000 + seed;
             spec.n_features = 3 + static_cast<int>(seed % 4);
             spec.n_statements = 8 + static_cast<int>(seed % 43);
             spec.edge_density = 0.02 + 0.04 * static_cast<double>(seed % 6);
             spec.n_products = 4;
             const auto g = testkit::generate_system(spec);
             if (g.system.statements().size() > 50)
               return {false, "generated graph above 50 statements"};
             for (const auto &ps : g.spectra)
               for (const auto &st : g.system.statements()) {
                 ++compared;
                 if (impact_set(g.system, st.id, ps.product) !=
                     testkit::oracle_closure(g.system, st.id, ps.product))
                   ++mismatches;
               }
           }
           return {example && mismatches == 0,
                   "Omega(s33,p5)=" + show(omega) + ", " +
                       std::to_string(mismatches) + " mismatches over " +
                       std::to_string(compared) + " queries"};
         });

  report(4, "interaction of Weight and Overloaded in p7", [&]() -> Verdict {
    const auto beta = interaction_impl(
        fx.system, {FeatureId("Weight"), FeatureId("Overloaded")},
        product(fx, "p7"));
    return {beta == ids({"s31", "s33", "s36", "s37", "s38"}), show(beta)};
  });

  report(5, "isolation for D1 in p7", [&]() -> Verdict {
    const SuspiciousPC d1{{sel("TwoThirdsFull", false), sel("Overloaded", true)},
                          {}};
    const auto &ps = spectra_of(fx, "p7");
    const auto r = suspicious_statements(fx.system, d1, ps);
    const bool has = subset(ids({"s9", "s15", "s31"}), r.suspicious);
    const bool covered = subset(r.suspicious, failed_coverage(ps));
    return {has && covered, "suspicious=" + show(r.suspicious)};
  });

  report(6, "end-to-end ranking puts s31 first and matches the oracle",
         [&]() -> Verdict {
           const auto t0 = Clock::now();
           const auto f = load_fixture();
           LocalizeOptions opts; // Op2, mean, w = 0.5, K = 7
           const auto r = localize(f.system, f.spectra, opts);
           const double dt = seconds_since(t0);
           // Values from tests/oracle/elevator_oracle.py.
           const std::vector<std::pair<std::string, double>> want{
               {"s31", 1.0}, {"s9", 0.625}, {"s15", 17.0 / 72.0},
               {"s1", 0.0},  {"s2", 0.0},   {"s36", 0.0}};
           bool same = r.ranking.size() == want.size();
           for (std::size_t i = 0; same && i < want.size(); ++i)
             same = r.ranking.entries[i].statement.str() == want[i].first &&
                    std::abs(r.ranking.entries[i].score - want[i].second) <
                        kTol;
           const auto rank = rank_of(r.ranking, f.truth).best_rank;
           return {same && rank == 1 && dt < kEndToEndSeconds,
                   "rank(s31)=" + (rank ? std::to_string(*rank) : "none") +
                       " in " + std::to_string(dt) + "s"};
         });

  report(7, "detect_spcs equals the brute-force oracle on 200 cases",
         [&]() -> Verdict {
           const auto t0 = Clock::now();
           int mismatches = 0;
           for (std::uint64_t seed = 0; seed < kRandomCases; ++seed) {
             const auto g = oracle_case(seed);
             const auto passing = configs(g.spectra, false);
             const auto failing = configs(g.spectra, true);
             const auto got =
                 detect_spcs(passing, failing,
                             static_cast<int>(g.system.features().size()));
             const auto want = testkit::oracle_spcs(passing, failing, g.system);
             bool same = got.size() == want.size();
             for (std::size_t i = 0; same && i < got.size(); ++i)
               same = got[i].selections == want[i].selections;
             mismatches += same ? 0 : 1;
           }
           const double dt = seconds_since(t0);
           return {mismatches == 0 && dt < kOracleSuiteSeconds,
                   std::to_string(mismatches) + " mismatches in " +
                       std::to_string(dt) + "s"};
         });

  report(8, "metrics finite on the sweep and worked values", [&]() -> Verdict {
    long nonfinite = 0;
    for (auto m : list_metrics())
      for (long ef = 0; ef <= 10; ++ef)
        for (long ep = 0; ep <= 10; ++ep)
          for (long nf = 0; nf <= 10; ++nf)
            for (long np = 0; np <= 10; ++np)
              if (!std::isfinite(score(m, {ef, ep, nf, np})))
                ++nonfinite;
    const double tar = score(Metric::tarantula, {2, 1, 0, 4});
    const double och = score(Metric::ochiai, {2, 1, 0, 4});
    const double op2 = score(Metric::op2, {2, 1, 0, 4});
    const double ds2 = score(Metric::dstar2, {2, 1, 0, 4});
    const bool values = std::abs(tar - 1.0 / 1.2) < kTol &&
                        std::abs(och - 2.0 / std::sqrt(6.0)) < kTol &&
                        std::abs(op2 - 11.0 / 6.0) < kTol &&
                        std::abs(ds2 - 4.0) < kTol;
    return {list_metrics().size() == 30 && nonfinite == 0 && values,
            std::to_string(nonfinite) + " non-finite values; tarantula=" +
                std::to_string(tar) + " ochiai=" + std::to_string(och) +
                " op2=" + std::to_string(op2)};
  });

  report(9, "baseline sanity on generated cases", [&]() -> Verdict {
    int bad = 0;
    for (std::uint64_t seed = 0; seed < kRandomCases; ++seed) {
      testkit::GeneratorSpec spec;
      spec.seed = seed;
      spec.n_features = 3 + static_cast<int>(seed % 4);
      spec.n_products = 4;
      const auto g = testkit::generate_system(spec);
      if (!subset(ssbfl_candidates(g.system, g.spectra),
                  sbfl_candidates(g.spectra)))
        ++bad;
      const auto fb = feature_based(g.system, g.spectra, Metric::ochiai);
      std::set<FeatureId> seen;
      for (const auto &f : fb.features)
        seen.insert(f.feature);
      if (fb.features.size() != g.system.features().size() ||
          seen.size() != fb.features.size())
        ++bad;
    }
    return {bad == 0, std::to_string(bad) + " violating cases"};
  });

  report(10, "tie rule and EXAM on hand-built lists", [&]() -> Verdict {
    const auto tie = make_ranked_list({{StatementId("a"), 0.9, 0},
                                       {StatementId("buggy"), 0.9, 0},
                                       {StatementId("b"), 0.5, 0}});
    const auto r = rank_of(tie, {ids({"buggy"})}).best_rank;
    std::vector<RankedEntry> ten;
    for (int i = 0; i < 10; ++i)
      ten.push_back({StatementId("s" + std::to_string(i)), 10.0 - i, 0});
    const auto list = make_ranked_list(ten);
    const auto e = exam(list, {ids({"s1"})});
    return {r == 2 && e.percent == 20.0 && !e.unranked,
            "rank=" + (r ? std::to_string(*r) : "none") +
                " exam=" + std::to_string(e.percent)};
  });

  report(11, "identical inputs give byte-identical outputs", [&]() -> Verdict {
    const auto dir =
        std::filesystem::temp_directory_path() / "vfl_acceptance_determinism";
    std::filesystem::create_directories(dir);
    LocalizeOptions opts;
    auto run = [&](const std::string &name) {
      const auto f = load_fixture();
      const auto result = localize(f.system, f.spectra, opts);
      auto manifest = io::RunManifest::from_options(opts);
      manifest.inputs = {{"system", kData + "/system.json"}};
      io::write_json_file(dir / (name + ".json"),
                          io::ranked_to_json(manifest, result));
      const auto report = evaluate(result.ranking, f.truth);
      io::write_json_file(dir / (name + "_eval.json"),
                          io::report_to_json(report, io::manifest_to_json(manifest)));
    };
    run("a");
    run("b");
    const bool ranked = slurp(dir / "a.json") == slurp(dir / "b.json");
    const bool eval = slurp(dir / "a_eval.json") == slurp(dir / "b_eval.json");
    const auto bytes = slurp(dir / "a.json").size();
    std::filesystem::remove_all(dir);
    return {ranked && eval && bytes > 0,
            std::to_string(bytes) + " bytes per ranked file"};
  });

  std::cout << (failures == 0 ? "all criteria passed"
                              : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
