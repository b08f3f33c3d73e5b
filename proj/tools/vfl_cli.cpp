// vfl: variability fault localization for product lines.
//
//   vfl localize --system S --products P --spectra R [options] [--output F]
//   vfl eval     --ranked F --truth T [--system S] [--output F]
//   vfl gen      --seed N --features N [...] --output DIR
//
// Exit codes: 0 success, 2 invalid input or flags, 3 technique precondition
// not met, 1 anything else. VFL_LOG_LEVEL (error|warn|info) controls stderr
// chatter.

#include "vfl/io.hpp"
#include "vfl/localize.hpp"
#include "vfl/testkit.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

namespace {

using vfl::io::json;

enum class LogLevel { error = 0, warn = 1, info = 2 };

LogLevel log_level() {
  const char *env = std::getenv("VFL_LOG_LEVEL");
  if (!env)
    return LogLevel::warn;
  const std::string v(env);
  if (v == "error")
    return LogLevel::error;
  if (v == "info" || v == "debug")
    return LogLevel::info;
  return LogLevel::warn;
}

void log(LogLevel level, const std::string &msg) {
  static const LogLevel current = log_level();
  if (level > current)
    return;
  static constexpr const char *names[] = {"error", "warning", "info"};
  std::cerr << "vfl: " << names[static_cast<int>(level)] << ": " << msg
            << '\n';
}

struct LocalizeArgs {
  std::string system, products, spectra, output;
  std::string technique = "varcop", metric = "op2", agg = "mean",
              norm = "minmax";
  double weight = 0.5;
  int k = vfl::default_k();
  bool include_forward = false;
};

struct EvalArgs {
  std::string ranked, truth, system, output;
};

struct GenArgs {
  vfl::testkit::GeneratorSpec spec;
  std::string output;
};

void print_ranking(const vfl::RankedList &list, std::ostream &out) {
  out << std::left << std::setw(6) << "rank" << std::setw(24) << "statement"
      << "score\n";
  for (const auto &e : list.entries)
    out << std::left << std::setw(6) << e.rank << std::setw(24)
        << e.statement.str() << std::setprecision(12) << e.score << '\n';
}

int run_localize(const LocalizeArgs &a) {
  vfl::LocalizeOptions opts;
  opts.technique = vfl::parse_technique(a.technique);
  opts.ranking.metric = vfl::parse_metric(a.metric);
  opts.ranking.weight = a.weight;
  opts.ranking.aggregation = vfl::parse_aggregation(a.agg);
  opts.ranking.normalization = vfl::parse_normalization(a.norm);
  opts.ranking.validate();
  opts.max_interaction = a.k;
  opts.include_forward = a.include_forward;
  if (a.k < 1)
    throw vfl::ValidationError("-K must be at least 1");

  const auto system = vfl::io::parse_system(vfl::io::read_json_file(a.system));
  const auto products =
      vfl::io::parse_products(system, vfl::io::read_json_file(a.products));
  const auto spectra = vfl::io::parse_spectra(
      system, products, vfl::io::read_json_file(a.spectra));
  log(LogLevel::info, "loaded " + std::to_string(products.size()) +
                          " products, " +
                          std::to_string(system.statements().size()) +
                          " statements");

  const auto result = vfl::localize(system, spectra, opts);
  for (const auto &w : result.warnings)
    log(LogLevel::warn, w);

  auto manifest = vfl::io::RunManifest::from_options(opts);
  manifest.inputs = {
      {"system", a.system}, {"products", a.products}, {"spectra", a.spectra}};
  const auto doc = vfl::io::ranked_to_json(manifest, result);
  if (a.output.empty()) {
    std::cout << doc.dump(2) << '\n';
  } else {
    vfl::io::write_json_file(a.output, doc);
    if (!result.features.empty()) {
      std::cout << "feature ranking:\n";
      for (const auto &f : result.features)
        std::cout << "  " << f.rank << "  " << f.feature.str() << "  "
                  << std::setprecision(12) << f.score << '\n';
    }
    print_ranking(result.ranking, std::cout);
  }
  return 0;
}

int run_eval(const EvalArgs &a) {
  const auto ranked_doc = vfl::io::read_json_file(a.ranked);
  const auto ranked = vfl::io::parse_ranked(ranked_doc);
  std::optional<vfl::SplSystem> system;
  if (!a.system.empty())
    system = vfl::io::parse_system(vfl::io::read_json_file(a.system));
  const auto truth = vfl::io::parse_truth(vfl::io::read_json_file(a.truth),
                                          system ? &*system : nullptr);
  const auto report = vfl::evaluate(ranked, truth);
  if (report.exam.unranked)
    log(LogLevel::warn, "no buggy statement appears in the ranked list; "
                        "EXAM reported as 100% (unranked)");

  const auto manifest =
      ranked_doc.contains("manifest") ? ranked_doc["manifest"] : json::object();
  const auto doc = vfl::io::report_to_json(report, manifest);
  if (!a.output.empty())
    vfl::io::write_json_file(a.output, doc);

  std::cout << "list size  " << report.list_size << '\n';
  for (const auto &[s, r] : report.rank.ranks)
    std::cout << "rank       " << s.str() << "  "
              << (r ? std::to_string(*r) : std::string("unranked")) << '\n';
  std::cout << "best rank  "
            << (report.rank.best_rank ? std::to_string(*report.rank.best_rank)
                                      : std::string("unranked"))
            << '\n';
  std::cout << "EXAM       " << std::setprecision(6) << report.exam.percent
            << "%" << (report.exam.unranked ? " (unranked)" : "") << '\n';
  for (const auto &[x, hit] : report.hit_at)
    std::cout << "Hit@" << x << "      " << (hit ? "true" : "false") << '\n';
  return 0;
}

int run_gen(const GenArgs &a) {
  const auto generated = vfl::testkit::generate_system(a.spec);
  const std::filesystem::path dir(a.output);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw vfl::ValidationError("cannot create '" + dir.string() +
                               "': " + ec.message());
  std::vector<vfl::Product> products;
  for (const auto &ps : generated.spectra)
    products.push_back(ps.product);
  vfl::io::write_json_file(dir / "system.json",
                           vfl::io::system_to_json(generated.system));
  vfl::io::write_json_file(dir / "products.json",
                           vfl::io::products_to_json(products));
  vfl::io::write_json_file(dir / "spectra.json",
                           vfl::io::spectra_to_json(generated.spectra));
  vfl::io::write_json_file(dir / "truth.json",
                           vfl::io::truth_to_json(generated.truth));
  json bpc = json::object();
  for (const auto &sel : generated.buggy_pc)
    bpc[sel.feature.str()] = sel.enabled;
  const json manifest = {{"version", vfl::io::kToolVersion},
                         {"seed", a.spec.seed},
                         {"features", a.spec.n_features},
                         {"statements", a.spec.n_statements},
                         {"products", a.spec.n_products},
                         {"tests_per_product", a.spec.tests_per_product},
                         {"edge_density", a.spec.edge_density},
                         {"buggy_pc", bpc}};
  vfl::io::write_json_file(dir / "manifest.json", manifest);
  std::cout << "wrote case with seed " << a.spec.seed << " to " << dir.string()
            << '\n';
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Variability fault localization for software product lines"};
  app.require_subcommand(1);

  LocalizeArgs la;
  auto *loc = app.add_subcommand("localize", "Rank suspicious statements");
  loc->add_option("--system", la.system, "System description file")
      ->required();
  loc->add_option("--products", la.products, "Sampled products file")
      ->required();
  loc->add_option("--spectra", la.spectra, "Test spectra file")->required();
  loc->add_option("--technique", la.technique, "varcop|sbfl|ssbfl|fb");
  loc->add_option("--metric", la.metric, "SBFL metric name");
  loc->add_option("--weight", la.weight, "Combination weight in [0, 1]");
  loc->add_option("--agg", la.agg, "mean|geometric|max|min|median");
  loc->add_option("--norm", la.norm, "minmax|none");
  loc->add_option("-K,--max-interaction", la.k, "Largest interaction size");
  loc->add_flag("--include-forward", la.include_forward,
                "Also isolate statements impacted by the interaction");
  loc->add_option("--output", la.output, "Ranked output file");

  EvalArgs ea;
  auto *ev = app.add_subcommand("eval", "Score a ranked list against bugs");
  ev->add_option("--ranked", ea.ranked, "Ranked output file")->required();
  ev->add_option("--truth", ea.truth, "Ground truth file")->required();
  ev->add_option("--system", ea.system, "System file to validate ids");
  ev->add_option("--output", ea.output, "Report file");

  GenArgs ga;
  auto *gen = app.add_subcommand("gen", "Generate a synthetic buggy case");
  gen->add_option("--seed", ga.spec.seed, "RNG seed");
  gen->add_option("--features", ga.spec.n_features, "Feature count");
  gen->add_option("--statements", ga.spec.n_statements, "Statement count");
  gen->add_option("--products", ga.spec.n_products, "Sampled product count");
  gen->add_option("--tests", ga.spec.tests_per_product, "Tests per product");
  gen->add_option("--density", ga.spec.edge_density, "Dependency density");
  gen->add_option("--bug-size", ga.spec.max_buggy_pc_size,
                  "Largest seeded buggy PC");
  gen->add_option("--output", ga.output, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*loc)
      return run_localize(la);
    if (*ev)
      return run_eval(ea);
    if (*gen)
      return run_gen(ga);
  } catch (const vfl::ValidationError &e) {
    log(LogLevel::error, e.what());
    return 2;
  } catch (const vfl::PreconditionError &e) {
    log(LogLevel::error, e.what());
    return 3;
  } catch (const std::exception &e) {
    log(LogLevel::error, e.what());
    return 1;
  }
  return 1;
}
