#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "pfsim/experiments.hpp"
#include "pfsim/snapshot.hpp"

using namespace pfsim;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pfsim: Potts / random-cluster interfaces above hard and soft floors"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  int workers = 0;
  bool quiet = false;
  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "override sampler.seed");
  app.add_option("--workers", workers, "override sampler.workers")->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "override output.dir");
  app.add_flag("--quiet", quiet, "no progress output");

  auto* sample = app.add_subcommand("sample", "run the configured sampler and write snapshots");

  auto* analyze = app.add_subcommand("analyze", "CSV reports from snapshots");
  std::vector<std::string> inputs;
  std::string analyses;
  analyze->add_option("inputs", inputs, "snapshot files, directories or globs")->required();
  analyze->add_option("--analyses", analyses, "comma list of heights, ordering, walls, rates (default: config)");

  auto* oracle = app.add_subcommand("oracle", "exact checks on tiny boxes");
  std::string suite = "all";
  oracle->add_option("suite", suite, "coupling, sampler, free-energy, monotonicity, fkg, xi-ratio, all");

  auto* reproduce = app.add_subcommand("reproduce", "run one experiment pipeline end to end");
  std::string id;
  reproduce->add_option("id", id, "experiment id")->required();

  auto* info = app.add_subcommand("info", "print suites, experiments and the effective config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }

  std::ostream* log = quiet ? nullptr : &std::cerr;
  try {
    ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : ExperimentConfig::load(config_path);
    if (*seed_opt) cfg.sampler.seed = seed;
    if (workers > 0) cfg.sampler.workers = workers;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    cfg.validate();

    if (*sample) {
      auto r = cmd_sample(cfg, log);
      std::cout << r.files.size() << " snapshots, manifest " << (cfg.out_dir / "manifest.json").string() << "\n";
      return kPass;
    }
    if (*analyze) {
      if (!analyses.empty()) {
        cfg.analysis.heights = cfg.analysis.ordering = cfg.analysis.walls = cfg.analysis.rates = false;
        std::stringstream ss(analyses);
        std::string a;
        while (std::getline(ss, a, ',')) {
          if (a == "heights") cfg.analysis.heights = true;
          else if (a == "ordering") cfg.analysis.ordering = true;
          else if (a == "walls") cfg.analysis.walls = true;
          else if (a == "rates") cfg.analysis.rates = true;
          else throw UsageError("unknown analysis '" + a + "' (heights, ordering, walls, rates)");
        }
      }
      auto r = cmd_analyze(expand_snapshot_inputs(inputs), cfg, log);
      for (const auto& f : r.files) std::cout << f.string() << "\n";
      return kPass;
    }
    if (*oracle) {
      auto r = run_oracle_suite(suite, cfg, log);
      std::filesystem::create_directories(cfg.out_dir);
      const auto path = cfg.out_dir / ("oracle_" + suite + ".json");
      std::ofstream(path) << r.to_json().dump(2) << "\n";
      std::cout << (r.pass() ? "PASS" : "FAIL") << " oracle " << suite << ": " << r.checks.size() << " checks, "
                << r.failures() << " failures (" << path.string() << ")\n";
      return r.pass() ? kPass : kFail;
    }
    if (*reproduce) {
      auto v = cmd_reproduce(id, cfg, log);
      std::cout << (v.pass ? "PASS" : "FAIL") << " " << id << ": " << v.summary << "\n";
      return v.pass ? kPass : kFail;
    }
    if (*info) {
      std::cout << "snapshot format " << Snapshot::kTag << " v" << Snapshot::kVersion << "\n";
      std::cout << "oracle suites:";
      for (const auto& s : oracle_suite_names()) std::cout << " " << s;
      std::cout << "\nexperiments:";
      for (const auto& s : reproduce_ids()) std::cout << " " << s;
      std::cout << "\neffective config:\n" << cfg.to_json().dump(2) << "\n";
      return kPass;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}
