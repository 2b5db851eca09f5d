#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pfsim/config.hpp"
#include "pfsim/sampling.hpp"

namespace pfsim {

// Bad command line or inconsistent inputs (exit status 2).
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Burn-in and interval from the config, or from a pilot run's integrated
// autocorrelation time of the energy when set to -1.
struct ResolvedSchedule {
  ChainSchedule schedule;
  double tau = 0.0;  // 0 when no pilot was run
};
ResolvedSchedule resolve_schedule(const SamplerConfig& s, const ModelParams& params, const LatticePtr& lattice,
                                  std::ostream* log = nullptr);

struct SampleResult {
  std::vector<std::filesystem::path> files;
  nlohmann::json manifest;
};
// Writes <out>/snapshots/*.pfs and <out>/manifest.json.
SampleResult cmd_sample(const ExperimentConfig& cfg, std::ostream* log = nullptr);

// Directories expand to their *.pfs files; names with * or ? are matched
// against the files of their parent directory.  Sorted by path.
std::vector<std::filesystem::path> expand_snapshot_inputs(const std::vector<std::string>& inputs);

struct AnalyzeResult {
  int n_snapshots = 0;
  std::vector<std::filesystem::path> files;
  nlohmann::json summary;
};
// CSV reports under cfg.out_dir.  Throws UsageError on mixed setups.
AnalyzeResult cmd_analyze(const std::vector<std::filesystem::path>& snapshots, const ExperimentConfig& cfg,
                          std::ostream* log = nullptr);

struct CheckRecord {
  std::string name;
  nlohmann::json inputs;
  double lhs = 0.0;
  std::string relation;  // how lhs is compared with rhs
  double rhs = 0.0;
  bool pass = false;
  std::string note;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckRecord> checks;
  double seconds = 0.0;
  bool pass() const;
  int failures() const;
  nlohmann::json to_json() const;
};

std::vector<std::string> oracle_suite_names();
// Throws UsageError for unknown names.  Suite knobs come from
// cfg.reproduce["oracle"].
SuiteReport run_oracle_suite(const std::string& name, const ExperimentConfig& cfg, std::ostream* log = nullptr);

struct Verdict {
  std::string id;
  bool pass = false;
  std::string summary;
  nlohmann::json detail;
  std::vector<std::filesystem::path> files;
  double seconds = 0.0;
};

std::vector<std::string> reproduce_ids();
// Runs the named pipeline; CSVs go to cfg.out_dir/<id>/.  Per-experiment
// knobs come from cfg.reproduce[<id>].
Verdict cmd_reproduce(const std::string& id, const ExperimentConfig& cfg, std::ostream* log = nullptr);

}  // namespace pfsim
