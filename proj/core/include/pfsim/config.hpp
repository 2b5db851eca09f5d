#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pfsim/lattice.hpp"

namespace pfsim {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class SamplerAlgorithm { heat_bath, swendsen_wang, hb_sw, soft_floor_rejection, soft_floor_restricted };

std::string to_string(SamplerAlgorithm a);
SamplerAlgorithm parse_algorithm(const std::string& s);

struct SamplerConfig {
  SamplerAlgorithm algorithm = SamplerAlgorithm::hb_sw;
  int burnin = -1;    // -1: 200 tau from a pilot run
  int interval = -1;  // -1: 2 tau
  std::int64_t n_samples = 100;
  std::uint64_t seed = 1;
  int chains = 1;
  int workers = 1;
  bool save_edges = false;
  std::int64_t budget = 1'000'000;  // soft-floor rejection attempts
};

struct AnalysisConfig {
  bool heights = true;
  bool ordering = false;  // per-sample verify_ordering column
  bool walls = false;
  bool rates = false;
  int level_h = 1;
  int h_max = 3;
  std::vector<std::string> oracle;  // suites run by `oracle` when none is named
};

struct Thresholds {
  double c = 4.0;     // Peierls constant in the xi and Xi bounds
  double eps = 0.25;  // window of the height statistic
};

// One JSON document describes a run; unknown keys are rejected.
struct ExperimentConfig {
  ModelParams model{2, 1.0};
  DomainKind kind = DomainKind::floor_box;
  int n = 8, m = 8;
  BoundaryCondition bc = BoundaryCondition::floor();
  SamplerConfig sampler;
  AnalysisConfig analysis;
  Thresholds thresholds;
  nlohmann::json reproduce = nlohmann::json::object();  // per-experiment overrides
  std::filesystem::path out_dir = "out";

  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::filesystem::path& path);
  // Throws ConfigError naming the offending field.
  void validate() const;
};

}  // namespace pfsim
