// One line per acceptance criterion.  Exit status 1 when any fails.
#include <algorithm>
#include <chrono>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pfsim/experiments.hpp"

using namespace pfsim;

namespace {

struct Criterion {
  int id;
  const char* kind;  // "oracle" or "reproduce"
  const char* name;
  double budget_s;
};

const std::vector<Criterion> kCriteria = {
    {1, "oracle", "coupling", 60},
    {2, "oracle", "sampler", 300},
    {3, "oracle", "free-energy", 120},
    {4, "oracle", "monotonicity", 120},
    {5, "oracle", "fkg", 120},
    {6, "oracle", "xi-ratio", 600},
    {7, "reproduce", "interface-ordering", 600},
    {8, "reproduce", "dobrushin-tails", 1800},
    {9, "reproduce", "full-area", 600},
    {10, "reproduce", "rate-table", 3600},
    {11, "reproduce", "main-theorem-height", 14400},
    {12, "reproduce", "cylinder-insensitivity", 1200},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string config, out = "acceptance_out";
  std::vector<int> only;
  app.add_option("--config", config, "JSON config with per-experiment knobs")->check(CLI::ExistingFile);
  app.add_option("--out", out, "output directory");
  app.add_option("--only", only, "run only these criteria");
  CLI11_PARSE(app, argc, argv);

  ExperimentConfig cfg = config.empty() ? ExperimentConfig{} : ExperimentConfig::load(config);
  cfg.out_dir = out;
  cfg.validate();

  int failed = 0;
  for (const auto& c : kCriteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
      if (std::string(c.kind) == "oracle") {
        auto r = run_oracle_suite(c.name, cfg, nullptr);
        pass = r.pass();
        detail = std::to_string(r.checks.size()) + " checks, " + std::to_string(r.failures()) + " failed";
        for (const auto& k : r.checks)
          if (!k.pass) {
            detail += "; first failure " + k.name + ": " + std::to_string(k.lhs) + " " + k.relation + " " +
                      std::to_string(k.rhs);
            break;
          }
      } else {
        auto v = cmd_reproduce(c.name, cfg, nullptr);
        pass = v.pass;
        detail = v.summary;
      }
    } catch (const std::exception& e) {
      detail = std::string("error: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_s;
    if (!in_time) detail += "; over the " + std::to_string(int(c.budget_s)) + " s budget";
    pass = pass && in_time;
    failed += !pass;
    std::cout << "criterion " << c.id << " (" << c.name << "): " << (pass ? "PASS" : "FAIL") << " [" << int(secs + 0.5)
              << " s] " << detail << std::endl;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << std::endl;
  return failed ? 1 : 0;
}
