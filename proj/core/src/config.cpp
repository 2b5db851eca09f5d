#include "pfsim/config.hpp"

#include <fstream>
#include <set>

namespace pfsim {

using nlohmann::json;

std::string to_string(SamplerAlgorithm a) {
  switch (a) {
    case SamplerAlgorithm::heat_bath: return "heat-bath";
    case SamplerAlgorithm::swendsen_wang: return "swendsen-wang";
    case SamplerAlgorithm::hb_sw: return "hb+sw";
    case SamplerAlgorithm::soft_floor_rejection: return "soft-floor-rejection";
    case SamplerAlgorithm::soft_floor_restricted: return "soft-floor-restricted";
  }
  return "?";
}

SamplerAlgorithm parse_algorithm(const std::string& s) {
  for (auto a : {SamplerAlgorithm::heat_bath, SamplerAlgorithm::swendsen_wang, SamplerAlgorithm::hb_sw,
                 SamplerAlgorithm::soft_floor_rejection, SamplerAlgorithm::soft_floor_restricted})
    if (to_string(a) == s) return a;
  throw ConfigError("sampler.algorithm: unknown value '" + s +
                    "' (expected heat-bath, swendsen-wang, hb+sw, soft-floor-rejection, soft-floor-restricted)");
}

namespace {

void check_keys(const json& j, const std::string& where, std::set<std::string> allowed) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      throw ConfigError(where + "." + k + ": unknown key (allowed: " + list + ")");
    }
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

std::string kind_name(DomainKind k) { return k == DomainKind::floor_box ? "floor" : "slab"; }

std::string bc_name(BoundaryCondition::Kind k) {
  switch (k) {
    case BoundaryCondition::Kind::floor: return "floor";
    case BoundaryCondition::Kind::split: return "split";
    case BoundaryCondition::Kind::red_all: return "red_all";
  }
  return "?";
}

}  // namespace

json ExperimentConfig::to_json() const {
  json j;
  j["model"] = {{"q", model.q}, {"beta", model.beta}};
  j["domain"] = {{"kind", kind_name(kind)}, {"n", n}, {"m", m}};
  j["bc"] = {{"kind", bc_name(bc.kind)}, {"h", bc.h}};
  j["sampler"] = {{"algorithm", to_string(sampler.algorithm)},
                  {"burnin", sampler.burnin},
                  {"interval", sampler.interval},
                  {"n_samples", sampler.n_samples},
                  {"seed", sampler.seed},
                  {"chains", sampler.chains},
                  {"workers", sampler.workers},
                  {"save_edges", sampler.save_edges},
                  {"budget", sampler.budget}};
  j["analysis"] = {{"heights", analysis.heights}, {"ordering", analysis.ordering}, {"walls", analysis.walls},
                   {"rates", analysis.rates},     {"level_h", analysis.level_h},   {"h_max", analysis.h_max},
                   {"oracle", analysis.oracle}};
  j["thresholds"] = {{"C", thresholds.c}, {"eps", thresholds.eps}};
  j["reproduce"] = reproduce;
  j["output"] = {{"dir", out_dir.string()}};
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig c;
  check_keys(j, "config", {"model", "domain", "bc", "sampler", "analysis", "thresholds", "reproduce", "output"});
  if (j.contains("model")) {
    const auto& x = j["model"];
    check_keys(x, "model", {"q", "beta"});
    read(x, "q", c.model.q, "model");
    read(x, "beta", c.model.beta, "model");
  }
  if (j.contains("domain")) {
    const auto& x = j["domain"];
    check_keys(x, "domain", {"kind", "n", "m"});
    std::string k = kind_name(c.kind);
    read(x, "kind", k, "domain");
    if (k == "floor") c.kind = DomainKind::floor_box;
    else if (k == "slab") c.kind = DomainKind::slab_box;
    else throw ConfigError("domain.kind: unknown value '" + k + "' (expected floor or slab)");
    read(x, "n", c.n, "domain");
    read(x, "m", c.m, "domain");
  }
  if (j.contains("bc")) {
    const auto& x = j["bc"];
    check_keys(x, "bc", {"kind", "h"});
    std::string k = bc_name(c.bc.kind);
    read(x, "kind", k, "bc");
    int h = 0;
    read(x, "h", h, "bc");
    if (k == "floor") c.bc = BoundaryCondition::floor();
    else if (k == "split") c.bc = BoundaryCondition::split(h);
    else if (k == "red_all") c.bc = BoundaryCondition::red_all();
    else throw ConfigError("bc.kind: unknown value '" + k + "' (expected floor, split or red_all)");
  }
  if (j.contains("sampler")) {
    const auto& x = j["sampler"];
    check_keys(x, "sampler",
               {"algorithm", "burnin", "interval", "n_samples", "seed", "chains", "workers", "save_edges", "budget"});
    std::string a = to_string(c.sampler.algorithm);
    read(x, "algorithm", a, "sampler");
    c.sampler.algorithm = parse_algorithm(a);
    read(x, "burnin", c.sampler.burnin, "sampler");
    read(x, "interval", c.sampler.interval, "sampler");
    read(x, "n_samples", c.sampler.n_samples, "sampler");
    read(x, "seed", c.sampler.seed, "sampler");
    read(x, "chains", c.sampler.chains, "sampler");
    read(x, "workers", c.sampler.workers, "sampler");
    read(x, "save_edges", c.sampler.save_edges, "sampler");
    read(x, "budget", c.sampler.budget, "sampler");
  }
  if (j.contains("analysis")) {
    const auto& x = j["analysis"];
    check_keys(x, "analysis", {"heights", "ordering", "walls", "rates", "level_h", "h_max", "oracle"});
    read(x, "heights", c.analysis.heights, "analysis");
    read(x, "ordering", c.analysis.ordering, "analysis");
    read(x, "walls", c.analysis.walls, "analysis");
    read(x, "rates", c.analysis.rates, "analysis");
    read(x, "level_h", c.analysis.level_h, "analysis");
    read(x, "h_max", c.analysis.h_max, "analysis");
    read(x, "oracle", c.analysis.oracle, "analysis");
  }
  if (j.contains("thresholds")) {
    const auto& x = j["thresholds"];
    check_keys(x, "thresholds", {"C", "eps"});
    read(x, "C", c.thresholds.c, "thresholds");
    read(x, "eps", c.thresholds.eps, "thresholds");
  }
  if (j.contains("reproduce")) {
    if (!j["reproduce"].is_object()) throw ConfigError("reproduce: expected an object");
    c.reproduce = j["reproduce"];
  }
  if (j.contains("output")) {
    const auto& x = j["output"];
    check_keys(x, "output", {"dir"});
    std::string d = c.out_dir.string();
    read(x, "dir", d, "output");
    c.out_dir = d;
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(f);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return from_json(j);
}

void ExperimentConfig::validate() const {
  if (model.q < 2 || model.q > 255) throw ConfigError("model.q: must be in [2, 255]");
  if (!(model.beta >= 0.0)) throw ConfigError("model.beta: must be nonnegative");
  if (n < 1) throw ConfigError("domain.n: must be positive");
  if (m < 1) throw ConfigError("domain.m: must be positive");
  if (bc.kind == BoundaryCondition::Kind::split && kind != DomainKind::slab_box)
    throw ConfigError("bc.kind: split needs domain.kind = slab");
  if (bc.kind == BoundaryCondition::Kind::split && (bc.h < -m || bc.h > m))
    throw ConfigError("bc.h: must lie in [-m, m]");
  if (sampler.n_samples < 0) throw ConfigError("sampler.n_samples: must be nonnegative");
  if (sampler.chains < 1) throw ConfigError("sampler.chains: must be at least 1");
  if (sampler.workers < 1) throw ConfigError("sampler.workers: must be at least 1");
  if (sampler.burnin < -1) throw ConfigError("sampler.burnin: use -1 for automatic or a nonnegative count");
  if (sampler.interval < -1 || sampler.interval == 0)
    throw ConfigError("sampler.interval: use -1 for automatic or a positive count");
  const bool soft = sampler.algorithm == SamplerAlgorithm::soft_floor_rejection ||
                    sampler.algorithm == SamplerAlgorithm::soft_floor_restricted;
  if (soft && (kind != DomainKind::slab_box || bc.kind != BoundaryCondition::Kind::split))
    throw ConfigError("sampler.algorithm: soft-floor sampling needs a slab with split bc");
  if (analysis.h_max < 0) throw ConfigError("analysis.h_max: must be nonnegative");
  if (analysis.level_h < 0) throw ConfigError("analysis.level_h: must be nonnegative");
  if (thresholds.eps < 0.0 || thresholds.eps > 1.0) throw ConfigError("thresholds.eps: must be in [0, 1]");
}

}  // namespace pfsim
