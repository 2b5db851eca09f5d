#include "pfsim/experiments.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>

#include "pfsim/fuzzy.hpp"
#include "pfsim/interfaces.hpp"
#include "pfsim/oracle.hpp"
#include "pfsim/rates.hpp"
#include "pfsim/snapshot.hpp"
#include "pfsim/walls.hpp"

namespace pfsim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) { return Rng(seed).split(tag).next(); }

class Csv {
 public:
  Csv(const fs::path& path, const std::vector<std::string>& header) : f_(path) {
    if (!f_) throw std::runtime_error("cannot write " + path.string());
    f_ << std::setprecision(12);
    for (std::size_t i = 0; i < header.size(); ++i) f_ << (i ? "," : "") << header[i];
    f_ << "\n";
  }
  template <class... T>
  void row(const T&... v) {
    int i = 0;
    ((f_ << (i++ ? "," : "") << v), ...);
    f_ << "\n";
  }

 private:
  std::ofstream f_;
};

// Reads a knob from an experiment's override object and records the value
// actually used.
class Knobs {
 public:
  Knobs(const ExperimentConfig& cfg, const std::string& id)
      : src_(cfg.reproduce.contains(id) ? cfg.reproduce.at(id) : json::object()) {
    if (!src_.is_object()) throw ConfigError("reproduce." + id + ": expected an object");
  }
  template <class T>
  T get(const char* key, T def) {
    T v = def;
    if (src_.contains(key)) {
      try {
        v = src_.at(key).get<T>();
      } catch (const json::exception& e) {
        throw ConfigError(std::string("reproduce knob ") + key + ": " + e.what());
      }
    }
    used_[key] = v;
    return v;
  }
  const json& used() const { return used_; }

 private:
  json src_;
  json used_ = json::object();
};

std::string fmt(double x, int prec = 4) {
  std::ostringstream s;
  s << std::setprecision(prec) << x;
  return s.str();
}

void say(std::ostream* log, const std::string& msg) {
  if (log) *log << msg << "\n" << std::flush;
}

std::vector<int> bulk_columns(const Domain& d) {
  const int ml = d.n() / 4;
  std::vector<int> cols;
  for (int j = d.i0() + ml; j < d.i0() + d.n() - ml; ++j)
    for (int i = d.i0() + ml; i < d.i0() + d.n() - ml; ++i) cols.push_back(d.column_index(i, j));
  return cols;
}

ChainSchedule schedule_from(const ExperimentConfig& cfg, int burnin, int interval, int chains, std::ostream* log) {
  ChainSchedule s;
  s.burnin = burnin;
  s.interval = interval;
  s.n_chains = chains;
  s.workers = cfg.sampler.workers;
  s.log = log;
  return s;
}

// -1 knobs are resolved with a pilot run on the given lattice.
ChainSchedule experiment_schedule(const ExperimentConfig& cfg, Knobs& k, const ModelParams& params,
                                  const LatticePtr& lat, std::ostream* log, int def_burnin, int def_interval,
                                  int def_chains) {
  SamplerConfig sc = cfg.sampler;
  sc.burnin = k.get("burnin", def_burnin);
  sc.interval = k.get("interval", def_interval);
  sc.algorithm = SamplerAlgorithm::hb_sw;
  ResolvedSchedule r = resolve_schedule(sc, params, lat, nullptr);
  ChainSchedule s = schedule_from(cfg, r.schedule.burnin, r.schedule.interval, k.get("chains", def_chains), log);
  return s;
}

}  // namespace

ResolvedSchedule resolve_schedule(const SamplerConfig& s, const ModelParams& params, const LatticePtr& lattice,
                                  std::ostream* log) {
  ResolvedSchedule out;
  out.schedule.n_chains = s.chains;
  out.schedule.workers = s.workers;
  out.schedule.heat_bath = s.algorithm != SamplerAlgorithm::swendsen_wang;
  out.schedule.swendsen_wang = s.algorithm != SamplerAlgorithm::heat_bath;
  out.schedule.log = log;
  out.schedule.burnin = s.burnin;
  out.schedule.interval = s.interval;
  if (s.burnin >= 0 && s.interval > 0) return out;
  ChainState st(SpinConfig::ground_state(lattice), derive_seed(s.seed, 0x9e3779b9ULL));
  for (int t = 0; t < 100; ++t) chain_step(st, params, out.schedule.heat_bath, out.schedule.swendsen_wang);
  std::vector<double> e;
  for (int t = 0; t < 400; ++t) {
    chain_step(st, params, out.schedule.heat_bath, out.schedule.swendsen_wang);
    e.push_back(double(st.energy));
  }
  out.tau = std::max(0.5, integrated_autocorr_time(e));
  if (s.burnin < 0) out.schedule.burnin = static_cast<int>(std::ceil(200.0 * out.tau));
  if (s.interval < 0) out.schedule.interval = std::max(1, static_cast<int>(std::ceil(2.0 * out.tau)));
  say(log, "pilot: tau = " + fmt(out.tau) + ", burnin = " + std::to_string(out.schedule.burnin) +
               ", interval = " + std::to_string(out.schedule.interval));
  return out;
}

// ---------------------------------------------------------------- sample

SampleResult cmd_sample(const ExperimentConfig& cfg, std::ostream* log) {
  cfg.validate();
  const auto t0 = Clock::now();
  auto lat = Lattice::make(cfg.kind, cfg.n, cfg.m, cfg.bc);
  const ModelParams& params = cfg.model;
  const fs::path dir = cfg.out_dir / "snapshots";
  fs::create_directories(dir);
  ResolvedSchedule rs = resolve_schedule(cfg.sampler, params, lat, log);
  SampleResult res;
  json manifest;
  manifest["config"] = cfg.to_json();
  manifest["schedule"] = {{"burnin", rs.schedule.burnin}, {"interval", rs.schedule.interval}, {"tau", rs.tau}};
  const std::uint64_t seed = cfg.sampler.seed;
  const bool soft = cfg.sampler.algorithm == SamplerAlgorithm::soft_floor_rejection ||
                    cfg.sampler.algorithm == SamplerAlgorithm::soft_floor_restricted;
  auto file_name = [&](int chain, std::int64_t idx) {
    std::ostringstream s;
    s << "chain" << std::setw(3) << std::setfill('0') << chain << "_" << std::setw(6) << idx << ".pfs";
    return dir / s.str();
  };
  if (soft) {
    SoftFloorOptions opt;
    opt.burnin = rs.schedule.burnin;
    opt.interval = rs.schedule.interval;
    opt.budget = cfg.sampler.budget;
    Rng aux = Rng(seed).split(1);
    std::int64_t idx = 0;
    auto rep = sample_conditional_soft_floor(
        lat, params, cfg.sampler.n_samples, Rng(seed).split(0).next(),
        cfg.sampler.algorithm == SamplerAlgorithm::soft_floor_rejection ? SoftFloorMethod::rejection
                                                                        : SoftFloorMethod::restricted,
        opt, [&](const SpinConfig& sigma, std::uint64_t sweep) {
          std::optional<EdgeConfig> w;
          if (cfg.sampler.save_edges) w = couple_edges_from_spins(sigma, params, aux);
          auto path = file_name(0, idx++);
          Snapshot::capture(sigma, params, seed, sweep, w ? &*w : nullptr).write(path);
          res.files.push_back(path);
        });
    manifest["acceptance_rate"] = rep.acceptance_rate();
    manifest["attempts"] = rep.attempts;
    manifest["accepted"] = rep.accepted;
  } else {
    const int C = cfg.sampler.chains;
    const std::int64_t N = cfg.sampler.n_samples;
    const std::int64_t per = (N + C - 1) / C;
    std::vector<std::vector<fs::path>> written(C);
    auto quota = [&](int c) { return std::min<std::int64_t>(per, std::max<std::int64_t>(0, N - c * per)); };
    ChainSchedule sched = rs.schedule;
    auto summary = run_chains(
        params, [&](int) { return SpinConfig::ground_state(lat); }, per, seed, sched,
        [&](int c, std::int64_t s, const SpinConfig& sigma, Rng& aux) {
          if (s >= quota(c)) return;
          std::optional<EdgeConfig> w;
          if (cfg.sampler.save_edges) w = couple_edges_from_spins(sigma, params, aux);
          const std::uint64_t sweep_steps =
              std::uint64_t(sched.burnin) + std::uint64_t(s + 1) * std::uint64_t(std::max(1, sched.interval));
          auto path = file_name(c, s);
          Snapshot::capture(sigma, params, seed, sweep_steps, w ? &*w : nullptr).write(path);
          written[c].push_back(path);
        });
    for (auto& v : written) res.files.insert(res.files.end(), v.begin(), v.end());
    manifest["energy"] = {{"mean", summary.energy.mean},
                          {"stderr", summary.energy.stderr_},
                          {"tau", summary.energy.tau}};
  }
  manifest["n_snapshots"] = res.files.size();
  json names = json::array();
  for (const auto& f : res.files) names.push_back(f.filename().string());
  manifest["files"] = names;
  manifest["seconds"] = since(t0);
  std::ofstream(cfg.out_dir / "manifest.json") << manifest.dump(2) << "\n";
  res.manifest = manifest;
  say(log, "wrote " + std::to_string(res.files.size()) + " snapshots to " + dir.string());
  return res;
}

// ---------------------------------------------------------------- analyze

std::vector<fs::path> expand_snapshot_inputs(const std::vector<std::string>& inputs) {
  std::vector<fs::path> out;
  for (const auto& in : inputs) {
    fs::path p(in);
    if (fs::is_directory(p)) {
      for (const auto& e : fs::recursive_directory_iterator(p))
        if (e.is_regular_file() && e.path().extension() == ".pfs") out.push_back(e.path());
    } else if (in.find_first_of("*?[") != std::string::npos) {
      fs::path parent = p.parent_path().empty() ? fs::path(".") : p.parent_path();
      const std::string pat = p.filename().string();
      if (fs::is_directory(parent))
        for (const auto& e : fs::directory_iterator(parent))
          if (e.is_regular_file() && fnmatch(pat.c_str(), e.path().filename().c_str(), 0) == 0)
            out.push_back(e.path());
    } else {
      if (!fs::exists(p)) throw UsageError("no such snapshot: " + in);
      out.push_back(p);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

AnalyzeResult cmd_analyze(const std::vector<fs::path>& snapshots, const ExperimentConfig& cfg, std::ostream* log) {
  if (snapshots.empty()) throw UsageError("analyze: no snapshots given");
  std::vector<Snapshot> snaps;
  for (const auto& p : snapshots) snaps.push_back(Snapshot::read(p));
  for (const auto& s : snaps)
    if (!s.same_setup(snaps.front()))
      throw UsageError("analyze: snapshots mix different model, domain or boundary parameters");
  const AnalysisConfig& a = cfg.analysis;
  const ModelParams params = snaps.front().params();
  auto lat = snaps.front().make_lattice();
  const Domain& d = lat->domain();
  fs::create_directories(cfg.out_dir);
  AnalyzeResult res;
  res.n_snapshots = static_cast<int>(snaps.size());
  json summary;
  summary["n_snapshots"] = snaps.size();
  const Rng root(cfg.sampler.seed);
  auto edges_of = [&](std::size_t idx, const SpinConfig& sigma) {
    if (snaps[idx].edges) return snaps[idx].edge_config(lat);
    Rng r = root.split(idx);
    return couple_edges_from_spins(sigma, params, r);
  };
  Csv agg(cfg.out_dir / "summary.csv", {"statistic", "x", "y", "yerr"});
  res.files.push_back(cfg.out_dir / "summary.csv");

  if (a.heights) {
    Csv csv(cfg.out_dir / "heights.csv", {"sample_id", "column", "i", "j", "height"});
    res.files.push_back(cfg.out_dir / "heights.csv");
    std::vector<double> med, mean;
    for (std::size_t s = 0; s < snaps.size(); ++s) {
      SpinConfig sigma = snaps[s].spins(lat);
      auto I = extract_potts_interface(sigma, PottsSide::blue);
      auto h = I.heights(d);
      std::vector<double> col;
      for (int j = d.i0(); j < d.i0() + d.n(); ++j)
        for (int i = d.i0(); i < d.i0() + d.n(); ++i) {
          const int m2 = h.max2[h.col(i, j)];
          const double hv = m2 == kNoHeight ? 0.0 : m2 / 2.0;
          csv.row(s, d.column_index(i, j), i, j, hv);
          col.push_back(hv);
        }
      double sum = 0;
      for (double v : col) sum += v;
      mean.push_back(sum / col.size());
      med.push_back(median(col));
    }
    auto em = estimate(med), ea = estimate(mean);
    agg.row("median_column_height", std::log(double(d.n())), em.mean, em.stderr_);
    agg.row("mean_column_height", std::log(double(d.n())), ea.mean, ea.stderr_);
    summary["median_column_height"] = {em.mean, em.stderr_};
  }
  if (a.ordering) {
    Csv csv(cfg.out_dir / "ordering.csv", {"sample_id", "verify_ordering"});
    res.files.push_back(cfg.out_dir / "ordering.csv");
    int ok = 0;
    for (std::size_t s = 0; s < snaps.size(); ++s) {
      SpinConfig sigma = snaps[s].spins(lat);
      EdgeConfig w = edges_of(s, sigma);
      const bool v = verify_ordering(extract_fk_interface(w, FkSide::top), extract_potts_interface(sigma, PottsSide::red),
                                     extract_potts_interface(sigma, PottsSide::blue),
                                     extract_fk_interface(w, FkSide::bot));
      ok += v;
      csv.row(s, int(v));
    }
    agg.row("ordered_fraction", 0, double(ok) / snaps.size(), 0);
    summary["ordered_fraction"] = double(ok) / snaps.size();
  }
  if (a.walls) {
    Csv csv(cfg.out_dir / "walls.csv", {"sample_id", "full_size", "n_walls", "total_excess", "outermost_hull_area",
                                        "level_set_count_h", "excess_identity"});
    res.files.push_back(cfg.out_dir / "walls.csv");
    std::vector<WallSampleStats> stats;
    int identity_ok = 0;
    for (std::size_t s = 0; s < snaps.size(); ++s) {
      SpinConfig sigma = snaps[s].spins(lat);
      EdgeConfig w = edges_of(s, sigma);
      auto full = extract_full_interface(w);
      auto blue = extract_potts_interface(sigma, PottsSide::blue);
      auto st = wall_sample_stats(full, blue, d, a.level_h);
      const bool id = st.total_excess == st.full_size - d.num_columns();
      identity_ok += id;
      stats.push_back(st);
      csv.row(s, st.full_size, st.n_walls, st.total_excess, st.outermost_hull_area, st.level_set_count, int(id));
    }
    auto ws = wall_area_statistics(stats, d.n());
    const double x = std::log(double(d.n()));
    agg.row("full_area_ratio", x, ws.full_area_ratio.mean, ws.full_area_ratio.stderr_);
    agg.row("outermost_hull_fraction", x, ws.hull_fraction.mean, ws.hull_fraction.stderr_);
    agg.row("level_set_fraction", x, ws.level_set_fraction.mean, ws.level_set_fraction.stderr_);
    summary["full_area_ratio"] = {ws.full_area_ratio.mean, ws.full_area_ratio.stderr_};
    summary["excess_identity_fraction"] = double(identity_ok) / snaps.size();
  }
  if (a.rates) {
    if (lat->bc().kind != BoundaryCondition::Kind::red_all)
      throw UsageError("analyze: rate analysis needs snapshots with the red_all boundary condition");
    const auto sites = bulk_sites(d, a.h_max);
    std::vector<std::vector<double>> frac(a.h_max + 1);
    std::vector<std::int64_t> hits(a.h_max + 1, 0);
    for (std::size_t s = 0; s < snaps.size(); ++s) {
      auto f = connection_fractions(snaps[s].spins(lat), sites, a.h_max);
      for (int h = 0; h <= a.h_max; ++h) {
        frac[h].push_back(f[h]);
        hits[h] += std::llround(f[h] * sites.size());
      }
    }
    Csv csv(cfg.out_dir / "rates.csv", {"h", "p_hat", "stderr", "rate_hat", "rate_stderr", "hits"});
    res.files.push_back(cfg.out_dir / "rates.csv");
    for (int h = 0; h <= a.h_max; ++h) {
      auto rp = make_rate_point(h, estimate(frac[h]), hits[h]);
      csv.row(h, rp.p.mean, rp.p.stderr_, rp.rate, rp.rate_stderr, rp.hits);
      agg.row("rate", h, rp.rate, rp.rate_stderr);
    }
  }
  res.summary = summary;
  say(log, "analyzed " + std::to_string(snaps.size()) + " snapshots");
  return res;
}

// ---------------------------------------------------------------- oracle

bool SuiteReport::pass() const { return failures() == 0 && !checks.empty(); }

int SuiteReport::failures() const {
  int f = 0;
  for (const auto& c : checks) f += !c.pass;
  return f;
}

json SuiteReport::to_json() const {
  json j;
  j["suite"] = suite;
  j["pass"] = pass();
  j["failures"] = failures();
  j["seconds"] = seconds;
  json arr = json::array();
  for (const auto& c : checks) {
    json r = {{"name", c.name}, {"inputs", c.inputs}, {"relation", c.relation}, {"verdict", c.pass ? "pass" : "fail"}};
    // JSON has no NaN; skipped comparisons carry null.
    r["lhs"] = std::isfinite(c.lhs) ? json(c.lhs) : json(nullptr);
    r["rhs"] = std::isfinite(c.rhs) ? json(c.rhs) : json(nullptr);
    if (!c.note.empty()) r["note"] = c.note;
    arr.push_back(r);
  }
  j["checks"] = arr;
  return j;
}

std::vector<std::string> oracle_suite_names() {
  return {"coupling", "sampler", "free-energy", "monotonicity", "fkg", "xi-ratio", "all"};
}

namespace {

std::string box_name(const Lattice& lat) { return lat.domain().describe() + " " + lat.bc().str(); }

void suite_coupling(SuiteReport& r, Knobs&, std::ostream* log) {
  for (int m : {1, 2})
    for (int q : {2, 3})
      for (double beta : {0.7, 1.2}) {
        auto lat = Lattice::make(DomainKind::floor_box, 2, m, BoundaryCondition::floor());
        auto c = coupling_check(lat, ModelParams(q, beta));
        json in = {{"box", c.box}, {"q", q}, {"beta", beta}};
        r.checks.push_back({"coupling_tv", in, c.tv, "<", 1e-10, c.tv < 1e-10, ""});
        r.checks.push_back({"potts_fk_partition_identity", in, c.z_identity_gap, "<", 1e-9, c.z_identity_gap < 1e-9,
                            "|log Z_potts - (|E| log(1-p) + log Z_fk - classes log q)|"});
        say(log, "  coupling " + c.box + " q=" + std::to_string(q) + " beta=" + fmt(beta) + ": tv=" + fmt(c.tv));
      }
}

struct MarginalRun {
  McEstimate est;
};

// Single chain; indicator of sigma_site == color per sweep.
McEstimate chain_marginal(const LatticePtr& lat, const ModelParams& params, bool hb, bool sw, int site, Color color,
                          std::int64_t samples, int burnin, std::uint64_t seed) {
  ChainState st(SpinConfig::ground_state(lat), seed);
  for (int b = 0; b < burnin; ++b) chain_step(st, params, hb, sw);
  std::vector<double> x;
  x.reserve(samples);
  for (std::int64_t s = 0; s < samples; ++s) {
    chain_step(st, params, hb, sw);
    x.push_back(st.sigma[site] == color ? 1.0 : 0.0);
  }
  return estimate(x);
}

void suite_sampler(SuiteReport& r, Knobs& k, std::uint64_t seed, std::ostream* log) {
  const auto samples = k.get<std::int64_t>("samples", 100000);
  const int burnin = k.get("burnin", 1000);
  std::uint64_t tag = 0;
  auto run = [&](const LatticePtr& lat, const ModelParams& params, const std::string& sampler, bool hb, bool sw) {
    ExactPotts ex = ExactPotts::enumerate(lat, params);
    const int o = lat->domain().vertex_id(0, 0, 0);
    const double exact = ex.site_marginal(o)[kBlue - 1];
    auto est = chain_marginal(lat, params, hb, sw, o, kBlue, samples, burnin, derive_seed(seed, ++tag));
    const double z = std::abs(est.mean - exact);
    json in = {{"box", box_name(*lat)}, {"q", params.q}, {"beta", params.beta}, {"sampler", sampler},
               {"samples", samples}, {"observable", "P(sigma_o = blue)"}, {"estimate", est.mean},
               {"stderr", est.stderr_}, {"exact", exact}};
    r.checks.push_back({"marginal_" + sampler, in, z, "<=", 3.0 * est.stderr_, z <= 3.0 * est.stderr_,
                        "|estimate - exact| against 3 stderr"});
    say(log, "  " + sampler + " " + box_name(*lat) + " q=" + std::to_string(params.q) + " beta=" + fmt(params.beta) +
                 ": " + fmt(est.mean, 6) + " +- " + fmt(est.stderr_, 2) + " exact " + fmt(exact, 6));
  };
  for (int m : {1, 2})
    for (int q : {2, 3})
      for (double beta : {0.7, 1.2}) {
        auto lat = Lattice::make(DomainKind::floor_box, 2, m, BoundaryCondition::floor());
        run(lat, ModelParams(q, beta), "heat-bath", true, false);
        run(lat, ModelParams(q, beta), "swendsen-wang", false, true);
      }
  auto slab = Lattice::make(DomainKind::slab_box, 2, 1, BoundaryCondition::dobrushin());
  run(slab, ModelParams(3, 1.2), "hb+sw", true, true);
}

void suite_free_energy(SuiteReport& r, Knobs&, std::ostream* log) {
  const std::vector<std::pair<double, double>> ranges = {{0.2, 0.8}, {0.01, 0.99}, {1e-6, 1.0 - 1e-6}};
  auto add = [&](const TildeGraph& t, int q, const std::string& name, json in) {
    for (auto [a, b] : ranges) {
      auto rep = free_energy_identity_check(t.g, t.tilde, q, a, b, name);
      json i = in;
      i["q"] = q;
      i["theta0"] = a;
      i["theta1"] = b;
      i["edges"] = t.g.num_edges();
      r.checks.push_back({name, i, rep.gap, "<", 1e-6, rep.gap < 1e-6, "|log Z(theta1) - log Z(theta0) - integral|"});
    }
    say(log, "  free-energy " + name + " q=" + std::to_string(q) + " done");
  };
  add(single_edge_graph(), 2, "single_edge", json::object());
  for (int q : {2, 3})
    for (double beta : {0.7, 1.2}) {
      const double w = ModelParams(q, beta).odds();
      for (int nt : {1, 2, 4}) add(floor_anchor_graph(2, w, nt), q, "anchor_layer_2x2", {{"beta", beta}, {"n_tilde", nt}});
      for (int nt : {1, 2})
        add(conditioned_floor_graph(2, 1, w, nt), q, "conditioned_floor_2x2x1", {{"beta", beta}, {"n_tilde", nt}});
    }
}

void suite_monotonicity(SuiteReport& r, Knobs&, std::ostream* log) {
  const auto reg = EventRegistry::standard();
  int certified = 0;
  for (int q : {2, 3})
    for (double beta : {0.7, 1.2})
      for (int h : {0, 1})
        for (const auto& e : reg.events()) {
          json in = {{"event", e.name}, {"q", q}, {"beta", beta}, {"h", h}, {"box", "2x2x1"}};
          try {
            auto row = monotonicity_check(2, 1, h, ModelParams(q, beta), e);
            ++certified;
            r.checks.push_back({"hard_le_soft", in, row.fl, "<=", row.soft, row.holds, ""});
          } catch (const CertificationError& ex) {
            r.checks.push_back({"hard_le_soft", in, NAN, "skipped", NAN, true, std::string("not certified: ") + ex.what()});
          }
        }
  r.checks.push_back({"certified_events_checked", json::object(), double(certified), ">", 0.0, certified > 0, ""});
  // The non-monotone control must be rejected by certification.
  bool rejected = false;
  try {
    monotonicity_check(2, 1, 0, ModelParams(2, 1.0), event_site_red(0, 0, 0));
  } catch (const CertificationError&) {
    rejected = true;
  }
  r.checks.push_back({"negative_control_rejected", {{"event", "site_red(0,0,0)"}}, double(rejected), "==", 1.0,
                      rejected, "a decreasing event must fail certification"});
  say(log, "  monotonicity: " + std::to_string(certified) + " certified comparisons");
}

void suite_fkg(SuiteReport& r, Knobs&, std::ostream* log) {
  const auto reg = EventRegistry::standard();
  std::vector<LatticePtr> boxes = {
      Lattice::make(DomainKind::floor_box, 2, 1, BoundaryCondition::floor()),
      Lattice::make(DomainKind::floor_box, 2, 2, BoundaryCondition::floor()),
      Lattice::make(DomainKind::slab_box, 2, 1, BoundaryCondition::dobrushin()),
      Lattice::make(DomainKind::floor_box, 3, 1, BoundaryCondition::floor()),
  };
  int pairs = 0;
  for (const auto& lat : boxes)
    for (int q : {2, 3}) {
      std::vector<const Event*> ok;
      for (const auto& e : reg.events()) {
        auto c = certify(e, lat, q);
        if (c.increasing && c.fuzzy_measurable) ok.push_back(&e);
      }
      for (double beta : {0.0, 0.7, 1.2}) {
        ExactPotts mu = ExactPotts::enumerate(lat, ModelParams(q, beta));
        std::vector<std::vector<char>> ind(ok.size(), std::vector<char>(mu.size()));
        for (std::int64_t i = 0; i < mu.size(); ++i) {
          SpinConfig s = mu.state(i);
          for (std::size_t a = 0; a < ok.size(); ++a) ind[a][i] = ok[a]->eval(s);
        }
        for (std::size_t a = 0; a < ok.size(); ++a)
          for (std::size_t b = a; b < ok.size(); ++b) {
            double pa = 0, pb = 0, pab = 0;
            for (std::int64_t i = 0; i < mu.size(); ++i) {
              const double p = mu.prob(i);
              if (ind[a][i]) pa += p;
              if (ind[b][i]) pb += p;
              if (ind[a][i] && ind[b][i]) pab += p;
            }
            json in = {{"box", box_name(*lat)}, {"q", q}, {"beta", beta}, {"a", ok[a]->name}, {"b", ok[b]->name}};
            r.checks.push_back({"fkg", in, pab, ">=", pa * pb - 1e-12, pab >= pa * pb - 1e-12, "joint vs product"});
            ++pairs;
          }
      }
      say(log, "  fkg " + box_name(*lat) + " q=" + std::to_string(q) + ": " + std::to_string(ok.size()) +
                   " certified events");
    }
  r.checks.push_back({"fkg_pairs_checked", json::object(), double(pairs), ">", 0.0, pairs > 0, ""});
}

void suite_xi(SuiteReport& r, Knobs& k, double c_const, std::ostream* log) {
  // Transfer matrix against brute force on the smallest floor box.
  {
    auto lat = Lattice::make(DomainKind::floor_box, 2, 1, BoundaryCondition::floor());
    const ModelParams P(2, 1.0);
    const Domain& d = lat->domain();
    FkGraph g = domain_graph(*lat, P.odds(), true);
    const double Z = fk_partition_frontier(g, P.q, coordinate_order(g, {2, 1, 0}));
    ExactFk fk = ExactFk::enumerate(lat, P, true);
    std::map<std::vector<Plaquette>, double> brute;
    for (std::int64_t m = 0; m < fk.size(); ++m)
      if (fk.prob(m) > 0) brute[extract_fk_interface(fk.config(m), FkSide::top).plaquettes] += fk.prob(m);
    double worst = 0.0, total = 0.0;
    for (const auto& [I, p] : brute) {
      const double dp = top_interface_weight(*lat, I, P) / Z;
      worst = std::max(worst, std::abs(dp - p));
      total += dp;
    }
    (void)d;
    r.checks.push_back({"top_interface_dp_vs_brute", {{"box", box_name(*lat)}, {"q", 2}, {"beta", 1.0},
                                                       {"interfaces", brute.size()}},
                        worst, "<", 1e-12, worst < 1e-12, "max |P_dp(I_top = I) - P_brute(I_top = I)|"});
    r.checks.push_back({"top_interface_dp_total", {{"box", box_name(*lat)}}, std::abs(total - 1.0), "<", 1e-12,
                        std::abs(total - 1.0) < 1e-12, "DP probabilities over realized I sum to 1"});
  }
  const int n = k.get("n", 3), m = k.get("m", 3), j = k.get("j", 1);
  const double beta = k.get("beta", 1.0);
  const int q = k.get("q", 2);
  const ModelParams P(q, beta);
  Domain d(DomainKind::floor_box, n, m);
  auto x = xi_ratio_check(n, m, P, flat_plaquettes(d, 0), j);
  json in = {{"n", n}, {"m", m}, {"j", j}, {"q", q}, {"beta", beta}, {"I", "flat at height 0"},
             {"xi_fl", x.xi_fl}, {"xi_dob", x.xi_dob}, {"implied_C", x.implied_c}};
  r.checks.push_back({"xi_fl_ge_xi_dob", in, x.xi_fl, ">=", x.xi_dob, x.inequality, ""});
  r.checks.push_back({"site_order_agreement", in, x.order_gap, "<", 1e-12, x.order_gap < 1e-12,
                      "relative gap between (k,j,i) and (k,i,j) elimination orders"});
  const double lb = std::exp(-4.0 * (beta + c_const) * j * n);
  r.checks.push_back({"xi_dob_lower_bound", in, x.xi_dob, ">=", lb, x.xi_dob >= lb, "exp(-4 (beta + C) j n)"});
  say(log, "  xi-ratio: fl=" + fmt(x.xi_fl, 8) + " dob=" + fmt(x.xi_dob, 8));
}

}  // namespace

SuiteReport run_oracle_suite(const std::string& name, const ExperimentConfig& cfg, std::ostream* log) {
  const auto t0 = Clock::now();
  SuiteReport r;
  r.suite = name;
  Knobs k(cfg, "oracle");
  say(log, "oracle suite " + name);
  if (name == "coupling") suite_coupling(r, k, log);
  else if (name == "sampler") suite_sampler(r, k, cfg.sampler.seed, log);
  else if (name == "free-energy") suite_free_energy(r, k, log);
  else if (name == "monotonicity") suite_monotonicity(r, k, log);
  else if (name == "fkg") suite_fkg(r, k, log);
  else if (name == "xi-ratio") suite_xi(r, k, cfg.thresholds.c, log);
  else if (name == "all") {
    for (const auto& s : oracle_suite_names()) {
      if (s == "all") continue;
      auto sub = run_oracle_suite(s, cfg, log);
      for (auto& c : sub.checks) {
        c.name = s + "/" + c.name;
        r.checks.push_back(std::move(c));
      }
    }
  } else {
    std::string list;
    for (const auto& s : oracle_suite_names()) list += (list.empty() ? "" : ", ") + s;
    throw UsageError("unknown oracle suite '" + name + "' (available: " + list + ")");
  }
  r.seconds = since(t0);
  return r;
}

// ---------------------------------------------------------------- reproduce

std::vector<std::string> reproduce_ids() {
  return {"interface-ordering", "dobrushin-tails",     "full-area",
          "rate-table",         "main-theorem-height", "cylinder-insensitivity"};
}

namespace {

Verdict reproduce_ordering(const ExperimentConfig& cfg, Knobs& k, const fs::path& dir, std::ostream* log) {
  Verdict v;
  const int n = k.get("n", 6), m = k.get("m", 6);
  const double beta = k.get("beta", 1.2);
  const auto qs = k.get<std::vector<int>>("q", {2, 3});
  const auto samples = k.get<std::int64_t>("samples", 10000);
  Csv csv(dir / "ordering.csv", {"q", "samples", "ordered", "ordered_fraction"});
  v.files.push_back(dir / "ordering.csv");
  bool all = true;
  std::string summary;
  for (int q : qs) {
    const ModelParams P(q, beta);
    auto lat = Lattice::make(DomainKind::floor_box, n, m, BoundaryCondition::floor());
    auto sched = experiment_schedule(cfg, k, P, lat, log, -1, -1, 4);
    const std::int64_t per = (samples + sched.n_chains - 1) / sched.n_chains;
    std::vector<std::int64_t> ok(sched.n_chains, 0), seen(sched.n_chains, 0);
    run_chains(
        P, [&](int) { return SpinConfig::ground_state(lat); }, per, derive_seed(cfg.sampler.seed, q), sched,
        [&](int c, std::int64_t, const SpinConfig& sigma, Rng& aux) {
          EdgeConfig w = couple_edges_from_spins(sigma, P, aux);
          ok[c] += verify_ordering(extract_fk_interface(w, FkSide::top), extract_potts_interface(sigma, PottsSide::red),
                                   extract_potts_interface(sigma, PottsSide::blue),
                                   extract_fk_interface(w, FkSide::bot));
          ++seen[c];
        });
    std::int64_t tok = 0, tseen = 0;
    for (int c = 0; c < sched.n_chains; ++c) tok += ok[c], tseen += seen[c];
    csv.row(q, tseen, tok, double(tok) / tseen);
    v.detail["q" + std::to_string(q)] = {{"samples", tseen}, {"ordered", tok}};
    all = all && tok == tseen;
    summary += "q=" + std::to_string(q) + ": " + std::to_string(tok) + "/" + std::to_string(tseen) + " ordered; ";
  }
  v.pass = all;
  v.summary = summary + "need 100%";
  return v;
}

struct TailFit {
  double slope = 0.0, slope_stderr = 0.0;
};

// Weighted least squares of log P_k against k.
TailFit fit_log_tail(const std::vector<int>& ks, const std::vector<McEstimate>& p) {
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double y = std::log(p[i].mean);
    const double se = p[i].stderr_ / p[i].mean;
    const double w = se > 0 ? 1.0 / (se * se) : 1.0;
    sw += w, sx += w * ks[i], sy += w * y, sxx += w * ks[i] * ks[i], sxy += w * ks[i] * y;
  }
  const double den = sw * sxx - sx * sx;
  TailFit f;
  f.slope = (sw * sxy - sx * sy) / den;
  f.slope_stderr = std::sqrt(sw / den);
  return f;
}

Verdict reproduce_tails(const ExperimentConfig& cfg, Knobs& k, const fs::path& dir, std::ostream* log) {
  Verdict v;
  const int n = k.get("n", 12), m = k.get("m", 6), q = k.get("q", 2), kmax = k.get("k_max", 5);
  const double beta = k.get("beta", 1.2);
  const auto samples = k.get<std::int64_t>("samples", 20000);
  const ModelParams P(q, beta);
  auto lat = Lattice::make(DomainKind::slab_box, n, m, BoundaryCondition::dobrushin());
  const Domain& d = lat->domain();
  const auto cols = bulk_columns(d);
  auto sched = experiment_schedule(cfg, k, P, lat, log, -1, -1, 4);
  const int C = sched.n_chains;
  const std::int64_t per = (samples + C - 1) / C;
  std::vector<std::vector<std::vector<double>>> tail(C, std::vector<std::vector<double>>(kmax + 1));
  run_chains(
      P, [&](int) { return SpinConfig::ground_state(lat); }, per, derive_seed(cfg.sampler.seed, 11), sched,
      [&](int c, std::int64_t, const SpinConfig& sigma, Rng& aux) {
        auto full = extract_full_interface(couple_edges_from_spins(sigma, P, aux));
        auto h = full.heights(d);
        for (int kk = 0; kk <= kmax; ++kk) {
          int cnt = 0;
          for (int col : cols) cnt += h.max2[col] != kNoHeight && h.max2[col] >= 2 * kk;
          tail[c][kk].push_back(double(cnt) / cols.size());
        }
      });
  Csv csv(dir / "tails.csv", {"k", "tail", "stderr", "log_tail"});
  v.files.push_back(dir / "tails.csv");
  std::vector<McEstimate> est;
  for (int kk = 0; kk <= kmax; ++kk) {
    std::vector<McEstimate> parts;
    for (int c = 0; c < C; ++c) parts.push_back(estimate(tail[c][kk]));
    est.push_back(combine(parts));
    csv.row(kk, est.back().mean, est.back().stderr_, est.back().mean > 0 ? std::log(est.back().mean) : -INFINITY);
  }
  const std::vector<int> ks = {1, 2, 3};
  bool monotone = true, positive = true;
  for (int kk : ks) positive = positive && est[kk].mean > 0;
  for (std::size_t i = 0; i + 1 < ks.size(); ++i) monotone = monotone && est[ks[i]].mean > est[ks[i + 1]].mean;
  double rate = NAN, rate_se = NAN;
  if (positive) {
    std::vector<McEstimate> sub;
    for (int kk : ks) sub.push_back(est[kk]);
    auto f = fit_log_tail(ks, sub);
    rate = -f.slope;
    rate_se = f.slope_stderr;
  }
  const double bound = beta - 2.0;
  v.pass = positive && monotone && rate >= bound;
  v.detail = {{"tail", {est[1].mean, est[2].mean, est[3].mean}}, {"decay_rate", rate}, {"decay_rate_stderr", rate_se},
              {"bound", bound}, {"monotone", monotone}, {"positive", positive}};
  v.summary = "P(hgt>=k) k=1,2,3: " + fmt(est[1].mean) + ", " + fmt(est[2].mean) + ", " + fmt(est[3].mean) +
              "; decay rate " + fmt(rate) + " +- " + fmt(rate_se, 2) + " (need >= " + fmt(bound) + ", strictly decreasing)";
  return v;
}

Verdict reproduce_full_area(const ExperimentConfig& cfg, Knobs& k, const fs::path& dir, std::ostream* log) {
  Verdict v;
  const int n = k.get("n", 8), m = k.get("m", 4), q = k.get("q", 2), level_h = k.get("level_h", 1);
  const double beta = k.get("beta", 1.2);
  const auto samples = k.get<std::int64_t>("samples", 4000);
  const ModelParams P(q, beta);
  auto lat = Lattice::make(DomainKind::slab_box, n, m, BoundaryCondition::dobrushin());
  const Domain& d = lat->domain();
  auto sched = experiment_schedule(cfg, k, P, lat, log, -1, -1, 4);
  const int C = sched.n_chains;
  const std::int64_t per = (samples + C - 1) / C;
  std::vector<std::vector<WallSampleStats>> st(C);
  run_chains(
      P, [&](int) { return SpinConfig::ground_state(lat); }, per, derive_seed(cfg.sampler.seed, 12), sched,
      [&](int c, std::int64_t, const SpinConfig& sigma, Rng& aux) {
        auto full = extract_full_interface(couple_edges_from_spins(sigma, P, aux));
        st[c].push_back(wall_sample_stats(full, extract_potts_interface(sigma, PottsSide::blue), d, level_h));
      });
  Csv csv(dir / "walls.csv", {"sample_id", "full_size", "n_walls", "total_excess", "outermost_hull_area",
                              "level_set_count_h", "excess_identity"});
  v.files.push_back(dir / "walls.csv");
  std::vector<McEstimate> ratio;
  std::int64_t id_ok = 0, total = 0;
  std::vector<WallSampleStats> flat;
  for (int c = 0; c < C; ++c) {
    std::vector<double> r;
    for (const auto& s : st[c]) {
      const bool id = s.total_excess == s.full_size - d.num_columns();
      id_ok += id;
      csv.row(total++, s.full_size, s.n_walls, s.total_excess, s.outermost_hull_area, s.level_set_count, int(id));
      r.push_back(double(s.full_size) / d.num_columns());
      flat.push_back(s);
    }
    ratio.push_back(estimate(r));
  }
  auto area = combine(ratio);
  auto ws = wall_area_statistics(flat, n);
  v.pass = area.mean < 1.5 && id_ok == total;
  v.detail = {{"full_area_ratio", area.mean}, {"stderr", area.stderr_}, {"identity_ok", id_ok}, {"samples", total},
              {"hull_fraction", ws.hull_fraction.mean}, {"level_set_fraction", ws.level_set_fraction.mean}};
  v.summary = "mean |I_Full|/n^2 = " + fmt(area.mean) + " +- " + fmt(area.stderr_, 2) + " (need < 1.5); excess identity " +
              std::to_string(id_ok) + "/" + std::to_string(total);

  // Optional context: the same ratio at other beta.  Does not enter the verdict.
  const auto scan = k.get<std::vector<double>>("beta_scan", {});
  const auto scan_samples = k.get<std::int64_t>("scan_samples", 400);
  if (!scan.empty()) {
    Csv sc(dir / "beta_scan.csv", {"beta", "full_area_ratio", "stderr", "samples"});
    v.files.push_back(dir / "beta_scan.csv");
    std::string part;
    for (double b : scan) {
      const ModelParams Pb(q, b);
      auto sb = experiment_schedule(cfg, k, Pb, lat, log, -1, -1, 4);
      const int Cb = sb.n_chains;
      std::vector<std::vector<double>> r(Cb);
      run_chains(
          Pb, [&](int) { return SpinConfig::ground_state(lat); }, (scan_samples + Cb - 1) / Cb,
          derive_seed(cfg.sampler.seed, 13 + static_cast<std::uint64_t>(b * 1000)), sb,
          [&](int c, std::int64_t, const SpinConfig& sigma, Rng& aux) {
            r[c].push_back(double(extract_full_interface(couple_edges_from_spins(sigma, Pb, aux)).size()) /
                           d.num_columns());
          });
      std::vector<McEstimate> e;
      for (auto& x : r) e.push_back(estimate(x));
      auto a = combine(e);
      sc.row(b, a.mean, a.stderr_, a.n_samples);
      v.detail["beta_scan"].push_back({{"beta", b}, {"full_area_ratio", a.mean}, {"stderr", a.stderr_}});
      part += " " + fmt(b, 3) + ":" + fmt(a.mean, 3);
    }
    v.summary += "; ratio at other beta" + part;
  }
  return v;
}

void write_series(Csv& csv, const RateSeries& s) {
  for (const auto& p : s.points) csv.row(s.name, p.h, p.p.mean, p.p.stderr_, p.rate, p.rate_stderr, p.hits, int(p.usable));
}

Verdict reproduce_rates(const ExperimentConfig& cfg, Knobs& k, const fs::path& dir, std::ostream* log) {
  Verdict v;
  const int n = k.get("n", 16), q = k.get("q", 2), h_max = k.get("h_max", 3);
  const double beta = k.get("beta", 1.2);
  const auto samples = k.get<std::int64_t>("samples", 20000);
  const bool pillar = k.get("pillar", true);
  const ModelParams P(q, beta);
  RateOptions opt;
  opt.m = k.get("m", 0);
  auto lat = Lattice::make(DomainKind::slab_box, n, opt.m > 0 ? opt.m : std::max(1, n / 2),
                           BoundaryCondition::red_all());
  opt.schedule = experiment_schedule(cfg, k, P, lat, log, -1, -1, 4);
  say(log, "rate-table: point-to-plane series");
  auto pair = estimate_point_to_plane_pair(P, n, h_max, samples, derive_seed(cfg.sampler.seed, 21), opt);
  const RateSeries& xi = pair[0];
  const RateSeries& xt = pair[1];
  Csv csv(dir / "rates.csv", {"series", "h", "p_hat", "stderr", "rate_hat", "rate_stderr", "hits", "usable"});
  v.files.push_back(dir / "rates.csv");
  write_series(csv, xi);
  write_series(csv, xt);
  if (pillar) {
    say(log, "rate-table: pillar series");
    RateOptions po = opt;
    po.m = 0;
    auto alpha = estimate_pillar_rate(P, n, h_max, samples, derive_seed(cfg.sampler.seed, 22), po);
    write_series(csv, alpha);
    Csv rel(dir / "relations.csv", {"h", "alpha_gap", "tilde_gap"});
    v.files.push_back(dir / "relations.csv");
    json rows = json::array();
    for (const auto& r : relation_bundle(xi, xt, alpha, P)) {
      rel.row(r.h, r.alpha_gap, r.tilde_gap);
      rows.push_back({r.h, r.alpha_gap, r.tilde_gap});
    }
    v.detail["relations"] = rows;
  }
  try {
    auto f = fit_xi(xi);
    v.detail["fit"] = {{"slope", f.slope}, {"slope_stderr", f.slope_stderr}, {"intercept", f.intercept}};
  } catch (const FitError& e) {
    v.detail["fit"] = e.what();
  }
  const auto& x1 = xi.at(1);
  const auto& x2 = xi.at(2);
  const auto& t1 = xt.at(1);
  const bool usable = x1.usable && x2.usable && t1.usable;
  const bool nondecreasing = usable && x1.rate <= x2.rate;
  const double diff = x2.rate - x1.rate;
  const double comb = std::sqrt(x1.rate_stderr * x1.rate_stderr + x2.rate_stderr * x2.rate_stderr +
                                t1.rate_stderr * t1.rate_stderr);
  const bool additive = usable && std::abs(diff - t1.rate) <= 3.0 * comb;
  const double C = cfg.thresholds.c;
  const bool window = usable && x1.rate >= 4 * beta - C && x1.rate <= 4 * beta + C;
  v.pass = nondecreasing && additive && window;
  v.detail["xi1"] = {x1.rate, x1.rate_stderr};
  v.detail["xi2"] = {x2.rate, x2.rate_stderr};
  v.detail["xi_tilde1"] = {t1.rate, t1.rate_stderr};
  v.detail["hits"] = {x1.hits, x2.hits, t1.hits};
  v.summary = "xi1=" + fmt(x1.rate) + "+-" + fmt(x1.rate_stderr, 2) + " xi2=" + fmt(x2.rate) + "+-" +
              fmt(x2.rate_stderr, 2) + " xi~1=" + fmt(t1.rate) + "+-" + fmt(t1.rate_stderr, 2) +
              "; |(xi2-xi1)-xi~1|=" + fmt(std::abs(diff - t1.rate)) + " vs 3sigma=" + fmt(3 * comb) + "; xi1 in [" +
              fmt(4 * beta - C) + "," + fmt(4 * beta + C) + "]: " + (window ? "yes" : "no");
  return v;
}

Verdict reproduce_main_height(const ExperimentConfig& cfg, Knobs& k, const fs::path& dir, std::ostream* log) {
  Verdict v;
  const int q = k.get("q", 2);
  const double beta = k.get("beta", 1.0);
  const auto ns = k.get<std::vector<int>>("n_values", {8, 16, 32, 64});
  const int m_cap = k.get("m_cap", 12);
  const auto samples = k.get<std::int64_t>("samples", 400);
  const double eps = cfg.thresholds.eps;
  // "mixed" puts the interface at height 1 over half the footprint and at 0
  // over the rest; single-layer starts can sit in the wrong layer for longer
  // than any affordable run, the straight step of the mixed start moves freely.
  const auto starts = k.get<std::vector<std::string>>("starts", {"mixed", "flat", "raised"});
  const auto measure = k.get<std::string>("measure_start", "mixed");
  const int rate_n = k.get("rate_n", 16);
  const auto rate_samples = k.get<std::int64_t>("rate_samples", 4000);
  const ModelParams P(q, beta);

  // xi at this beta for h*.
  say(log, "main-theorem-height: rate fit");
  RateOptions ro;
  auto rlat = Lattice::make(DomainKind::slab_box, rate_n, std::max(1, rate_n / 2), BoundaryCondition::red_all());
  ro.schedule = experiment_schedule(cfg, k, P, rlat, log, -1, -1, 4);
  auto xi = estimate_point_to_plane(P, rate_n, 3, rate_samples, derive_seed(cfg.sampler.seed, 31), false, ro);
  double slope = NAN;
  try {
    slope = fit_xi(xi).slope;
  } catch (const FitError&) {
  }
  v.detail["xi_slope"] = slope;

  Csv csv(dir / "heights.csv", {"start", "n", "log_n", "median_height", "frac_above_median", "frac_stderr",
                                "mean_sample_median", "sample_median_stderr", "h_star", "outside_fraction",
                                "outside_stderr", "samples"});
  v.files.push_back(dir / "heights.csv");
  if (std::find(starts.begin(), starts.end(), measure) == starts.end())
    throw ConfigError("reproduce.main-theorem-height.measure_start must be one of the starts");
  bool pass = true;
  std::string summary;
  std::map<std::string, std::vector<double>> medians;
  for (const auto& start : starts) {
    if (start != "flat" && start != "raised" && start != "mixed")
      throw ConfigError("reproduce.main-theorem-height.starts: flat, raised or mixed");
    std::vector<double> med;
    for (int n : ns) {
      const int m = std::min(n, m_cap);
      auto lat = Lattice::make(DomainKind::floor_box, n, m, BoundaryCondition::floor());
      const Domain& d = lat->domain();
      auto init = [&](int) {
        SpinConfig s = SpinConfig::ground_state(lat);
        for (int v2 = 0; v2 < d.num_sites(); ++v2) {
          const auto& c = d.coord(v2);
          if (c.k < 1 && (start == "raised" || (start == "mixed" && c.i < 0))) s.set(v2, kBlue);
        }
        return s;
      };
      auto sched = experiment_schedule(cfg, k, P, lat, log, 10000, 10, 4);
      const int C = sched.n_chains;
      const std::int64_t per = (samples + C - 1) / C;
      const int hs = std::isfinite(slope) && slope > 0 ? h_star(n, slope) : 0;
      std::vector<std::vector<double>> mh(C), of(C);
      std::vector<std::map<int, std::int64_t>> hist(C);  // pooled column heights (doubled)
      std::vector<std::vector<std::vector<int>>> per_sample(C);
      say(log, "  start=" + start + " n=" + std::to_string(n) + " m=" + std::to_string(m));
      run_chains(P, init, per, derive_seed(cfg.sampler.seed, 1000 + n + (start == "raised" ? 1 : start == "mixed" ? 2 : 0) * 100000), sched,
                 [&](int c, std::int64_t, const SpinConfig& sigma, Rng&) {
                   auto I = extract_potts_interface(sigma, PottsSide::blue);
                   mh[c].push_back(median_column_height(I, d));
                   of[c].push_back(outside_fraction(I, d, hs, eps));
                   auto h = I.heights(d);
                   std::vector<int> col;
                   for (int x : h.max2)
                     if (x != kNoHeight) ++hist[c][x], col.push_back(x);
                   per_sample[c].push_back(std::move(col));
                 });
      // Median of the column-height law, pooled over columns and samples.
      std::map<int, std::int64_t> pooled;
      std::int64_t total = 0;
      for (const auto& hc : hist)
        for (auto [x, cnt] : hc) pooled[x] += cnt, total += cnt;
      int med2 = 0;
      std::int64_t cum = 0;
      for (auto [x, cnt] : pooled) {
        cum += cnt;
        if (2 * cum >= total) {
          med2 = x;
          break;
        }
      }
      // Per-sample fraction of columns at or above that median, as a margin.
      std::vector<McEstimate> a, b, f;
      for (int c = 0; c < C; ++c) {
        std::vector<double> fr;
        for (const auto& col : per_sample[c]) {
          int above = 0;
          for (int x : col) above += x >= med2;
          fr.push_back(col.empty() ? 0.0 : double(above) / col.size());
        }
        a.push_back(estimate(mh[c])), b.push_back(estimate(of[c])), f.push_back(estimate(fr));
      }
      auto ma = combine(a), ob = combine(b), fa = combine(f);
      const double median = med2 / 2.0;
      csv.row(start, n, std::log(double(n)), median, fa.mean, fa.stderr_, ma.mean, ma.stderr_, hs, ob.mean, ob.stderr_,
              ma.n_samples);
      med.push_back(median);
      v.detail[start]["n" + std::to_string(n)] = {{"median_height", median},
                                                  {"frac_at_or_above_median", fa.mean},
                                                  {"frac_stderr", fa.stderr_},
                                                  {"mean_sample_median", ma.mean},
                                                  {"sample_median_stderr", ma.stderr_},
                                                  {"h_star", hs},
                                                  {"outside_fraction", ob.mean}};
    }
    medians[start] = med;
  }
  const auto& med = medians[measure];
  bool nondec = true;
  for (std::size_t i = 0; i + 1 < med.size(); ++i) nondec = nondec && med[i] <= med[i + 1];
  const double rise = med.back() - med.front();
  pass = nondec && rise >= 1.0;
  summary = measure + " start: medians";
  for (double x : med) summary += " " + fmt(x, 3);
  summary += " (rise " + fmt(rise, 3) + ", need nondecreasing and >= 1)";
  // Other starts are diagnostics: disagreement flags a metastable layer.
  json agree = json::object();
  for (const auto& [start, m] : medians) {
    if (start == measure) continue;
    summary += "; " + start + ":";
    for (double x : m) summary += " " + fmt(x, 3);
    bool same = true;
    for (std::size_t i = 0; i < m.size(); ++i) same = same && std::abs(m[i] - med[i]) < 0.5;
    agree[start] = same;
  }
  v.detail["measure_start"] = measure;
  v.detail["starts_agree_with_measure"] = agree;
  v.pass = pass;
  v.summary = summary + "; xi slope " + fmt(slope);
  return v;
}

Verdict reproduce_cylinder(const ExperimentConfig& cfg, Knobs& k, const fs::path& dir, std::ostream* log) {
  Verdict v;
  const int n = k.get("n", 8), q = k.get("q", 2);
  const double beta = k.get("beta", 1.2);
  const auto ms = k.get<std::vector<int>>("m_values", {8, 16});
  const auto samples = k.get<std::int64_t>("samples", 4000);
  if (ms.size() != 2) throw ConfigError("reproduce.cylinder-insensitivity.m_values: need exactly two heights");
  const ModelParams P(q, beta);
  const int H = std::max(ms[0], ms[1]) + 1;  // height bins 0..H-1
  std::vector<std::vector<McEstimate>> hist;
  Csv csv(dir / "histograms.csv", {"m", "height", "fraction", "stderr"});
  v.files.push_back(dir / "histograms.csv");
  for (int m : ms) {
    auto lat = Lattice::make(DomainKind::floor_box, n, m, BoundaryCondition::floor());
    const Domain& d = lat->domain();
    auto sched = experiment_schedule(cfg, k, P, lat, log, -1, -1, 4);
    const int C = sched.n_chains;
    const std::int64_t per = (samples + C - 1) / C;
    std::vector<std::vector<std::vector<double>>> f(C, std::vector<std::vector<double>>(H));
    run_chains(P, [&](int) { return SpinConfig::ground_state(lat); }, per, derive_seed(cfg.sampler.seed, 40 + m),
               sched, [&](int c, std::int64_t, const SpinConfig& sigma, Rng&) {
                 auto h = extract_potts_interface(sigma, PottsSide::blue).heights(d);
                 std::vector<int> cnt(H, 0);
                 for (int col = 0; col < d.num_columns(); ++col) {
                   const int m2 = h.max2[col];
                   const int b = m2 == kNoHeight ? 0 : std::clamp(m2 / 2, 0, H - 1);
                   ++cnt[b];
                 }
                 for (int b = 0; b < H; ++b) f[c][b].push_back(double(cnt[b]) / d.num_columns());
               });
    std::vector<McEstimate> row;
    for (int b = 0; b < H; ++b) {
      std::vector<McEstimate> parts;
      for (int c = 0; c < C; ++c) parts.push_back(estimate(f[c][b]));
      row.push_back(combine(parts));
      csv.row(m, b, row.back().mean, row.back().stderr_);
    }
    hist.push_back(row);
  }
  double tv = 0, var = 0;
  for (int b = 0; b < H; ++b) {
    tv += std::abs(hist[0][b].mean - hist[1][b].mean);
    var += hist[0][b].stderr_ * hist[0][b].stderr_ + hist[1][b].stderr_ * hist[1][b].stderr_;
  }
  tv *= 0.5;
  const double se = 0.5 * std::sqrt(var);
  v.pass = tv <= 3.0 * se;
  v.detail = {{"tv", tv}, {"combined_stderr", se}};
  v.summary = "TV(m=" + std::to_string(ms[0]) + ", m=" + std::to_string(ms[1]) + ") = " + fmt(tv) +
              " vs 3 x combined stderr " + fmt(3.0 * se);
  return v;
}

}  // namespace

Verdict cmd_reproduce(const std::string& id, const ExperimentConfig& cfg, std::ostream* log) {
  const auto ids = reproduce_ids();
  if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
    std::string list;
    for (const auto& s : ids) list += (list.empty() ? "" : ", ") + s;
    throw UsageError("unknown experiment '" + id + "' (available: " + list + ")");
  }
  const auto t0 = Clock::now();
  const fs::path dir = cfg.out_dir / id;
  fs::create_directories(dir);
  Knobs k(cfg, id);
  say(log, "reproduce " + id);
  Verdict v;
  if (id == "interface-ordering") v = reproduce_ordering(cfg, k, dir, log);
  else if (id == "dobrushin-tails") v = reproduce_tails(cfg, k, dir, log);
  else if (id == "full-area") v = reproduce_full_area(cfg, k, dir, log);
  else if (id == "rate-table") v = reproduce_rates(cfg, k, dir, log);
  else if (id == "main-theorem-height") v = reproduce_main_height(cfg, k, dir, log);
  else v = reproduce_cylinder(cfg, k, dir, log);
  v.id = id;
  v.seconds = since(t0);
  v.detail["knobs"] = k.used();
  v.detail["seed"] = cfg.sampler.seed;
  json report = {{"id", id}, {"pass", v.pass}, {"summary", v.summary}, {"detail", v.detail}};
  std::ofstream(dir / "verdict.json") << report.dump(2) << "\n";
  v.files.push_back(dir / "verdict.json");
  say(log, std::string(v.pass ? "PASS " : "FAIL ") + id + ": " + v.summary);
  return v;
}

}  // namespace pfsim
