#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "pfsim/potts.hpp"
#include "pfsim/stats.hpp"

namespace pfsim {

struct ChainSchedule {
  int burnin = 200;        // steps before the first sample
  int interval = 2;        // steps between samples
  bool heat_bath = true;      // one step = heat-bath sweep and/or SW sweep
  bool swendsen_wang = true;
  int n_chains = 1;
  int workers = 1;
  std::ostream* log = nullptr;
};

// Called once per sample.  `aux` is a per-chain generator independent of the
// dynamics, for coupled edge draws and similar.  Different chains may call
// concurrently; write only into per-chain slots.
using ChainObserver = std::function<void(int chain, std::int64_t index, const SpinConfig& sigma, Rng& aux)>;
using ChainInit = std::function<SpinConfig(int chain)>;

struct ChainSummary {
  std::vector<std::uint64_t> sweeps;  // per chain
  McEstimate energy;                  // combined over chains
  double seconds = 0.0;
};

// With both flags off a heat-bath sweep is still made.
void chain_step(ChainState& st, const ModelParams& params, bool heat_bath, bool swendsen_wang);

// Independent chains seeded by Rng(seed).split(chain).  Results do not depend
// on the worker count.
ChainSummary run_chains(const ModelParams& params, const ChainInit& init, std::int64_t samples_per_chain,
                        std::uint64_t seed, const ChainSchedule& sched, const ChainObserver& observe);

}  // namespace pfsim
