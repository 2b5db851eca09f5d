#include "pfsim/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <ostream>
#include <thread>

namespace pfsim {

void chain_step(ChainState& st, const ModelParams& params, bool heat_bath, bool swendsen_wang) {
  if (heat_bath || !swendsen_wang) heat_bath_sweep(st, params);
  if (swendsen_wang) sw_sweep_frozen_boundary(st, params);
}

ChainSummary run_chains(const ModelParams& params, const ChainInit& init, std::int64_t samples_per_chain,
                        std::uint64_t seed, const ChainSchedule& sched, const ChainObserver& observe) {
  const int C = std::max(1, sched.n_chains);
  const auto t0 = std::chrono::steady_clock::now();
  ChainSummary out;
  out.sweeps.assign(C, 0);
  std::vector<McEstimate> energies(C);
  std::atomic<int> next{0};
  std::mutex log_mu;
  const Rng root(seed);

  auto worker = [&] {
    for (int c = next++; c < C; c = next++) {
      Rng chain_rng = root.split(2 * static_cast<std::uint64_t>(c));
      Rng aux = root.split(2 * static_cast<std::uint64_t>(c) + 1);
      ChainState st(init(c), chain_rng.next());
      for (int b = 0; b < sched.burnin; ++b) chain_step(st, params, sched.heat_bath, sched.swendsen_wang);
      std::vector<double> e;
      e.reserve(samples_per_chain);
      for (std::int64_t s = 0; s < samples_per_chain; ++s) {
        for (int t = 0; t < std::max(1, sched.interval); ++t) chain_step(st, params, sched.heat_bath, sched.swendsen_wang);
        e.push_back(double(st.energy));
        observe(c, s, st.sigma, aux);
        if (sched.log && samples_per_chain >= 10 && (s + 1) % (samples_per_chain / 10) == 0) {
          std::lock_guard<std::mutex> lk(log_mu);
          *sched.log << "  chain " << c << ": " << (s + 1) << "/" << samples_per_chain << " samples\n"
                     << std::flush;
        }
      }
      out.sweeps[c] = st.sweep;
      energies[c] = estimate(e);
    }
  };
  const int W = std::clamp(sched.workers, 1, C);
  if (W == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < W; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  out.energy = combine(energies);
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace pfsim
