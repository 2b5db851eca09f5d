#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "pfsim/lattice.hpp"
#include "pfsim/rng.hpp"

namespace pfsim {

// Potts coloring of the interior; boundary colors are stored alongside so
// that neighbour lookups never branch.
class SpinConfig {
 public:
  SpinConfig(LatticePtr lattice, Color fill);
  // Each interior site takes the boundary color of its layer (all red for
  // the floor condition), i.e. the flat ground state of the bc.
  static SpinConfig ground_state(LatticePtr lattice);

  const Lattice& lattice() const { return *lat_; }
  const LatticePtr& lattice_ptr() const { return lat_; }
  const Domain& domain() const { return lat_->domain(); }
  int num_sites() const { return lat_->num_sites(); }

  Color operator[](int v) const { return c_[v]; }
  void set(int s, Color c) { c_[s] = c; }
  Color* data() { return c_.data(); }
  std::span<const Color> interior() const { return {c_.data(), static_cast<std::size_t>(num_sites())}; }
  const std::vector<Color>& all() const { return c_; }
  bool boundary_intact() const;
  bool same_colors(const SpinConfig& o) const { return c_ == o.c_; }

 private:
  LatticePtr lat_;
  std::vector<Color> c_;
};

struct EnumerationCapError : std::length_error {
  using std::length_error::length_error;
};

// Visits all q^V interior colorings, site 0 varying fastest.  Throws when
// q^V exceeds the cap.
void for_each_coloring(const LatticePtr& lattice, int q, const std::function<void(const SpinConfig&)>& fn,
                       double cap = 1e8);

// Number of bichromatic domain edges (interior-interior and interior-boundary).
std::int64_t energy(const SpinConfig& sigma);

struct ChainState {
  SpinConfig sigma;
  std::uint64_t sweep = 0;
  Rng rng;
  std::int64_t energy = 0;

  ChainState(SpinConfig s, std::uint64_t seed);
};

void heat_bath_sweep(ChainState& st, const ModelParams& params);
void sw_sweep_frozen_boundary(ChainState& st, const ModelParams& params);

// Heat-bath sweep where a proposal is vetoed when `allowed` returns false
// for the updated configuration (Metropolis on a restricted state space).
// Only blue -> non-blue moves are checked: the restricting events used here
// are increasing in the blue set.  Returns the number of vetoed proposals.
std::int64_t heat_bath_sweep_restricted(ChainState& st, const ModelParams& params,
                                        const std::function<bool(const SpinConfig&)>& allowed,
                                        std::int64_t* checked = nullptr);

struct SamplingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SoftFloorMethod { rejection, restricted };

struct SoftFloorOptions {
  int burnin = 200;
  int interval = 2;
  std::int64_t budget = 1'000'000;  // rejection attempts before giving up
};

struct SoftFloorReport {
  std::int64_t emitted = 0;
  std::int64_t attempts = 0;   // rejection: chain samples inspected; restricted: checked moves
  std::int64_t accepted = 0;
  double acceptance_rate() const { return attempts ? double(accepted) / attempts : 1.0; }
};

// Samples mu^h(. | I_blue inside the upper half-space) on a SlabBox with
// Split(h) boundary.  Each sample is passed to `emit` with its sweep count.
SoftFloorReport sample_conditional_soft_floor(
    const LatticePtr& lattice, const ModelParams& params, std::int64_t n_samples,
    std::uint64_t seed, SoftFloorMethod method, const SoftFloorOptions& opt,
    const std::function<void(const SpinConfig&, std::uint64_t)>& emit);

}  // namespace pfsim
