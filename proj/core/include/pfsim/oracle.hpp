#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pfsim/fkgraph.hpp"
#include "pfsim/fuzzy.hpp"
#include "pfsim/rc.hpp"

namespace pfsim {

// Exact Potts measure with fixed boundary colors.  States are indexed by
// sum_v (sigma_v - 1) q^v, the order of for_each_coloring.
class ExactPotts {
 public:
  static ExactPotts enumerate(const LatticePtr& lattice, const ModelParams& params, double cap = 1e8);
  // Restricted to the configurations in `keep`, renormalized.
  static ExactPotts enumerate_conditioned(const LatticePtr& lattice, const ModelParams& params,
                                          const EventFn& keep, double cap = 1e8);

  const LatticePtr& lattice() const { return lat_; }
  int q() const { return params_.q; }
  std::int64_t size() const { return static_cast<std::int64_t>(probs_.size()); }
  // log of sum exp(-beta * energy) over the kept states.
  double log_z() const { return log_z_; }
  double prob(std::int64_t idx) const { return probs_[idx]; }
  const std::vector<double>& probs() const { return probs_; }
  SpinConfig state(std::int64_t idx) const;
  std::int64_t index_of(const SpinConfig& s) const;

  double probability(const EventFn& a) const;
  double conditional(const EventFn& a, const EventFn& given) const;
  // P(sigma_site = c) for c = 1..q, stored at index c - 1.
  std::vector<double> site_marginal(int site) const;

 private:
  LatticePtr lat_;
  ModelParams params_;
  std::vector<double> probs_;
  double log_z_ = 0.0;
};

// Exact FK measure over the domain's edge configurations.
class ExactFk {
 public:
  static ExactFk enumerate(const LatticePtr& lattice, const ModelParams& params, bool conditioned,
                           double cap = 16777216.0);

  std::int64_t size() const { return static_cast<std::int64_t>(probs_.size()); }
  double log_z() const { return log_z_; }  // r^{|omega|} q^kappa convention
  double prob(std::uint64_t mask) const { return probs_[mask]; }
  EdgeConfig config(std::uint64_t mask) const;
  double probability(const std::function<bool(const EdgeConfig&)>& a) const;

 private:
  LatticePtr lat_;
  std::vector<double> probs_;
  double log_z_ = 0.0;
};

double total_variation(const std::vector<double>& a, const std::vector<double>& b);

struct CouplingReport {
  std::string box;
  int q = 0;
  double beta = 0.0;
  double tv = 0.0;            // pushforward of conditioned FK vs exact Potts
  double z_identity_gap = 0;  // |log Z_potts - (|E| log(1-p) + log Z_fk - classes log q)|
  std::int64_t fk_states = 0;
  int merged_edges = 0;
};

// Colors the clusters of the disconnection-conditioned FK measure and compares
// with the exact Potts measure.  Parallel boundary edges are merged.
CouplingReport coupling_check(const LatticePtr& lattice, const ModelParams& params);

struct FreeEnergyReport {
  std::string name;
  double theta0 = 0, theta1 = 0;
  double lhs = 0, rhs = 0, gap = 0;
};

// `tilde[e]` marks the edges whose probability is theta; their weights in g
// are ignored.
FreeEnergyReport free_energy_identity_check(const FkGraph& g, const std::vector<char>& tilde, int q,
                                            double theta0, double theta1, const std::string& name = "");

struct TildeGraph {
  FkGraph g;
  std::vector<char> tilde;
};
// One free edge between two vertices; it is the only tilde edge.
TildeGraph single_edge_graph();
// Bottom layer of a slab below a flat interface: n x n x 1 sites, wired to
// the blue class on the lower faces, free above; `n_tilde` extra edges from
// sites of the layer to the wired class.
TildeGraph floor_anchor_graph(int n, double w, int n_tilde);
// Whole floor box conditioned on disconnection, with extra edges from
// bottom-layer sites to the blue class.
TildeGraph conditioned_floor_graph(int n, int m, double w, int n_tilde);

struct MonotonicityRow {
  std::string event;
  int h = 0;
  double fl = 0, soft = 0;
  bool holds = false;
};

// Exact mu^fl(A) on the floor box vs mu^h(A | I_blue in the upper half) on the
// slab.  Throws CertificationError unless A is certified increasing and
// measurable w.r.t. the augmented blue region on both boxes.
MonotonicityRow monotonicity_check(int n, int m, int h, const ModelParams& params, const Event& a);

struct FkgRow {
  std::string a, b, box;
  double joint = 0, product = 0;
  bool holds = false;
};

// Throws CertificationError unless both events are certified increasing and
// fuzzy measurable on the lattice.
FkgRow fkg_check(const LatticePtr& lattice, const ModelParams& params, const Event& a, const Event& b);

// Horizontal plaquettes at height h over the footprint.
std::vector<Plaquette> flat_plaquettes(const Domain& d, int h);

// Unnormalized weight of {I_top = I} under the conditioned FK measure, as the
// product of the partition functions above and below I.
double top_interface_weight(const Lattice& lat, const std::vector<Plaquette>& I, const ModelParams& params,
                            std::array<int, 3> axes = {2, 1, 0});
// Same by enumerating every edge configuration of the domain.
double top_interface_probability_brute(const LatticePtr& lattice, const ModelParams& params,
                                       const std::vector<Plaquette>& I);

struct XiReport {
  double xi_fl = 0, xi_dob = 0;
  double xi_fl_alt = 0, xi_dob_alt = 0;  // second site order
  double order_gap = 0;                  // max relative disagreement
  double implied_c = 0;                  // Xi^dob = exp(-4 (beta + c) j n)
  bool inequality = false;               // Xi^fl >= Xi^dob
};

// Floor box and slab of side n and height m.
XiReport xi_ratio_check(int n, int m, const ModelParams& params, const std::vector<Plaquette>& I, int j);

}  // namespace pfsim
