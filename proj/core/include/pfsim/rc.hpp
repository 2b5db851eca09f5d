#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pfsim/lattice.hpp"
#include "pfsim/potts.hpp"
#include "pfsim/rng.hpp"

namespace pfsim {

// One bit per domain edge, in the domain's canonical edge order.
class EdgeConfig {
 public:
  EdgeConfig(LatticePtr lattice, bool open = false);

  const Lattice& lattice() const { return *lat_; }
  const LatticePtr& lattice_ptr() const { return lat_; }
  const Domain& domain() const { return lat_->domain(); }
  int size() const { return static_cast<int>(bits_.size()); }
  bool open(int e) const { return bits_[e] != 0; }
  void set(int e, bool open) { bits_[e] = open ? 1 : 0; }
  int num_open() const;
  const std::vector<std::uint8_t>& bits() const { return bits_; }
  bool operator==(const EdgeConfig& o) const { return bits_ == o.bits_; }

 private:
  LatticePtr lat_;
  std::vector<std::uint8_t> bits_;
};

struct DisconnectionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Vertices 0..V-1 are interior sites, V + kRedClass and V + kBlueClass the
// wiring-class super-vertices.  Cluster ids are dense, ordered by the lowest
// vertex they contain.
struct ClusterLabeling {
  std::vector<int> label;  // per interior site and class vertex
  int num_clusters = 0;    // kappa, counting only classes that exist
  std::vector<bool> touches_red, touches_blue;
  int red_label = -1, blue_label = -1;
};

ClusterLabeling cluster_labeling(const EdgeConfig& omega);
int kappa(const EdgeConfig& omega);
double fk_log_weight(const EdgeConfig& omega, const ModelParams& params);
bool check_disconnection(const EdgeConfig& omega);

EdgeConfig couple_edges_from_spins(const SpinConfig& sigma, const ModelParams& params, Rng& rng);
SpinConfig color_spins_from_edges(const EdgeConfig& omega, const ModelParams& params, Rng& rng);

}  // namespace pfsim
