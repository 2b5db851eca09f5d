#include "pfsim/rc.hpp"

#include <cmath>
#include <numeric>

#include "pfsim/union_find.hpp"

namespace pfsim {

EdgeConfig::EdgeConfig(LatticePtr lattice, bool open) : lat_(std::move(lattice)) {
  bits_.assign(lat_->domain().num_edges(), open ? 1 : 0);
}

int EdgeConfig::num_open() const { return std::accumulate(bits_.begin(), bits_.end(), 0); }

namespace {

inline int fk_vertex(const Lattice& lat, int v) {
  int V = lat.num_sites();
  return v < V ? v : V + lat.vertex_class(v);
}

UnionFind open_components(const EdgeConfig& omega) {
  const Lattice& lat = omega.lattice();
  const Domain& d = lat.domain();
  UnionFind uf(d.num_sites() + 2);
  const auto& edges = d.edges();
  for (int e = 0; e < d.num_edges(); ++e)
    if (omega.open(e)) uf.unite(edges[e].u, fk_vertex(lat, edges[e].v));
  return uf;
}

}  // namespace

ClusterLabeling cluster_labeling(const EdgeConfig& omega) {
  const Lattice& lat = omega.lattice();
  const int V = lat.num_sites();
  UnionFind uf = open_components(omega);
  ClusterLabeling cl;
  cl.label.assign(V + 2, -1);
  std::vector<int> root_label(V + 2, -1);
  for (int v = 0; v < V + 2; ++v) {
    if (v >= V && !lat.has_class(v - V)) continue;
    int r = uf.find(v);
    if (root_label[r] < 0) {
      root_label[r] = cl.num_clusters++;
      cl.touches_red.push_back(false);
      cl.touches_blue.push_back(false);
    }
    cl.label[v] = root_label[r];
  }
  if (lat.has_class(kRedClass)) {
    cl.red_label = cl.label[V + kRedClass];
    cl.touches_red[cl.red_label] = true;
  }
  if (lat.has_class(kBlueClass)) {
    cl.blue_label = cl.label[V + kBlueClass];
    cl.touches_blue[cl.blue_label] = true;
  }
  return cl;
}

int kappa(const EdgeConfig& omega) { return cluster_labeling(omega).num_clusters; }

double fk_log_weight(const EdgeConfig& omega, const ModelParams& params) {
  return omega.num_open() * std::log(params.odds()) + kappa(omega) * std::log(double(params.q));
}

bool check_disconnection(const EdgeConfig& omega) {
  const Lattice& lat = omega.lattice();
  if (lat.num_classes() < 2) return true;
  UnionFind uf = open_components(omega);
  const int V = lat.num_sites();
  return !uf.same(V + kRedClass, V + kBlueClass);
}

EdgeConfig couple_edges_from_spins(const SpinConfig& sigma, const ModelParams& params, Rng& rng) {
  EdgeConfig omega(sigma.lattice_ptr(), false);
  const auto& edges = sigma.domain().edges();
  const double p = params.p();
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    if (sigma[edges[e].u] != sigma[edges[e].v]) continue;
    if (rng.bernoulli(p)) omega.set(e, true);
  }
  return omega;
}

SpinConfig color_spins_from_edges(const EdgeConfig& omega, const ModelParams& params, Rng& rng) {
  const Lattice& lat = omega.lattice();
  if (!check_disconnection(omega))
    throw DisconnectionError("color_spins_from_edges: red and blue boundaries are connected");
  ClusterLabeling cl = cluster_labeling(omega);
  std::vector<Color> col(cl.num_clusters, 0);
  if (cl.red_label >= 0) col[cl.red_label] = lat.bc().red;
  if (cl.blue_label >= 0) col[cl.blue_label] = kBlue;
  for (int k = 0; k < cl.num_clusters; ++k)
    if (col[k] == 0) col[k] = static_cast<Color>(1 + rng.below(params.q));
  SpinConfig sigma(omega.lattice_ptr(), kBlue);
  for (int s = 0; s < lat.num_sites(); ++s) sigma.set(s, col[cl.label[s]]);
  return sigma;
}

}  // namespace pfsim
