#include "pfsim/potts.hpp"

#include <array>
#include <cmath>

#include "pfsim/interfaces.hpp"
#include "pfsim/union_find.hpp"

namespace pfsim {

SpinConfig::SpinConfig(LatticePtr lattice, Color fill) : lat_(std::move(lattice)) {
  const int V = lat_->num_sites();
  c_.resize(lat_->num_vertices());
  for (int v = 0; v < V; ++v) c_[v] = fill;
  for (int v = V; v < lat_->num_vertices(); ++v) c_[v] = lat_->color(v);
}

void for_each_coloring(const LatticePtr& lattice, int q, const std::function<void(const SpinConfig&)>& fn,
                       double cap) {
  const int V = lattice->num_sites();
  if (std::pow(double(q), V) > cap) throw EnumerationCapError("for_each_coloring: q^V exceeds the enumeration cap");
  SpinConfig s(lattice, 1);
  while (true) {
    fn(s);
    int v = 0;
    while (v < V && s[v] == q) s.set(v++, 1);
    if (v == V) break;
    s.set(v, s[v] + 1);
  }
}

SpinConfig SpinConfig::ground_state(LatticePtr lattice) {
  SpinConfig s(lattice, lattice->bc().red);
  const auto& d = lattice->domain();
  for (int v = 0; v < d.num_sites(); ++v) {
    if (lattice->bc().kind == BoundaryCondition::Kind::split)
      s.c_[v] = lattice->bc().color_at_layer(d.coord(v).k);
  }
  return s;
}

bool SpinConfig::boundary_intact() const {
  for (int v = num_sites(); v < lat_->num_vertices(); ++v)
    if (c_[v] != lat_->color(v)) return false;
  return true;
}

std::int64_t energy(const SpinConfig& sigma) {
  std::int64_t e = 0;
  for (const auto& ed : sigma.domain().edges()) e += sigma[ed.u] != sigma[ed.v];
  return e;
}

ChainState::ChainState(SpinConfig s, std::uint64_t seed) : sigma(std::move(s)), rng(seed) {
  energy = pfsim::energy(sigma);
}

namespace {

struct HeatBathTable {
  std::array<double, 7> w{};
  explicit HeatBathTable(double beta) {
    for (int k = 0; k <= 6; ++k) w[k] = std::exp(beta * (k - 6));
  }
};

// Draws a color at site s from the Gibbs conditional; fills cnt.
inline Color draw_color(const Color* c, const int* nb, int q, const HeatBathTable& t, Rng& rng,
                        std::array<int, 16>& cnt) {
  for (int a = 1; a <= q; ++a) cnt[a] = 0;
  for (int d = 0; d < 6; ++d) ++cnt[c[nb[d]] & 15];
  double total = 0.0;
  for (int a = 1; a <= q; ++a) total += t.w[cnt[a]];
  double u = rng.uniform() * total;
  for (int a = 1; a < q; ++a) {
    u -= t.w[cnt[a]];
    if (u < 0.0) return static_cast<Color>(a);
  }
  return static_cast<Color>(q);
}

}  // namespace

void heat_bath_sweep(ChainState& st, const ModelParams& params) {
  const Domain& d = st.sigma.domain();
  HeatBathTable t(params.beta);
  std::array<int, 16> cnt{};
  Color* c = st.sigma.data();
  const int V = d.num_sites();
  for (int s = 0; s < V; ++s) {
    Color old = c[s];
    Color a = draw_color(c, d.neighbors(s), params.q, t, st.rng, cnt);
    if (a != old) {
      st.energy += cnt[old] - cnt[a];
      c[s] = a;
    }
  }
  ++st.sweep;
}

std::int64_t heat_bath_sweep_restricted(ChainState& st, const ModelParams& params,
                                        const std::function<bool(const SpinConfig&)>& allowed,
                                        std::int64_t* checked) {
  const Domain& d = st.sigma.domain();
  HeatBathTable t(params.beta);
  std::array<int, 16> cnt{};
  Color* c = st.sigma.data();
  const int V = d.num_sites();
  std::int64_t vetoed = 0;
  for (int s = 0; s < V; ++s) {
    Color old = c[s];
    Color a = draw_color(c, d.neighbors(s), params.q, t, st.rng, cnt);
    if (a == old) continue;
    c[s] = a;
    if (old == kBlue) {
      if (checked) ++*checked;
      if (!allowed(st.sigma)) {
        c[s] = old;
        ++vetoed;
        continue;
      }
    }
    st.energy += cnt[old] - cnt[a];
  }
  ++st.sweep;
  return vetoed;
}

void sw_sweep_frozen_boundary(ChainState& st, const ModelParams& params) {
  const Lattice& lat = st.sigma.lattice();
  const Domain& d = lat.domain();
  const int V = d.num_sites();
  const double p = params.p();
  Color* c = st.sigma.data();
  UnionFind uf(V + 2);
  for (const auto& e : d.edges()) {
    if (c[e.u] != c[e.v]) continue;
    if (!st.rng.bernoulli(p)) continue;
    int w = e.v < V ? e.v : V + lat.vertex_class(e.v);
    uf.unite(e.u, w);
  }
  const int r0 = uf.find(V), r1 = uf.find(V + 1);
  std::vector<Color> fresh(V + 2, 0);
  for (int s = 0; s < V; ++s) {
    int r = uf.find(s);
    if (r == r0 || r == r1) continue;
    if (fresh[r] == 0) fresh[r] = static_cast<Color>(1 + st.rng.below(params.q));
    c[s] = fresh[r];
  }
  st.energy = energy(st.sigma);
  ++st.sweep;
}

SoftFloorReport sample_conditional_soft_floor(
    const LatticePtr& lattice, const ModelParams& params, std::int64_t n_samples,
    std::uint64_t seed, SoftFloorMethod method, const SoftFloorOptions& opt,
    const std::function<void(const SpinConfig&, std::uint64_t)>& emit) {
  if (lattice->domain().kind() != DomainKind::slab_box ||
      lattice->bc().kind != BoundaryCondition::Kind::split || lattice->bc().h < 0)
    throw std::invalid_argument("soft-floor sampling needs a SlabBox with Split(h), h >= 0");
  SoftFloorReport rep;
  ChainState st(SpinConfig::ground_state(lattice), seed);
  if (method == SoftFloorMethod::rejection) {
    for (int b = 0; b < opt.burnin; ++b) {
      heat_bath_sweep(st, params);
      sw_sweep_frozen_boundary(st, params);
    }
    while (rep.emitted < n_samples) {
      for (int b = 0; b < opt.interval; ++b) {
        heat_bath_sweep(st, params);
        sw_sweep_frozen_boundary(st, params);
      }
      ++rep.attempts;
      if (blue_interface_in_upper_half(st.sigma)) {
        ++rep.accepted;
        ++rep.emitted;
        emit(st.sigma, st.sweep);
      }
      if (rep.attempts >= opt.budget && rep.acceptance_rate() < 1e-6)
        throw SamplingError("soft-floor rejection sampling: acceptance rate below 1e-6 after " +
                            std::to_string(rep.attempts) + " attempts");
    }
    return rep;
  }
  auto allowed = [](const SpinConfig& s) { return blue_interface_in_upper_half(s); };
  std::int64_t checked = 0, vetoed = 0;
  for (int b = 0; b < opt.burnin; ++b) vetoed += heat_bath_sweep_restricted(st, params, allowed, &checked);
  while (rep.emitted < n_samples) {
    for (int b = 0; b < opt.interval; ++b)
      vetoed += heat_bath_sweep_restricted(st, params, allowed, &checked);
    ++rep.emitted;
    emit(st.sigma, st.sweep);
  }
  rep.attempts = checked;
  rep.accepted = checked - vetoed;
  return rep;
}

}  // namespace pfsim
