#include "pfsim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "pfsim/union_find.hpp"

namespace pfsim {

namespace {

double log_sum_exp(const std::vector<double>& x) {
  double m = -INFINITY;
  for (double v : x) m = std::max(m, v);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double v : x) s += std::exp(v - m);
  return m + std::log(s);
}

}  // namespace

ExactPotts ExactPotts::enumerate(const LatticePtr& lattice, const ModelParams& params, double cap) {
  return enumerate_conditioned(lattice, params, nullptr, cap);
}

ExactPotts ExactPotts::enumerate_conditioned(const LatticePtr& lattice, const ModelParams& params,
                                             const EventFn& keep, double cap) {
  ExactPotts out;
  out.lat_ = lattice;
  out.params_ = params;
  std::vector<double> logw;
  for_each_coloring(
      lattice, params.q,
      [&](const SpinConfig& s) {
        if (keep && !keep(s)) logw.push_back(-INFINITY);
        else logw.push_back(-params.beta * double(energy(s)));
      },
      cap);
  out.log_z_ = log_sum_exp(logw);
  if (!std::isfinite(out.log_z_)) throw std::invalid_argument("ExactPotts: conditioning event has no states");
  out.probs_.resize(logw.size());
  for (std::size_t i = 0; i < logw.size(); ++i) out.probs_[i] = std::exp(logw[i] - out.log_z_);
  return out;
}

SpinConfig ExactPotts::state(std::int64_t idx) const {
  SpinConfig s(lat_, 1);
  for (int v = 0; v < lat_->num_sites(); ++v) {
    s.set(v, static_cast<Color>(1 + idx % params_.q));
    idx /= params_.q;
  }
  return s;
}

std::int64_t ExactPotts::index_of(const SpinConfig& s) const {
  std::int64_t idx = 0;
  for (int v = lat_->num_sites() - 1; v >= 0; --v) idx = idx * params_.q + (s[v] - 1);
  return idx;
}

double ExactPotts::probability(const EventFn& a) const {
  double p = 0.0;
  for (std::int64_t i = 0; i < size(); ++i)
    if (probs_[i] > 0.0 && a(state(i))) p += probs_[i];
  return p;
}

double ExactPotts::conditional(const EventFn& a, const EventFn& given) const {
  double pa = 0.0, pg = 0.0;
  for (std::int64_t i = 0; i < size(); ++i) {
    if (probs_[i] == 0.0) continue;
    SpinConfig s = state(i);
    if (!given(s)) continue;
    pg += probs_[i];
    if (a(s)) pa += probs_[i];
  }
  if (pg == 0.0) throw std::invalid_argument("ExactPotts::conditional: conditioning event has probability 0");
  return pa / pg;
}

std::vector<double> ExactPotts::site_marginal(int site) const {
  std::vector<double> m(params_.q, 0.0);
  std::int64_t stride = 1;
  for (int v = 0; v < site; ++v) stride *= params_.q;
  for (std::int64_t i = 0; i < size(); ++i) m[(i / stride) % params_.q] += probs_[i];
  return m;
}

namespace {

struct ClusterCount {
  int kappa;
  bool merged;
};

// kappa over ordinary vertices plus the present classes.
ClusterCount count_clusters(UnionFind& uf, int n, bool has_red, bool has_blue) {
  int k = 0;
  for (int v = 0; v < n + 2; ++v) {
    if (v == n && !has_red) continue;
    if (v == n + 1 && !has_blue) continue;
    if (uf.find(v) == v) ++k;
  }
  // Roots of absent class nodes that absorbed nothing are singletons and were
  // skipped above; an absent class can never be joined since no edge hits it.
  bool merged = has_red && has_blue && uf.same(n, n + 1);
  return {k, merged};
}

}  // namespace

ExactFk ExactFk::enumerate(const LatticePtr& lattice, const ModelParams& params, bool conditioned, double cap) {
  FkGraph g = domain_graph(*lattice, params.odds(), conditioned);
  const int E = g.num_edges();
  if (E > 40 || std::ldexp(1.0, E) > cap) throw EnumerationCapError("ExactFk: too many edges to enumerate");
  ExactFk out;
  out.lat_ = lattice;
  const std::uint64_t total = std::uint64_t{1} << E;
  std::vector<double> logw(total);
  const double lr = std::log(params.odds()), lq = std::log(double(params.q));
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    UnionFind uf(g.n + 2);
    int open = 0;
    for (int e = 0; e < E; ++e)
      if (mask >> e & 1) {
        ++open;
        const auto& ed = g.edges[e];
        uf.unite(ed.u, ed.v >= 0 ? ed.v : g.n + (ed.v == kRedNode ? 0 : 1));
      }
    auto cc = count_clusters(uf, g.n, g.has_red, g.has_blue);
    if (conditioned && cc.merged) logw[mask] = -INFINITY;
    else logw[mask] = open * lr + cc.kappa * lq;
  }
  out.log_z_ = log_sum_exp(logw);
  out.probs_.resize(total);
  for (std::uint64_t m = 0; m < total; ++m) out.probs_[m] = std::exp(logw[m] - out.log_z_);
  return out;
}

EdgeConfig ExactFk::config(std::uint64_t mask) const {
  EdgeConfig w(lat_, false);
  for (int e = 0; e < w.size(); ++e) w.set(e, (mask >> e) & 1);
  return w;
}

double ExactFk::probability(const std::function<bool(const EdgeConfig&)>& a) const {
  double p = 0.0;
  for (std::uint64_t m = 0; m < probs_.size(); ++m)
    if (probs_[m] > 0.0 && a(config(m))) p += probs_[m];
  return p;
}

double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("total_variation: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return 0.5 * s;
}

CouplingReport coupling_check(const LatticePtr& lattice, const ModelParams& params) {
  const Lattice& lat = *lattice;
  const int V = lat.num_sites();
  if (V > 15) throw EnumerationCapError("coupling_check: too many sites");
  FkGraph g = merged_domain_graph(lat, params.odds(), true);
  const int E = g.num_edges();
  if (E > 30) throw EnumerationCapError("coupling_check: too many merged edges");
  const int q = params.q;
  // Accumulate weight per cluster structure: label 0 red class, 1 blue
  // class, free clusters numbered from 2 by first site.
  std::unordered_map<std::uint64_t, double> by_partition;
  std::vector<double> lw(g.edges.size());
  for (int e = 0; e < E; ++e) lw[e] = g.edges[e].w;
  double Zfk = 0.0;
  CouplingReport rep;
  const std::uint64_t total = std::uint64_t{1} << E;
  std::vector<int> root_label(V + 2);
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    UnionFind uf(V + 2);
    double w = 1.0;
    for (int e = 0; e < E; ++e)
      if (mask >> e & 1) {
        const auto& ed = g.edges[e];
        uf.unite(ed.u, ed.v >= 0 ? ed.v : V + (ed.v == kRedNode ? 0 : 1));
        w *= lw[e];
      }
    auto cc = count_clusters(uf, V, g.has_red, g.has_blue);
    if (cc.merged) continue;
    ++rep.fk_states;
    std::fill(root_label.begin(), root_label.end(), -1);
    if (g.has_red) root_label[uf.find(V)] = 0;
    if (g.has_blue) root_label[uf.find(V + 1)] = 1;
    int next = 2;
    std::uint64_t key = 0;
    for (int v = 0; v < V; ++v) {
      int r = uf.find(v);
      if (root_label[r] < 0) root_label[r] = next++;
      key |= std::uint64_t(root_label[r]) << (4 * v);
    }
    key |= std::uint64_t(next) << 60;
    const double wt = w * std::pow(double(q), cc.kappa);
    by_partition[key] += wt;
    Zfk += wt;
  }
  std::int64_t nstates = 1;
  for (int v = 0; v < V; ++v) nstates *= q;
  std::vector<double> push(nstates, 0.0);
  std::vector<int> lab(V);
  for (const auto& [key, wt] : by_partition) {
    const int next = static_cast<int>(key >> 60);
    for (int v = 0; v < V; ++v) lab[v] = static_cast<int>((key >> (4 * v)) & 15);
    const int f = next - 2;
    std::int64_t ncol = 1;
    for (int i = 0; i < f; ++i) ncol *= q;
    const double share = wt / Zfk / double(ncol);
    std::vector<int> col(f, 1);
    for (std::int64_t c = 0; c < ncol; ++c) {
      std::int64_t idx = 0;
      for (int v = V - 1; v >= 0; --v) {
        int color = lab[v] == 0 ? lat.bc().red : lab[v] == 1 ? kBlue : col[lab[v] - 2];
        idx = idx * q + (color - 1);
      }
      push[idx] += share;
      for (int i = 0; i < f; ++i) {
        if (col[i] < q) {
          ++col[i];
          break;
        }
        col[i] = 1;
      }
    }
  }
  ExactPotts potts = ExactPotts::enumerate(lattice, params);
  rep.box = lat.domain().describe() + " " + lat.bc().str();
  rep.q = q;
  rep.beta = params.beta;
  rep.tv = total_variation(push, potts.probs());
  rep.merged_edges = E;
  const int classes = lat.num_classes();
  const double predicted = lat.domain().num_edges() * std::log1p(-params.p()) + std::log(Zfk) -
                           classes * std::log(double(q));
  rep.z_identity_gap = std::abs(potts.log_z() - predicted);
  return rep;
}

FreeEnergyReport free_energy_identity_check(const FkGraph& g, const std::vector<char>& tilde, int q,
                                            double theta0, double theta1, const std::string& name) {
  if (!(theta0 > 0.0 && theta0 < theta1 && theta1 < 1.0))
    throw std::invalid_argument("free_energy_identity_check: need 0 < theta0 < theta1 < 1");
  const int E = g.num_edges();
  if (static_cast<int>(tilde.size()) != E) throw std::invalid_argument("free_energy_identity_check: tilde size");
  if (E > 30) throw EnumerationCapError("free_energy_identity_check: too many edges");
  // Table of summed non-tilde weights keyed by (kappa, open tilde edges).
  std::map<std::pair<int, int>, double> table;
  const std::uint64_t total = std::uint64_t{1} << E;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    UnionFind uf(g.n + 2);
    double w = 1.0;
    int b = 0;
    for (int e = 0; e < E; ++e)
      if (mask >> e & 1) {
        const auto& ed = g.edges[e];
        uf.unite(ed.u, ed.v >= 0 ? ed.v : g.n + (ed.v == kRedNode ? 0 : 1));
        if (tilde[e]) ++b;
        else w *= ed.w;
      }
    auto cc = count_clusters(uf, g.n, g.has_red, g.has_blue);
    if (g.forbid_merge && cc.merged) continue;
    table[{cc.kappa, b}] += w;
  }
  auto logZ = [&](double theta) {
    const double lt = std::log(theta / (1.0 - theta)), lq = std::log(double(q));
    std::vector<double> terms;
    for (const auto& [kb, w] : table) terms.push_back(std::log(w) + kb.first * lq + kb.second * lt);
    return log_sum_exp(terms);
  };
  auto integrand = [&](double theta) {
    const double lt = std::log(theta / (1.0 - theta)), lq = std::log(double(q));
    std::vector<double> terms;
    std::vector<int> bs;
    for (const auto& [kb, w] : table) {
      terms.push_back(std::log(w) + kb.first * lq + kb.second * lt);
      bs.push_back(kb.second);
    }
    const double lz = log_sum_exp(terms);
    double eb = 0.0;
    for (std::size_t i = 0; i < terms.size(); ++i) eb += bs[i] * std::exp(terms[i] - lz);
    return eb / (theta * (1.0 - theta));
  };
  FreeEnergyReport r;
  r.name = name;
  r.theta0 = theta0;
  r.theta1 = theta1;
  r.lhs = logZ(theta1) - logZ(theta0);
  r.rhs = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, theta0, theta1, 20, 1e-13);
  r.gap = std::abs(r.lhs - r.rhs);
  return r;
}

TildeGraph single_edge_graph() {
  TildeGraph t;
  t.g.n = 2;
  t.g.edges.push_back({0, 1, 1.0});
  t.tilde = {1};
  return t;
}

TildeGraph floor_anchor_graph(int n, double w, int n_tilde) {
  if (n_tilde < 0 || n_tilde > n * n) throw std::invalid_argument("floor_anchor_graph: bad n_tilde");
  TildeGraph t;
  FkGraph& g = t.g;
  g.n = n * n;
  g.has_blue = true;
  auto id = [&](int i, int j) { return j * n + i; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      g.coords.push_back({i, j, -1});
      if (i + 1 < n) g.edges.push_back({id(i, j), id(i + 1, j), w});
      if (j + 1 < n) g.edges.push_back({id(i, j), id(i, j + 1), w});
      int lateral = (i == 0) + (i == n - 1) + (j == 0) + (j == n - 1);
      for (int k = 0; k < lateral + 1; ++k) g.edges.push_back({id(i, j), kBlueNode, w});
    }
  t.tilde.assign(g.edges.size(), 0);
  for (int v = 0; v < n_tilde; ++v) {
    g.edges.push_back({v, kBlueNode, 0.0});
    t.tilde.push_back(1);
  }
  return t;
}

TildeGraph conditioned_floor_graph(int n, int m, double w, int n_tilde) {
  auto lat = Lattice::make(DomainKind::floor_box, n, m, BoundaryCondition::floor());
  TildeGraph t;
  t.g = domain_graph(*lat, w, true);
  t.tilde.assign(t.g.edges.size(), 0);
  const Domain& d = lat->domain();
  int added = 0;
  for (int s = 0; s < d.num_sites() && added < n_tilde; ++s)
    if (d.coord(s).k == 0) {
      t.g.edges.push_back({s, kBlueNode, 0.0});
      t.tilde.push_back(1);
      ++added;
    }
  if (added < n_tilde) throw std::invalid_argument("conditioned_floor_graph: too many tilde edges");
  return t;
}

MonotonicityRow monotonicity_check(int n, int m, int h, const ModelParams& params, const Event& a) {
  if (h < 0) throw std::invalid_argument("monotonicity_check: h must be nonnegative");
  auto fl = Lattice::make(DomainKind::floor_box, n, m, BoundaryCondition::floor());
  auto soft = Lattice::make(DomainKind::slab_box, n, m, BoundaryCondition::split(h));
  for (const auto& lat : {fl, soft}) {
    Certification c = certify(a, lat, params.q);
    if (!c.increasing || !c.vhat_measurable)
      throw CertificationError("monotonicity_check: event " + a.name + " is not certified on " +
                               lat->domain().describe());
  }
  MonotonicityRow row;
  row.event = a.name;
  row.h = h;
  row.fl = ExactPotts::enumerate(fl, params).probability(a.eval);
  row.soft = ExactPotts::enumerate_conditioned(soft, params, blue_interface_in_upper_half).probability(a.eval);
  row.holds = row.fl <= row.soft + 1e-12;
  return row;
}

FkgRow fkg_check(const LatticePtr& lattice, const ModelParams& params, const Event& a, const Event& b) {
  for (const Event* e : {&a, &b}) {
    Certification c = certify(*e, lattice, params.q);
    if (!c.increasing || !c.fuzzy_measurable)
      throw CertificationError("fkg_check: event " + e->name + " is not certified increasing and fuzzy measurable");
  }
  ExactPotts mu = ExactPotts::enumerate(lattice, params);
  FkgRow row;
  row.a = a.name;
  row.b = b.name;
  row.box = lattice->domain().describe() + " " + lattice->bc().str();
  double pa = 0, pb = 0, pab = 0;
  for (std::int64_t i = 0; i < mu.size(); ++i) {
    SpinConfig s = mu.state(i);
    const bool A = a.eval(s), B = b.eval(s);
    if (A) pa += mu.prob(i);
    if (B) pb += mu.prob(i);
    if (A && B) pab += mu.prob(i);
  }
  row.joint = pab;
  row.product = pa * pb;
  row.holds = row.joint >= row.product - 1e-12;
  return row;
}

std::vector<Plaquette> flat_plaquettes(const Domain& d, int h) {
  std::vector<Plaquette> out;
  for (int j = d.i0(); j < d.i0() + d.n(); ++j)
    for (int i = d.i0(); i < d.i0() + d.n(); ++i) out.push_back({2 * i + 1, 2 * j + 1, 2 * h});
  std::sort(out.begin(), out.end());
  return out;
}

double top_interface_weight(const Lattice& lat, const std::vector<Plaquette>& I, const ModelParams& params,
                            std::array<int, 3> axes) {
  const Domain& d = lat.domain();
  std::vector<Plaquette> sorted = I;
  std::sort(sorted.begin(), sorted.end());
  VertexRegion above = region_above(lat, sorted);
  if (edge_boundary(d, above) != sorted) return 0.0;
  VertexRegion below{RegionTag::other, above.in};
  for (auto& b : below.in) b = !b;
  const double w = params.odds();
  FkGraph up = region_graph(lat, above, sorted, w, true);
  FkGraph down = region_graph(lat, below, sorted, w, false);
  const double zu = up.n ? fk_partition_frontier(up, params.q, coordinate_order(up, axes))
                         : std::pow(double(params.q), int(up.has_red) + int(up.has_blue));
  const double zd = down.n ? fk_partition_frontier(down, params.q, coordinate_order(down, axes))
                           : std::pow(double(params.q), int(down.has_red) + int(down.has_blue));
  return zu * zd;
}

double top_interface_probability_brute(const LatticePtr& lattice, const ModelParams& params,
                                       const std::vector<Plaquette>& I) {
  std::vector<Plaquette> sorted = I;
  std::sort(sorted.begin(), sorted.end());
  ExactFk fk = ExactFk::enumerate(lattice, params, true);
  double p = 0.0;
  for (std::int64_t m = 0; m < fk.size(); ++m) {
    if (fk.prob(m) == 0.0) continue;
    EdgeConfig w = fk.config(m);
    if (extract_fk_interface(w, FkSide::top).plaquettes == sorted) p += fk.prob(m);
  }
  return p;
}

XiReport xi_ratio_check(int n, int m, const ModelParams& params, const std::vector<Plaquette>& I, int j) {
  if (j < 1 || 2 * j > n) throw std::invalid_argument("xi_ratio_check: need 1 <= j <= n/2");
  int top = kNoHeight;
  for (const auto& f : I)
    if (f.orientation() == Orientation::horizontal) top = std::max(top, f.z2);
  if (top != kNoHeight && top >= 2 * j)
    throw std::invalid_argument("xi_ratio_check: need max column height of I below j");
  auto fl = Lattice::make(DomainKind::floor_box, n, m, BoundaryCondition::floor());
  auto dob = Lattice::make(DomainKind::slab_box, n, m, BoundaryCondition::dobrushin());
  XiReport r;
  auto ratio = [&](const Lattice& lat, std::array<int, 3> axes) {
    std::vector<Plaquette> lifted = theta_shift(I, j, lat.domain());
    const double w0 = top_interface_weight(lat, I, params, axes);
    if (w0 == 0.0) throw std::invalid_argument("xi_ratio_check: I is not realizable as a top interface");
    return top_interface_weight(lat, lifted, params, axes) / w0;
  };
  r.xi_fl = ratio(*fl, {2, 1, 0});
  r.xi_dob = ratio(*dob, {2, 1, 0});
  r.xi_fl_alt = ratio(*fl, {2, 0, 1});
  r.xi_dob_alt = ratio(*dob, {2, 0, 1});
  r.order_gap = std::max(std::abs(r.xi_fl - r.xi_fl_alt) / r.xi_fl, std::abs(r.xi_dob - r.xi_dob_alt) / r.xi_dob);
  r.inequality = r.xi_fl >= r.xi_dob;
  r.implied_c = -std::log(r.xi_dob) / (4.0 * j * n) - params.beta;
  return r;
}

}  // namespace pfsim
