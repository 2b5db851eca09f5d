#include <doctest.h>

#include <cmath>
#include <map>
#include <queue>

#include "pfsim/fkgraph.hpp"
#include "pfsim/oracle.hpp"
#include "pfsim/sampling.hpp"
#include "pfsim/stats.hpp"

using namespace pfsim;

namespace {

LatticePtr floor_box(int n, int m) { return Lattice::make(DomainKind::floor_box, n, m, BoundaryCondition::floor()); }

// Draws from an exact measure by inversion.
std::int64_t draw(const std::vector<double>& probs, Rng& rng) {
  double u = rng.uniform(), acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return static_cast<std::int64_t>(i);
  }
  return static_cast<std::int64_t>(probs.size()) - 1;
}

double log_sum_exp(const std::vector<double>& x) {
  double m = -INFINITY;
  for (double v : x) m = std::max(m, v);
  double s = 0;
  for (double v : x) s += std::exp(v - m);
  return m + std::log(s);
}

}  // namespace

TEST_CASE("single edge, q = 2, p = 1/2") {
  FkGraph g;
  g.n = 2;
  g.edges.push_back({0, 1, 1.0});
  CHECK(fk_partition_brute(g, 2) == doctest::Approx(6.0));  // open 1*2, closed 4
  FkGraph closed = g;
  closed.edges.clear();
  CHECK(fk_partition_brute(closed, 2) == doctest::Approx(4.0));
  // P(open) = 2 / 6
  CHECK(2.0 / fk_partition_brute(g, 2) == doctest::Approx(1.0 / 3));
}

TEST_CASE("all edges closed: kappa = V + 2") {
  auto lat = floor_box(2, 1);
  EdgeConfig w(lat, false);
  CHECK(kappa(w) == lat->num_sites() + 2);
  auto lab = cluster_labeling(w);
  CHECK(lab.num_clusters == lat->num_sites() + 2);
}

TEST_CASE("sum of FK weights on 2x2x1 equals the oracle partition function") {
  auto lat = floor_box(2, 1);
  const ModelParams p(3, 0.9);
  const int E = lat->domain().num_edges();
  std::vector<double> lw;
  for (std::uint64_t m = 0; m < (1ull << E); ++m) {
    EdgeConfig w(lat, false);
    for (int e = 0; e < E; ++e) w.set(e, (m >> e) & 1);
    lw.push_back(fk_log_weight(w, p));
  }
  auto ex = ExactFk::enumerate(lat, p, false);
  CHECK(log_sum_exp(lw) == doctest::Approx(ex.log_z()).epsilon(1e-12));
  CHECK(std::log(fk_partition_brute(domain_graph(*lat, p.odds(), false), 3)) ==
        doctest::Approx(ex.log_z()).epsilon(1e-12));
}

TEST_CASE("edge coupling: p = 1 opens exactly the monochromatic edges, bichromatic edges stay closed") {
  auto lat = Lattice::make(DomainKind::slab_box, 3, 2, BoundaryCondition::dobrushin());
  Rng rng(1);
  SpinConfig s(lat, kBlue);
  for (int v = 0; v < lat->num_sites(); ++v) s.set(v, static_cast<Color>(1 + rng.below(3)));
  const Domain& d = lat->domain();
  auto color = [&](int v) { return d.is_interior(v) ? s[v] : lat->color(v); };
  auto w = couple_edges_from_spins(s, ModelParams(3, 50.0), rng);
  for (int e = 0; e < d.num_edges(); ++e) CHECK(w.open(e) == (color(d.edges()[e].u) == color(d.edges()[e].v)));
  auto w2 = couple_edges_from_spins(s, ModelParams(3, 0.5), rng);
  for (int e = 0; e < d.num_edges(); ++e)
    if (color(d.edges()[e].u) != color(d.edges()[e].v)) CHECK(!w2.open(e));
}

TEST_CASE("edge coupling reproduces the joint law of (sigma, number of open edges)") {
  auto lat = floor_box(2, 1);
  const ModelParams p(2, 0.8);
  auto ex = ExactPotts::enumerate(lat, p);
  const Domain& d = lat->domain();
  const int E = d.num_edges();
  // exact: given sigma, |omega| ~ Binomial(#monochromatic, p)
  std::map<std::pair<std::int64_t, int>, double> exact, emp;
  for (std::int64_t i = 0; i < ex.size(); ++i) {
    SpinConfig s = ex.state(i);
    int mono = 0;
    for (const auto& e : d.edges()) {
      Color a = s[e.u], b = d.is_interior(e.v) ? s[e.v] : lat->color(e.v);
      mono += a == b;
    }
    for (int k = 0; k <= mono; ++k)
      exact[{i, k}] += ex.prob(i) * std::exp(std::lgamma(mono + 1) - std::lgamma(k + 1) - std::lgamma(mono - k + 1)) *
                       std::pow(p.p(), k) * std::pow(1 - p.p(), mono - k);
  }
  Rng rng(8);
  const int N = 100000;
  for (int t = 0; t < N; ++t) {
    auto i = draw(ex.probs(), rng);
    auto w = couple_edges_from_spins(ex.state(i), p, rng);
    emp[{i, w.num_open()}] += 1.0 / N;
  }
  double tv = 0;
  for (const auto& [k, v] : exact) tv += std::abs(v - (emp.count(k) ? emp[k] : 0.0));
  for (const auto& [k, v] : emp)
    if (!exact.count(k)) tv += v;
  CHECK(0.5 * tv < 0.02);
  (void)E;
}

TEST_CASE("spin coloring: degenerate cases") {
  auto red = Lattice::make(DomainKind::slab_box, 2, 1, BoundaryCondition::red_all());
  Rng rng(4);
  auto s = color_spins_from_edges(EdgeConfig(red, true), ModelParams(2, 1.0), rng);
  for (int v = 0; v < red->num_sites(); ++v) CHECK(s[v] == kRed);
  auto lat = floor_box(2, 1);
  std::vector<double> x;
  for (int t = 0; t < 20000; ++t) x.push_back(color_spins_from_edges(EdgeConfig(lat, false), ModelParams(2, 1.0), rng)[0] == kBlue);
  auto e = estimate(x);
  CHECK(std::abs(e.mean - 0.5) <= 3 * e.stderr_);
}

TEST_CASE("color -> edges -> color preserves the Potts law") {
  auto lat = floor_box(2, 1);
  const ModelParams p(3, 0.7);
  auto ex = ExactPotts::enumerate(lat, p);
  Rng rng(12);
  const int N = 100000;
  std::vector<double> emp(ex.size(), 0.0);
  for (int t = 0; t < N; ++t) {
    auto w = couple_edges_from_spins(ex.state(draw(ex.probs(), rng)), p, rng);
    REQUIRE(check_disconnection(w));
    emp[ex.index_of(color_spins_from_edges(w, p, rng))] += 1.0 / N;
  }
  CHECK(total_variation(emp, ex.probs()) < 0.02);
}

TEST_CASE("disconnection event") {
  auto lat = floor_box(2, 2);
  CHECK(check_disconnection(EdgeConfig(lat, false)));
  CHECK_FALSE(check_disconnection(EdgeConfig(lat, true)));
  const Domain& d = lat->domain();
  EdgeConfig w(lat, false);
  const int a = d.vertex_id(-1, -1, 0), b = d.vertex_id(-1, -1, 1);
  w.set(d.edge_at(a, 0), true);
  w.set(d.edge_at(a, 5), true);
  w.set(d.edge_at(b, 5), true);
  CHECK_FALSE(check_disconnection(w));
}

TEST_CASE("cluster labels agree with breadth-first search") {
  auto lat = floor_box(2, 2);
  const Domain& d = lat->domain();
  const int V = d.num_sites();
  Rng rng(2);
  CHECK(cluster_labeling(EdgeConfig(Lattice::make(DomainKind::slab_box, 2, 1, BoundaryCondition::red_all()), true))
            .num_clusters == 1);
  for (int t = 0; t < 200; ++t) {
    EdgeConfig w(lat, false);
    for (int e = 0; e < w.size(); ++e) w.set(e, rng.bernoulli(0.4));
    auto lab = cluster_labeling(w);
    // BFS over sites plus class nodes V, V+1
    std::vector<std::vector<int>> adj(V + 2);
    for (int e = 0; e < w.size(); ++e)
      if (w.open(e)) {
        int u = d.edges()[e].u, v = d.edges()[e].v;
        if (!d.is_interior(v)) v = V + lat->vertex_class(v);
        adj[u].push_back(v);
        adj[v].push_back(u);
      }
    std::vector<int> comp(V + 2, -1);
    int nc = 0;
    for (int s = 0; s < V + 2; ++s) {
      if (comp[s] >= 0) continue;
      std::queue<int> qu;
      qu.push(s);
      comp[s] = nc;
      while (!qu.empty()) {
        int x = qu.front();
        qu.pop();
        for (int y : adj[x])
          if (comp[y] < 0) comp[y] = nc, qu.push(y);
      }
      ++nc;
    }
    CHECK(lab.num_clusters == nc);
    for (int a = 0; a < V + 2; ++a)
      for (int b = 0; b < V + 2; ++b) CHECK((lab.label[a] == lab.label[b]) == (comp[a] == comp[b]));
  }
}

TEST_CASE("coupled edges always satisfy the disconnection event") {
  auto lat = Lattice::make(DomainKind::slab_box, 4, 2, BoundaryCondition::dobrushin());
  ChainState st(SpinConfig::ground_state(lat), 5);
  Rng rng(6);
  for (int t = 0; t < 300; ++t) {
    chain_step(st, ModelParams(2, 0.6), true, true);
    CHECK(check_disconnection(couple_edges_from_spins(st.sigma, ModelParams(2, 0.6), rng)));
  }
}

TEST_CASE("FK log weight is additive over disjoint components") {
  auto lat = Lattice::make(DomainKind::slab_box, 4, 2, BoundaryCondition::dobrushin());
  const Domain& d = lat->domain();
  const ModelParams p(3, 1.1);
  EdgeConfig a(lat, false), b(lat, false), ab(lat, false);
  // two interior edges far apart
  const int s1 = d.vertex_id(-2, -2, -1), s2 = d.vertex_id(1, 1, 0);
  a.set(d.edge_at(s1, 3), true);
  b.set(d.edge_at(s2, 2), true);
  ab.set(d.edge_at(s1, 3), true);
  ab.set(d.edge_at(s2, 2), true);
  const double w0 = fk_log_weight(EdgeConfig(lat, false), p);
  CHECK(fk_log_weight(ab, p) == doctest::Approx(fk_log_weight(a, p) + fk_log_weight(b, p) - w0).epsilon(1e-12));
}
