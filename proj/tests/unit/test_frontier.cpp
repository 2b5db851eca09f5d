#include <doctest.h>

#include <cmath>

#include "pfsim/fkgraph.hpp"
#include "pfsim/rng.hpp"

using namespace pfsim;

namespace {

FkGraph random_graph(Rng& rng, int n, int n_edges, bool with_s) {
  FkGraph g;
  g.n = n;
  g.has_red = rng.bernoulli(0.7);
  g.has_blue = rng.bernoulli(0.7);
  g.forbid_merge = rng.bernoulli(0.5);
  for (int v = 0; v < n; ++v) g.coords.push_back({int(rng.below(3)), int(rng.below(3)), v});
  for (int e = 0; e < n_edges; ++e) {
    const int u = int(rng.below(n));
    int v = int(rng.below(n + 2));
    if (v == n) v = g.has_red ? kRedNode : 0;
    if (v == n + 1) v = g.has_blue ? kBlueNode : 0;
    if (v == u) v = (u + 1) % n;
    g.edges.push_back({u, v, 0.2 + 2.0 * rng.uniform()});
  }
  if (with_s && g.has_red) {
    g.must_reach_red.assign(n, 0);
    g.must_reach_red[rng.below(n)] = 1;
  }
  return g;
}

}  // namespace

TEST_CASE("frontier matches brute force on random graphs") {
  Rng rng(2024);
  for (int t = 0; t < 300; ++t) {
    const int n = 2 + int(rng.below(6));
    auto g = random_graph(rng, n, 1 + int(rng.below(12)), t % 2 == 1);
    for (int q : {2, 3}) {
      const double b = fk_partition_brute(g, q);
      for (auto ax : {std::array<int, 3>{2, 1, 0}, std::array<int, 3>{0, 1, 2}}) {
        const double f = fk_partition_frontier(g, q, coordinate_order(g, ax));
        CHECK(f == doctest::Approx(b).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("merged boundary edges keep the partition function") {
  auto lat = Lattice::make(DomainKind::floor_box, 2, 2, BoundaryCondition::floor());
  for (bool forbid : {true, false}) {
    auto g = domain_graph(*lat, 0.8, forbid);
    auto m = merged_domain_graph(*lat, 0.8, forbid);
    CHECK(m.num_edges() < g.num_edges());
    const double a = fk_partition_frontier(g, 3, coordinate_order(g, {2, 1, 0}));
    const double b = fk_partition_frontier(m, 3, coordinate_order(m, {2, 1, 0}));
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
    CHECK(fk_partition_brute(m, 3) == doctest::Approx(b).epsilon(1e-10));
  }
}

TEST_CASE("single edges by hand") {
  FkGraph g;
  g.n = 2;
  g.edges.push_back({0, 1, 1.5});
  // (1 + 1.5 / q) q^2
  CHECK(fk_partition_brute(g, 2) == doctest::Approx(4 + 3));
  CHECK(fk_partition_frontier(g, 2, {0, 1}) == doctest::Approx(7));
  FkGraph h;
  h.n = 1;
  h.has_red = h.has_blue = true;
  h.edges = {{0, kRedNode, 1.0}, {0, kBlueNode, 1.0}};
  // classes: q^2; site free or attached to one class, never both
  CHECK(fk_partition_frontier(h, 2, {0}) == doctest::Approx(4 * (2 + 1 + 1)));
  h.forbid_merge = false;
  CHECK(fk_partition_frontier(h, 2, {0}) == doctest::Approx(4 * (2 + 1 + 1) + 2));
}
