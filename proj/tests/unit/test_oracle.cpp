#include <doctest.h>

#include <cmath>

#include "pfsim/oracle.hpp"

using namespace pfsim;

TEST_CASE("exact Potts at beta = 0 is uniform") {
  auto lat = Lattice::make(DomainKind::floor_box, 2, 1, BoundaryCondition::floor());
  auto ex = ExactPotts::enumerate(lat, ModelParams(3, 0.0));
  CHECK(ex.size() == 81);
  for (double p : ex.probs()) CHECK(p == doctest::Approx(1.0 / 81));
  for (std::int64_t i = 0; i < ex.size(); i += 7) CHECK(ex.index_of(ex.state(i)) == i);
  auto m = ex.site_marginal(0);
  for (double v : m) CHECK(v == doctest::Approx(1.0 / 3));
}

TEST_CASE("Potts partition function from the transfer matrix") {
  for (int q : {2, 3})
    for (double beta : {0.5, 1.1}) {
      auto lat = Lattice::make(DomainKind::floor_box, 2, 2, BoundaryCondition::floor());
      const ModelParams p(q, beta);
      auto ex = ExactPotts::enumerate(lat, p);
      auto g = domain_graph(*lat, p.odds(), true);
      const double zfk = fk_partition_frontier(g, q, coordinate_order(g, {2, 1, 0}));
      const int E = lat->domain().num_edges();
      const double rhs = E * std::log(1 - p.p()) + std::log(zfk) - lat->num_classes() * std::log(double(q));
      CHECK(ex.log_z() == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("conditioned FK gives no weight to connecting configurations") {
  auto lat = Lattice::make(DomainKind::floor_box, 2, 1, BoundaryCondition::floor());
  const ModelParams p(2, 0.8);
  auto fk = ExactFk::enumerate(lat, p, true);
  CHECK(fk.probability([](const EdgeConfig& w) { return !check_disconnection(w); }) == 0.0);
  auto free = ExactFk::enumerate(lat, p, false);
  CHECK(free.probability([](const EdgeConfig& w) { return !check_disconnection(w); }) > 0.0);
  double tot = 0;
  for (std::int64_t i = 0; i < fk.size(); ++i) tot += fk.prob(i);
  CHECK(tot == doctest::Approx(1.0));
}

TEST_CASE("coupling oracle") {
  auto r = coupling_check(Lattice::make(DomainKind::floor_box, 2, 1, BoundaryCondition::floor()), ModelParams(3, 0.9));
  CHECK(r.tv < 1e-10);
  CHECK(r.z_identity_gap < 1e-9);
  auto s = coupling_check(Lattice::make(DomainKind::slab_box, 2, 1, BoundaryCondition::dobrushin()), ModelParams(2, 0.9));
  CHECK(s.tv < 1e-10);
}

TEST_CASE("total variation") {
  CHECK(total_variation({0.5, 0.5}, {1.0, 0.0}) == doctest::Approx(0.5));
  CHECK(total_variation({0.2, 0.8}, {0.2, 0.8}) == 0.0);
}

TEST_CASE("free-energy identity") {
  const ModelParams p(2, 0.7);
  auto none = floor_anchor_graph(2, p.odds(), 0);
  CHECK(free_energy_identity_check(none.g, none.tilde, 2, 0.2, 0.8).gap < 1e-12);
  auto one = single_edge_graph();
  auto r1 = free_energy_identity_check(one.g, one.tilde, 3, 0.01, 0.99);
  CHECK(r1.gap < 1e-8);
  CHECK(r1.lhs != 0.0);
  auto a = floor_anchor_graph(2, p.odds(), 2);
  CHECK(free_energy_identity_check(a.g, a.tilde, 2, 1e-6, 1 - 1e-6).gap < 1e-6);
  auto c = conditioned_floor_graph(2, 1, p.odds(), 1);
  CHECK(free_energy_identity_check(c.g, c.tilde, 3, 0.2, 0.8).gap < 1e-6);
}

TEST_CASE("top interface law: dynamic programming against brute force") {
  auto lat = Lattice::make(DomainKind::floor_box, 2, 1, BoundaryCondition::floor());
  const ModelParams p(2, 0.9);
  auto flat = flat_plaquettes(lat->domain(), 0);
  const double brute = top_interface_probability_brute(lat, p, flat);
  const double w = top_interface_weight(*lat, flat, p);
  auto g = domain_graph(*lat, p.odds(), true);
  const double z = fk_partition_frontier(g, 2, coordinate_order(g, {2, 1, 0}));
  CHECK(w / z == doctest::Approx(brute).epsilon(1e-10));
  CHECK(top_interface_weight(*lat, flat, p, {2, 0, 1}) == doctest::Approx(w).epsilon(1e-12));
}

TEST_CASE("xi ratio preconditions") {
  const ModelParams p(2, 1.0);
  Domain d(DomainKind::floor_box, 2, 2);
  CHECK_THROWS_AS(xi_ratio_check(2, 2, p, flat_plaquettes(d, 0), 0), std::invalid_argument);
  CHECK_THROWS_AS(xi_ratio_check(2, 2, p, flat_plaquettes(d, 0), 2), std::invalid_argument);
  CHECK_THROWS_AS(xi_ratio_check(2, 2, p, flat_plaquettes(d, 1), 1), std::invalid_argument);
}

TEST_CASE("monotonicity oracle") {
  const ModelParams p(2, 0.9);
  auto e = event_in_vhat_blue(0, 0, 0);
  auto r = monotonicity_check(2, 1, 0, p, e);
  CHECK(r.holds);
  CHECK(r.fl <= r.soft);
  CHECK_THROWS_AS(monotonicity_check(2, 1, 0, p, event_site_red(0, 0, 0)), CertificationError);
}

TEST_CASE("FKG oracle") {
  auto lat = Lattice::make(DomainKind::floor_box, 2, 1, BoundaryCondition::floor());
  auto r = fkg_check(lat, ModelParams(3, 0.7), event_site_blue(0, 0, 0), event_site_blue(1, 0, 0));
  CHECK(r.holds);
  CHECK(r.joint >= r.product);
  auto z = fkg_check(lat, ModelParams(3, 0.0), event_site_blue(0, 0, 0), event_site_blue(-1, 0, 0));
  CHECK(z.joint == doctest::Approx(z.product));
}
