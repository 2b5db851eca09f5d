#include <doctest.h>

#include <cmath>

#include "pfsim/oracle.hpp"
#include "pfsim/rates.hpp"

using namespace pfsim;

namespace {

RateSeries synthetic(const std::vector<double>& rates, double se) {
  RateSeries s{"syn", {}};
  for (std::size_t h = 0; h < rates.size(); ++h) {
    RatePoint r;
    r.h = int(h);
    r.usable = true;
    r.hits = 100;
    r.rate = rates[h];
    r.rate_stderr = se;
    s.points.push_back(r);
  }
  return s;
}

}  // namespace

TEST_CASE("pillars of explicit configurations") {
  auto lat = Lattice::make(DomainKind::slab_box, 4, 3, BoundaryCondition::dobrushin());
  const Domain& d = lat->domain();
  SpinConfig s = SpinConfig::ground_state(lat);
  CHECK(nonred_pillar(s, {0, 0, 0}).empty());
  CHECK(nonred_pillar(s, {0, 0, 0}).height == 0);
  s.set(d.vertex_id(0, 0, 0), kBlue);
  s.set(d.vertex_id(0, 0, 1), kBlue);
  auto p = nonred_pillar(s, {0, 0, 0});
  CHECK(p.sites.size() == 2u);
  CHECK(p.height == 2);
  // a third color counts as non-red too
  s.set(d.vertex_id(1, 0, 1), 3);
  CHECK(nonred_pillar(s, {0, 0, 0}).sites.size() == 3u);
  auto ph = pillar_heights(s);
  CHECK(ph[d.column_index(0, 0)] == 2);
  CHECK(ph[d.column_index(1, 0)] == 0);
  CHECK_THROWS_AS(nonred_pillar(s, {0, 0, 1}), std::invalid_argument);
}

TEST_CASE("pillar heights agree with the single-pillar routine on samples") {
  auto lat = Lattice::make(DomainKind::slab_box, 5, 3, BoundaryCondition::dobrushin());
  const Domain& d = lat->domain();
  const ModelParams p(3, 0.7);
  ChainState st(SpinConfig::ground_state(lat), 3);
  for (int t = 0; t < 80; ++t) {
    chain_step(st, p, true, true);
    auto ph = pillar_heights(st.sigma);
    for (int j = d.i0(); j < d.i0() + d.n(); ++j)
      for (int i = d.i0(); i < d.i0() + d.n(); ++i) {
        auto pl = nonred_pillar(st.sigma, {i, j, 0});
        CHECK(ph[d.column_index(i, j)] == pl.height);
        CHECK(pl.height <= d.k_end());
      }
  }
}

TEST_CASE("connection events are nested and consistent with the red cluster") {
  auto lat = Lattice::make(DomainKind::slab_box, 5, 3, BoundaryCondition::red_all());
  const ModelParams p(2, 0.6);
  ChainState st(SpinConfig::ground_state(lat), 4);
  for (int t = 0; t < 80; ++t) {
    chain_step(st, p, true, true);
    auto reach = nonred_reach(st.sigma);
    auto red = potts_cluster(st.sigma, PottsSide::red);
    for (int s = 0; s < lat->num_sites(); ++s) {
      CHECK((reach[s] == -1) == red.contains(s));
      CHECK(connection_event(reach[s], 0) == connection_event(reach[s], 1));
      for (int h = 1; h < 4; ++h) CHECK((connection_event(reach[s], h + 1) <= connection_event(reach[s], h)));
    }
  }
}

TEST_CASE("connection probability at h = 0 against exact enumeration") {
  auto lat = Lattice::make(DomainKind::slab_box, 2, 1, BoundaryCondition::red_all());
  const ModelParams p(2, 0.4);
  auto ex = ExactPotts::enumerate(lat, p);
  const int x = lat->domain().vertex_id(0, 0, 0);
  const double exact = ex.probability([&](const SpinConfig& s) { return nonred_reach(s)[x] >= 1; });
  ChainState st(SpinConfig::ground_state(lat), 11);
  const int N = 40000;
  int hit = 0;
  for (int b = 0; b < 100; ++b) chain_step(st, p, true, true);
  for (int t = 0; t < N; ++t) {
    chain_step(st, p, true, true);
    hit += connection_event(nonred_reach(st.sigma)[x], 0);
  }
  const double mc = double(hit) / N;
  CHECK(std::abs(mc - exact) < 4.0 * std::sqrt(exact * (1 - exact) / N) + 1e-3);
}

TEST_CASE("pillar event against exact enumeration") {
  auto lat = Lattice::make(DomainKind::slab_box, 2, 1, BoundaryCondition::dobrushin());
  const ModelParams p(2, 0.5);
  auto ex = ExactPotts::enumerate(lat, p);
  const double exact = ex.probability([](const SpinConfig& s) { return nonred_pillar(s, {0, 0, 0}).height >= 1; });
  ChainState st(SpinConfig::ground_state(lat), 12);
  const int N = 40000;
  int hit = 0;
  for (int t = 0; t < N; ++t) {
    chain_step(st, p, true, true);
    hit += nonred_pillar(st.sigma, {0, 0, 0}).height >= 1;
  }
  const double mc = double(hit) / N;
  CHECK(std::abs(mc - exact) < 4.0 * std::sqrt(exact * (1 - exact) / N) + 1e-3);
}

TEST_CASE("rate points") {
  auto r = make_rate_point(2, McEstimate{0.01, 0.001, 1000, 1.0}, 10);
  CHECK(r.usable);
  CHECK(r.rate == doctest::Approx(-std::log(0.01) - 0.005));
  CHECK(r.rate_stderr == doctest::Approx(0.1));
  auto z = make_rate_point(3, McEstimate{0.0, 0.0, 1000, 1.0}, 0);
  CHECK_FALSE(z.usable);
  CHECK(std::isinf(z.rate));
}

TEST_CASE("xi fit") {
  auto f = fit_xi(synthetic({0.3, 1.0, 3.0, 5.0, 7.0}, 0.1));
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(-1.0));
  CHECK(f.slope_stderr > 0.0);
  REQUIRE(f.diffs.size() == 3u);
  CHECK(f.diffs[0].value == doctest::Approx(2.0));
  CHECK(f.diffs[0].stderr_ == doctest::Approx(std::sqrt(0.02)));
  auto s = synthetic({0.3, 1.0, 3.0}, 0.1);
  s.points[2].usable = false;
  CHECK_THROWS_AS(fit_xi(s), FitError);
}

TEST_CASE("h star") {
  CHECK(h_star(1000, 2.0) == 3);
  CHECK(h_star(55, 4.0) == 1);
  CHECK(h_star(8, std::log(8.0) + 0.01) == 0);
  CHECK_THROWS(h_star(8, 0.0));
}

TEST_CASE("outside fraction and median height") {
  Domain d(DomainKind::floor_box, 2, 4);
  InterfaceSet I;
  for (int j : {1, -1})
    for (int i : {1, -1}) I.plaquettes.push_back({i, j, 4});
  std::sort(I.plaquettes.begin(), I.plaquettes.end());
  CHECK(outside_fraction(I, d, 2, 0.25) == 0.0);
  CHECK(outside_fraction(I, d, 1, 0.25) == 1.0);
  CHECK(median_column_height(I, d) == 2.0);
}

TEST_CASE("bulk sites") {
  Domain d(DomainKind::slab_box, 8, 4);
  auto b = bulk_sites(d, 3);
  for (int s : b) {
    auto c = d.coord(s);
    CHECK(c.i >= d.i0() + 2);
    CHECK(c.k + 2 < d.k_end() - 2);
  }
  CHECK_THROWS(bulk_sites(Domain(DomainKind::slab_box, 4, 1), 3));
}
