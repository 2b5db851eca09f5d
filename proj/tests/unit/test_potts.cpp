#include <doctest.h>

#include <cmath>

#include "pfsim/fuzzy.hpp"
#include "pfsim/interfaces.hpp"
#include "pfsim/oracle.hpp"
#include "pfsim/sampling.hpp"

using namespace pfsim;

namespace {

LatticePtr floor_box(int n, int m) { return Lattice::make(DomainKind::floor_box, n, m, BoundaryCondition::floor()); }

McEstimate marginal(const LatticePtr& lat, const ModelParams& p, bool hb, bool sw, int site, std::int64_t n,
                    std::uint64_t seed) {
  ChainState st(SpinConfig::ground_state(lat), seed);
  for (int b = 0; b < 500; ++b) chain_step(st, p, hb, sw);
  std::vector<double> x;
  for (std::int64_t s = 0; s < n; ++s) {
    chain_step(st, p, hb, sw);
    x.push_back(st.sigma[site] == kBlue);
  }
  return estimate(x);
}

}  // namespace

TEST_CASE("energy of the all-blue 2x2x2 floor box counts red boundary neighbours") {
  auto lat = floor_box(2, 2);
  SpinConfig s(lat, kBlue);
  const Domain& d = lat->domain();
  std::int64_t expect = 0;
  for (const auto& e : d.edges())
    if (!d.is_interior(e.v) && lat->color(e.v) != kBlue) ++expect;
  CHECK(expect == 20);
  CHECK(energy(s) == expect);
}

TEST_CASE("monochromatic configurations have zero energy; a bulk flip costs 6") {
  auto lat = Lattice::make(DomainKind::slab_box, 4, 2, BoundaryCondition::red_all());
  SpinConfig s(lat, kRed);
  CHECK(energy(s) == 0);
  s.set(lat->domain().vertex_id(0, 0, 0), kBlue);
  CHECK(energy(s) == 6);
}

TEST_CASE("heat-bath conditional law of a site with six blue neighbours") {
  // Split(2) on a 2x2x1 slab has an all-blue boundary.
  auto lat = Lattice::make(DomainKind::slab_box, 2, 1, BoundaryCondition::split(2));
  const Domain& d = lat->domain();
  const int o = d.vertex_id(0, 0, 0);
  for (int q : {2, 3}) {
    const double beta = 0.8;
    auto ex = ExactPotts::enumerate(lat, ModelParams(q, beta));
    auto nbrs_blue = [&](const SpinConfig& s) {
      for (int dir = 0; dir < 6; ++dir)
        if (s[d.neighbor(o, dir)] != kBlue) return false;
      return true;
    };
    const double p = ex.conditional([&](const SpinConfig& s) { return s[o] == kBlue; }, nbrs_blue);
    CHECK(p == doctest::Approx(1.0 / (1.0 + (q - 1) * std::exp(-6 * beta))).epsilon(1e-12));
  }
}

TEST_CASE("beta = 0 resamples uniformly") {
  auto lat = floor_box(2, 1);
  for (bool sw : {false, true}) {
    auto e = marginal(lat, ModelParams(3, 0.0), !sw, sw, 0, 20000, 5);
    CHECK(std::abs(e.mean - 1.0 / 3) <= 3 * e.stderr_);
  }
}

TEST_CASE("heat-bath and SW marginals match exact enumeration") {
  std::uint64_t seed = 100;
  for (int m : {1, 2})
    for (int q : {2, 3}) {
      auto lat = floor_box(2, m);
      const ModelParams p(q, 0.7);
      const int o = lat->domain().vertex_id(0, 0, 0);
      const double exact = ExactPotts::enumerate(lat, p).site_marginal(o)[kBlue - 1];
      for (bool sw : {false, true}) {
        auto e = marginal(lat, p, !sw, sw, o, 40000, ++seed);
        INFO("m=" << m << " q=" << q << " sw=" << sw << " est=" << e.mean << " exact=" << exact);
        CHECK(std::abs(e.mean - exact) <= 3 * e.stderr_);
      }
    }
}

TEST_CASE("identical seeds give identical trajectories") {
  auto lat = floor_box(4, 4);
  ChainState a(SpinConfig::ground_state(lat), 42), b(SpinConfig::ground_state(lat), 42);
  for (int t = 0; t < 20; ++t) {
    chain_step(a, ModelParams(2, 1.0), true, true);
    chain_step(b, ModelParams(2, 1.0), true, true);
  }
  CHECK(a.sigma.same_colors(b.sigma));
  CHECK(a.sweep == b.sweep);
}

TEST_CASE("boundary colors never change and the energy bookkeeping is exact") {
  auto lat = Lattice::make(DomainKind::slab_box, 4, 2, BoundaryCondition::dobrushin());
  ChainState st(SpinConfig::ground_state(lat), 9);
  for (int t = 1; t <= 1000; ++t) {
    if (t % 2) heat_bath_sweep(st, ModelParams(3, 0.9));
    else sw_sweep_frozen_boundary(st, ModelParams(3, 0.9));
    REQUIRE(st.sigma.boundary_intact());
  }
  CHECK(st.energy == energy(st.sigma));
}

TEST_CASE("SW with p = 1 fixes the all-blue configuration under an all-blue boundary") {
  auto lat = Lattice::make(DomainKind::slab_box, 3, 1, BoundaryCondition::split(2));
  ChainState st(SpinConfig(lat, kBlue), 3);
  for (int t = 0; t < 20; ++t) sw_sweep_frozen_boundary(st, ModelParams(3, 50.0));
  for (int s = 0; s < lat->num_sites(); ++s) CHECK(st.sigma[s] == kBlue);
}

TEST_CASE("soft-floor sampling: rejection and restricted chains match the exact conditional") {
  auto lat = Lattice::make(DomainKind::slab_box, 2, 1, BoundaryCondition::dobrushin());
  const ModelParams p(2, 0.8);
  const int o = lat->domain().vertex_id(0, 0, 0);
  auto ex = ExactPotts::enumerate_conditioned(lat, p, blue_interface_in_upper_half);
  const double exact = ex.site_marginal(o)[kBlue - 1];
  SoftFloorOptions opt;
  opt.burnin = 200;
  opt.interval = 1;
  std::vector<McEstimate> est;
  for (auto method : {SoftFloorMethod::rejection, SoftFloorMethod::restricted}) {
    std::vector<double> x;
    auto rep = sample_conditional_soft_floor(lat, p, 40000, 17, method, opt, [&](const SpinConfig& s, std::uint64_t) {
      REQUIRE(blue_interface_in_upper_half(s));
      x.push_back(s[o] == kBlue);
    });
    CHECK(rep.emitted == 40000);
    CHECK(rep.acceptance_rate() > 0.0);
    est.push_back(estimate(x));
    INFO("est=" << est.back().mean << " exact=" << exact);
    CHECK(std::abs(est.back().mean - exact) <= 3 * est.back().stderr_);
  }
  const double comb = std::hypot(est[0].stderr_, est[1].stderr_);
  CHECK(std::abs(est[0].mean - est[1].mean) <= 3 * comb);
}

TEST_CASE("soft-floor sampling requires a split slab") {
  CHECK_THROWS(sample_conditional_soft_floor(floor_box(2, 1), ModelParams(2, 1.0), 1, 1, SoftFloorMethod::rejection,
                                             {}, [](const SpinConfig&, std::uint64_t) {}));
}

TEST_CASE("for_each_coloring visits q^V colorings and honours the cap") {
  auto lat = floor_box(2, 1);
  std::int64_t count = 0;
  for_each_coloring(lat, 3, [&](const SpinConfig&) { ++count; });
  CHECK(count == 81);
  CHECK_THROWS_AS(for_each_coloring(lat, 3, [](const SpinConfig&) {}, 50), EnumerationCapError);
}

TEST_CASE("run_chains does not depend on the worker count") {
  auto lat = floor_box(4, 3);
  auto run = [&](int workers) {
    ChainSchedule s;
    s.burnin = 5;
    s.interval = 1;
    s.n_chains = 4;
    s.workers = workers;
    std::vector<std::vector<std::int64_t>> e(4);
    run_chains(ModelParams(2, 1.0), [&](int) { return SpinConfig::ground_state(lat); }, 10, 77, s,
               [&](int c, std::int64_t, const SpinConfig& sigma, Rng&) { e[c].push_back(energy(sigma)); });
    return e;
  };
  CHECK(run(1) == run(3));
}
