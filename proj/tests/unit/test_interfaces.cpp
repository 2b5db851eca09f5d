#include <doctest.h>

#include <algorithm>

#include "pfsim/interfaces.hpp"
#include "pfsim/sampling.hpp"

using namespace pfsim;

namespace {

LatticePtr dob(int n, int m) { return Lattice::make(DomainKind::slab_box, n, m, BoundaryCondition::dobrushin()); }

std::vector<Plaquette> flat(const Domain& d, int h2) {
  std::vector<Plaquette> out;
  for (int j = d.i0(); j < d.i0() + d.n(); ++j)
    for (int i = d.i0(); i < d.i0() + d.n(); ++i) out.push_back({2 * i + 1, 2 * j + 1, h2});
  std::sort(out.begin(), out.end());
  return out;
}

bool contains(const std::vector<Plaquette>& v, const Plaquette& f) { return std::binary_search(v.begin(), v.end(), f); }

// Edges open iff not dual to a plaquette in `cut`.
EdgeConfig open_except(const LatticePtr& lat, const std::vector<Plaquette>& cut) {
  EdgeConfig w(lat, true);
  for (const auto& f : cut) {
    int e = lat->domain().edge_of_plaquette(f);
    REQUIRE(e >= 0);
    w.set(e, false);
  }
  return w;
}

std::vector<SpinConfig> samples(const LatticePtr& lat, const ModelParams& p, int n, std::uint64_t seed) {
  ChainState st(SpinConfig::ground_state(lat), seed);
  for (int b = 0; b < 100; ++b) chain_step(st, p, true, true);
  std::vector<SpinConfig> out;
  for (int t = 0; t < n; ++t) {
    chain_step(st, p, true, true);
    out.push_back(st.sigma);
  }
  return out;
}

}  // namespace

TEST_CASE("flat Dobrushin ground state") {
  auto lat = dob(4, 2);
  auto I = extract_potts_interface(SpinConfig::ground_state(lat), PottsSide::blue);
  CHECK(I.plaquettes == flat(lat->domain(), 0));
  auto R = extract_potts_interface(SpinConfig::ground_state(lat), PottsSide::red);
  CHECK(R.plaquettes == flat(lat->domain(), 0));
}

TEST_CASE("swap configuration inside the unit cube around the origin") {
  auto lat = dob(4, 2);
  const Domain& d = lat->domain();
  SpinConfig s = SpinConfig::ground_state(lat);
  for (int i : {-1, 0})
    for (int j : {-1, 0}) {
      s.set(d.vertex_id(i, j, -1), kRed);
      s.set(d.vertex_id(i, j, 0), kBlue);
    }
  auto blue = extract_potts_interface(s, PottsSide::blue);
  auto red = extract_potts_interface(s, PottsSide::red);
  CHECK(blue.contains({1, 1, -2}));
  CHECK(red.contains({1, 1, 2}));
  // one more blue site joins the raised blue cube to the blue half-space
  s.set(d.vertex_id(1, 0, 0), kBlue);
  auto blue2 = extract_potts_interface(s, PottsSide::blue);
  auto red2 = extract_potts_interface(s, PottsSide::red);
  CHECK(blue2.plaquettes == red2.plaquettes);
  for (const auto& f : blue2.plaquettes) CHECK(f.z2 >= 0);
}

TEST_CASE("FK interfaces of explicit configurations") {
  auto lat = dob(3, 2);
  const Domain& d = lat->domain();
  auto w = open_except(lat, flat(d, 0));
  CHECK(extract_fk_interface(w, FkSide::top).plaquettes == flat(d, 0));
  CHECK(extract_fk_interface(w, FkSide::bot).plaquettes == flat(d, 0));
  CHECK(extract_full_interface(w).plaquettes == flat(d, 0));
  // all closed: the top cluster is the red boundary alone
  auto top = extract_fk_interface(EdgeConfig(lat, false), FkSide::top);
  std::vector<Plaquette> red_edges;
  for (int e = 0; e < d.num_edges(); ++e) {
    int v = d.edges()[e].v;
    if (!d.is_interior(v) && lat->vertex_class(v) == kRedClass) red_edges.push_back(d.edge_plaquette(e));
  }
  std::sort(red_edges.begin(), red_edges.end());
  CHECK(top.plaquettes == red_edges);
}

TEST_CASE("a dangling closed edge adds one hair plaquette to the full interface") {
  auto lat = dob(4, 2);
  const Domain& d = lat->domain();
  auto cut = flat(d, 0);
  const Plaquette hair{2, 1, 1};  // between (0,0,0) and (1,0,0), touching the layer
  cut.push_back(hair);
  auto full = extract_full_interface(open_except(lat, cut));
  auto expect = flat(d, 0);
  expect.push_back(hair);
  std::sort(expect.begin(), expect.end());
  CHECK(full.plaquettes == expect);
}

TEST_CASE("coupled samples: ordering and containment in the full interface") {
  for (int q : {2, 3}) {
    auto lat = Lattice::make(DomainKind::floor_box, 6, 6, BoundaryCondition::floor());
    const ModelParams p(q, 1.2);
    Rng rng(q);
    for (const auto& s : samples(lat, p, 300, 10 + q)) {
      auto w = couple_edges_from_spins(s, p, rng);
      auto top = extract_fk_interface(w, FkSide::top), bot = extract_fk_interface(w, FkSide::bot);
      auto red = extract_potts_interface(s, PottsSide::red), blue = extract_potts_interface(s, PottsSide::blue);
      auto full = extract_full_interface(w);
      REQUIRE(verify_ordering(top, red, blue, bot));
      CHECK(top.subset_of(full));
      CHECK(bot.subset_of(full));
      CHECK(red.subset_of(full));
      CHECK(blue.subset_of(full));
    }
  }
}

TEST_CASE("ordering holds under Dobrushin and soft-floor measures too") {
  auto lat = dob(5, 3);
  const ModelParams p(2, 1.0);
  Rng rng(1);
  for (const auto& s : samples(lat, p, 200, 3)) {
    auto w = couple_edges_from_spins(s, p, rng);
    CHECK(verify_ordering(extract_fk_interface(w, FkSide::top), extract_potts_interface(s, PottsSide::red),
                          extract_potts_interface(s, PottsSide::blue), extract_fk_interface(w, FkSide::bot)));
  }
  auto soft = Lattice::make(DomainKind::slab_box, 4, 2, BoundaryCondition::split(1));
  int n = 0;
  sample_conditional_soft_floor(soft, p, 100, 4, SoftFloorMethod::restricted, {}, [&](const SpinConfig& s, std::uint64_t) {
    auto w = couple_edges_from_spins(s, p, rng);
    CHECK(verify_ordering(extract_fk_interface(w, FkSide::top), extract_potts_interface(s, PottsSide::red),
                          extract_potts_interface(s, PottsSide::blue), extract_fk_interface(w, FkSide::bot)));
    ++n;
  });
  CHECK(n == 100);
}

TEST_CASE("a mismatched spin / edge pair violates the ordering") {
  auto lat = dob(3, 2);
  const Domain& d = lat->domain();
  const ModelParams cold(2, 50.0);
  Rng rng(1);
  // edges of the flat state, spins with a blue bump: the FK top cluster
  // then contains a site outside the red Potts cluster
  auto w = couple_edges_from_spins(SpinConfig::ground_state(lat), cold, rng);
  SpinConfig s = SpinConfig::ground_state(lat);
  s.set(d.vertex_id(0, 0, 0), kBlue);
  CHECK_FALSE(verify_ordering(extract_fk_interface(w, FkSide::top), extract_potts_interface(s, PottsSide::red),
                              extract_potts_interface(s, PottsSide::blue), extract_fk_interface(w, FkSide::bot)));
  auto w2 = couple_edges_from_spins(s, cold, rng);
  CHECK(verify_ordering(extract_fk_interface(w2, FkSide::top), extract_potts_interface(s, PottsSide::red),
                        extract_potts_interface(s, PottsSide::blue), extract_fk_interface(w2, FkSide::bot)));
}

TEST_CASE("theta shift") {
  Domain d(DomainKind::floor_box, 4, 4);
  auto I = flat(d, 0);
  auto T = theta_shift(I, 1, d);
  CHECK(T.size() == 32u);
  int horiz = 0;
  for (const auto& f : T) horiz += f.orientation() == Orientation::horizontal && f.z2 == 2;
  CHECK(horiz == 16);
  CHECK(theta_shift(I, 0, d) == I);
  CHECK(theta_shift(I, 2, d) == theta_shift(theta_shift(I, 1, d), 1, d));
}

TEST_CASE("theta shift on sampled top interfaces") {
  auto lat = Lattice::make(DomainKind::floor_box, 4, 5, BoundaryCondition::floor());
  const Domain& d = lat->domain();
  const ModelParams p(2, 1.0);
  Rng rng(2);
  int tested = 0;
  for (const auto& s : samples(lat, p, 60, 8)) {
    auto top = extract_fk_interface(couple_edges_from_spins(s, p, rng), FkSide::top);
    if (top.max_height2() + 4 > d.ceiling2()) continue;
    auto T1 = theta_shift(top.plaquettes, 1, d);
    CHECK(theta_shift(top.plaquettes, 2, d) == theta_shift(T1, 1, d));
    auto h0 = column_heights(d, top.plaquettes), h1 = column_heights(d, T1);
    for (std::size_t c = 0; c < h0.max2.size(); ++c) CHECK(h1.max2[c] == h0.max2[c] + 2);
    // The lifted set is again the top interface of some configuration.
    auto w = open_except(lat, T1);
    CHECK(extract_fk_interface(w, FkSide::top).plaquettes == T1);
    ++tested;
  }
  CHECK(tested > 0);
}

TEST_CASE("augmentation is idempotent") {
  auto lat = Lattice::make(DomainKind::floor_box, 5, 4, BoundaryCondition::floor());
  const Domain& d = lat->domain();
  for (const auto& s : samples(lat, ModelParams(3, 0.6), 50, 4))
    for (auto side : {PottsSide::blue, PottsSide::red}) {
      auto r = potts_cluster(s, side);
      auto a = augment(d, r);
      CHECK(augment(d, a) == a);
      CHECK(r.subset_of(a));
    }
}

TEST_CASE("spike transform") {
  auto lat = Lattice::make(DomainKind::floor_box, 4, 3, BoundaryCondition::floor());
  const Domain& d = lat->domain();
  SpinConfig s = SpinConfig::ground_state(lat);
  for (int j = d.i0(); j < d.i0() + d.n(); ++j)
    for (int i = d.i0(); i < d.i0() + d.n(); ++i) s.set(d.vertex_id(i, j, 0), kBlue);
  Rng rng(3);
  auto w = couple_edges_from_spins(s, ModelParams(2, 50.0), rng);
  std::vector<Plaquette> horiz;
  for (const auto& f : extract_fk_interface(w, FkSide::top).plaquettes)
    if (f.orientation() == Orientation::horizontal) horiz.push_back(f);
  REQUIRE(horiz == flat(d, 2));
  CHECK(spike_transform(w, {}, 1) == w);
  auto out = spike_transform(w, {{0, 0}}, 1);
  CHECK(check_disconnection(out));
  auto h = extract_fk_interface(out, FkSide::top).heights(d);
  for (int j = d.i0(); j < d.i0() + d.n(); ++j)
    for (int i = d.i0(); i < d.i0() + d.n(); ++i) CHECK(h.min2[h.col(i, j)] == ((i == 0 && j == 0) ? 0 : 2));
  auto two = spike_transform(w, {{0, 0}, {-2, 1}}, 1);
  CHECK(check_disconnection(two));
}

TEST_CASE("soft-floor event") {
  auto lat = Lattice::make(DomainKind::slab_box, 3, 2, BoundaryCondition::dobrushin());
  CHECK(blue_interface_in_upper_half(SpinConfig::ground_state(lat)));
  SpinConfig s = SpinConfig::ground_state(lat);
  s.set(lat->domain().vertex_id(0, 0, -1), kRed);
  CHECK_FALSE(blue_interface_in_upper_half(s));
}
