#include <doctest.h>

#include <algorithm>
#include <set>

#include "pfsim/sampling.hpp"
#include "pfsim/walls.hpp"

using namespace pfsim;

namespace {

// I_Full of a spin configuration at beta = 50: every agreeing edge opens.
InterfaceSet frozen_full(const SpinConfig& s) {
  Rng rng(1);
  return extract_full_interface(couple_edges_from_spins(s, ModelParams(2, 50.0), rng));
}

LatticePtr dob(int n, int m) { return Lattice::make(DomainKind::slab_box, n, m, BoundaryCondition::dobrushin()); }

}  // namespace

TEST_CASE("flat interface: one ceiling, no walls") {
  auto lat = dob(4, 2);
  auto full = frozen_full(SpinConfig::ground_state(lat));
  CHECK(full.size() == 16);
  auto dec = decompose_walls(full, lat->domain());
  CHECK(dec.star == full.plaquettes);
  CHECK(dec.walls.empty());
  CHECK(dec.ceilings.size() == 1u);
  CHECK(dec.total_excess() == 0);
}

TEST_CASE("unit bump") {
  auto lat = dob(6, 2);
  const Domain& d = lat->domain();
  SpinConfig s = SpinConfig::ground_state(lat);
  s.set(d.vertex_id(0, 0, 0), kBlue);
  auto full = frozen_full(s);
  CHECK(full.size() == 35 + 5);
  auto dec = decompose_walls(full, d);
  // I* adds the plaquette under the bump and the four at bump-top height over
  // the neighbouring columns; those five columns are then wall columns.
  CHECK(std::binary_search(dec.star.begin(), dec.star.end(), Plaquette{1, 1, 0}));
  CHECK(std::binary_search(dec.star.begin(), dec.star.end(), Plaquette{3, 1, 2}));
  REQUIRE(dec.walls.size() == 1u);
  const Wall& w = dec.walls[0];
  CHECK(w.A.size() == 9u);
  CHECK(w.B.size() == 5u);
  CHECK(w.cells.size() == 5u);
  CHECK(w.excess_area() == 4);
  CHECK(dec.total_excess() == full.size() - d.n() * d.n());
  CHECK(dec.ceilings.size() == 1u);
  CHECK_FALSE(w.touches_side);
}

TEST_CASE("a ring encloses a bump; only the ring is outermost") {
  auto lat = dob(12, 2);
  const Domain& d = lat->domain();
  SpinConfig s = SpinConfig::ground_state(lat);
  for (int j = -4; j <= 4; ++j)
    for (int i = -4; i <= 4; ++i)
      if (std::max(std::abs(i), std::abs(j)) == 4) s.set(d.vertex_id(i, j, 0), kBlue);
  s.set(d.vertex_id(0, 0, 0), kBlue);
  auto full = frozen_full(s);
  auto dec = decompose_walls(full, d);
  REQUIRE(dec.walls.size() == 2u);
  auto outer = outermost_walls(dec.walls);
  REQUIRE(outer.size() == 1u);
  const Wall& ring = dec.walls[outer[0]];
  // ring, plus the neighbouring columns sharing an edge with its side faces
  CHECK(ring.cells.size() == 32u + 24u + 36u);
  CHECK(ring.hull.size() == 117u);
  CHECK(dec.walls[1 - outer[0]].cells.size() == 5u);
  auto st = wall_sample_stats(full, extract_potts_interface(s, PottsSide::blue), d, 0);
  CHECK(st.n_walls == 2);
  CHECK(st.outermost_hull_area == 117);
  CHECK(st.level_set_count == 33);
  CHECK(st.total_excess == full.size() - 144);
}

TEST_CASE("walls of sampled interfaces") {
  auto lat = dob(6, 3);
  const Domain& d = lat->domain();
  const ModelParams p(2, 0.9);
  ChainState st(SpinConfig::ground_state(lat), 5);
  Rng rng(9);
  for (int b = 0; b < 50; ++b) chain_step(st, p, true, true);
  for (int t = 0; t < 60; ++t) {
    chain_step(st, p, true, true);
    auto full = extract_full_interface(couple_edges_from_spins(st.sigma, p, rng));
    auto dec = decompose_walls(full, d);
    // I* = union of walls (A and B) and ceilings; parts are disjoint
    std::vector<Plaquette> parts;
    for (const auto& w : dec.walls) {
      parts.insert(parts.end(), w.A.begin(), w.A.end());
      parts.insert(parts.end(), w.B.begin(), w.B.end());
    }
    for (const auto& c : dec.ceilings) parts.insert(parts.end(), c.plaquettes.begin(), c.plaquettes.end());
    std::sort(parts.begin(), parts.end());
    CHECK(std::adjacent_find(parts.begin(), parts.end()) == parts.end());
    CHECK(parts == dec.star);
    CHECK(full.subset_of(InterfaceSet{InterfaceLabel::full, dec.star, {}}));
    // excess identity
    CHECK(dec.total_excess() == full.size() - d.n() * d.n());
    // every column is covered by a ceiling or a wall cell
    std::set<Cell2> covered;
    for (const auto& w : dec.walls) covered.insert(w.cells.begin(), w.cells.end());
    for (const auto& c : dec.ceilings)
      for (const auto& f : c.plaquettes) covered.insert({f.x2, f.y2});
    CHECK(int(covered.size()) == d.n() * d.n());
    auto outer = outermost_walls(dec.walls);
    int hull = 0;
    for (int i : outer) hull += int(dec.walls[i].hull.size());
    CHECK(hull <= d.n() * d.n());
  }
}

TEST_CASE("translation invariance of the wall statistics") {
  auto lat = dob(8, 2);
  const Domain& d = lat->domain();
  auto stats_with_bump = [&](int i, int j) {
    SpinConfig s = SpinConfig::ground_state(lat);
    s.set(d.vertex_id(i, j, 0), kBlue);
    s.set(d.vertex_id(i + 1, j, 0), kBlue);
    return wall_sample_stats(frozen_full(s), extract_potts_interface(s, PottsSide::blue), d, 0);
  };
  auto a = stats_with_bump(-2, -1), b = stats_with_bump(1, 2);
  CHECK(a.full_size == b.full_size);
  CHECK(a.n_walls == b.n_walls);
  CHECK(a.total_excess == b.total_excess);
  CHECK(a.outermost_hull_area == b.outermost_hull_area);
  CHECK(a.total_excess == 6);
  CHECK(a.n_walls == 1);
}

TEST_CASE("wall area summary") {
  std::vector<WallSampleStats> v(4);
  for (int i = 0; i < 4; ++i) v[i] = {16 + i, 1, i, 2 * i, i};
  auto s = wall_area_statistics(v, 4);
  CHECK(s.hull_fraction.mean == doctest::Approx(3.0 / 16));
  CHECK(s.full_area_ratio.mean == doctest::Approx(17.5 / 16));
  CHECK(s.level_set_fraction.mean == doctest::Approx(1.5 / 16));
}
