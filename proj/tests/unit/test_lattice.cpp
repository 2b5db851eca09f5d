#include <doctest.h>

#include <set>

#include "pfsim/lattice.hpp"

using namespace pfsim;

TEST_CASE("floor box 2x2x2 sites and boundary") {
  Domain d(DomainKind::floor_box, 2, 2);
  CHECK(d.num_sites() == 8);
  CHECK(d.num_boundary() == 24);
  CHECK(d.num_boundary_edges() == 24);
  CHECK(d.num_interior_edges() == 12);
}

TEST_CASE("slab box heights") {
  Domain d(DomainKind::slab_box, 2, 1);
  std::set<int> h2;
  for (int s = 0; s < d.num_sites(); ++s) h2.insert(d.coord(s).height2());
  CHECK(h2 == std::set<int>{-1, 1});
}

TEST_CASE("degenerate boxes are rejected") {
  CHECK_THROWS_AS(Domain(DomainKind::floor_box, 1, 2), GeometryError);
  CHECK_THROWS_AS(Domain(DomainKind::floor_box, 2, 0), GeometryError);
}

TEST_CASE("plaquette of an edge") {
  auto f = plaquette_of_edge({0, 0, 0}, {0, 0, 1});
  CHECK(f == Plaquette{1, 1, 2});
  CHECK(f.orientation() == Orientation::horizontal);
  CHECK(f.height2() == 2);
  auto g = plaquette_of_edge({0, 0, 0}, {1, 0, 0});
  CHECK(g == Plaquette{2, 1, 1});
  CHECK(g.orientation() == Orientation::vertical);
  CHECK(g.height2() == 1);
  CHECK_THROWS(plaquette_of_edge({0, 0, 0}, {1, 1, 0}));
}

TEST_CASE("boundary colors") {
  Domain fl(DomainKind::floor_box, 2, 2);
  CHECK(boundary_color(fl, BoundaryCondition::floor(), {0, 0, -1}) == kBlue);
  CHECK(boundary_color(fl, BoundaryCondition::floor(), {-2, 0, 0}) == kRed);
  Domain sl(DomainKind::slab_box, 2, 2);
  CHECK(boundary_color(sl, BoundaryCondition::split(0), {-2, 0, 0}) == kRed);
  CHECK(boundary_color(sl, BoundaryCondition::split(0), {-2, 0, -1}) == kBlue);
  for (int v = sl.num_sites(); v < sl.num_vertices(); ++v)
    CHECK(boundary_color(sl, BoundaryCondition::red_all(), sl.coord(v)) == kRed);
  CHECK_THROWS(boundary_color(sl, BoundaryCondition::floor(), {0, 0, 0}));
}

TEST_CASE("edge and plaquette duality is a bijection") {
  for (auto kind : {DomainKind::floor_box, DomainKind::slab_box})
    for (int n = 2; n <= 4; ++n)
      for (int m = 1; m <= 3; ++m) {
        Domain d(kind, n, m);
        std::set<Plaquette> seen;
        for (int e = 0; e < d.num_edges(); ++e) {
          auto f = d.edge_plaquette(e);
          CHECK(seen.insert(f).second);
          CHECK(d.edge_of_plaquette(f) == e);
          const auto& ed = d.edges()[e];
          CHECK(f == plaquette_of_edge(d.coord(ed.u), d.coord(ed.v)));
        }
      }
}

TEST_CASE("edge counts match a brute-force adjacency scan") {
  for (auto kind : {DomainKind::floor_box, DomainKind::slab_box})
    for (int n = 2; n <= 3; ++n)
      for (int m = 1; m <= 3; ++m) {
        Domain d(kind, n, m);
        int interior = 0, boundary = 0;
        std::set<SiteCoord> inside;
        for (int s = 0; s < d.num_sites(); ++s) inside.insert(d.coord(s));
        const int k0 = kind == DomainKind::floor_box ? 0 : -m;
        const int k1 = m;
        const int i0 = -(n / 2);
        for (int a = i0 - 1; a <= i0 + n; ++a)
          for (int b = i0 - 1; b <= i0 + n; ++b)
            for (int c = k0 - 1; c <= k1; ++c)
              for (int x = i0 - 1; x <= i0 + n; ++x)
                for (int y = i0 - 1; y <= i0 + n; ++y)
                  for (int z = k0 - 1; z <= k1; ++z) {
                    SiteCoord u{a, b, c}, v{x, y, z};
                    if (!(u < v) || !adjacent(u, v)) continue;
                    const bool iu = inside.count(u), iv = inside.count(v);
                    if (iu && iv) ++interior;
                    else if (iu || iv) ++boundary;
                  }
        CHECK(d.num_interior_edges() == interior);
        CHECK(d.num_boundary_edges() == boundary);
      }
}

TEST_CASE("plaquette heights: integer if horizontal, half-integer if vertical") {
  for (auto kind : {DomainKind::floor_box, DomainKind::slab_box})
    for (int n = 2; n <= 8; n += 3)
      for (int m = 1; m <= 8; m += 3) {
        Domain d(kind, n, m);
        for (int e = 0; e < d.num_edges(); ++e) {
          auto f = d.edge_plaquette(e);
          if (f.orientation() == Orientation::horizontal) CHECK(f.z2 % 2 == 0);
          else CHECK(std::abs(f.z2 % 2) == 1);
        }
      }
}

TEST_CASE("plaquette keys round trip") {
  Domain d(DomainKind::slab_box, 3, 2);
  for (int e = 0; e < d.num_edges(); ++e) {
    auto f = d.edge_plaquette(e);
    CHECK(Plaquette::from_key(f.key()) == f);
  }
}
