#pragma once

#include <array>
#include <climits>
#include <cstdint>
#include <utility>
#include <vector>

#include "pfsim/lattice.hpp"
#include "pfsim/potts.hpp"
#include "pfsim/rc.hpp"

namespace pfsim {

enum class RegionTag { v_blue, vhat_blue, v_red, vhat_red, v_top, vhat_top, v_bot, vhat_bot, other };

// Membership flags over all vertex ids (interior and boundary).
struct VertexRegion {
  RegionTag tag = RegionTag::other;
  std::vector<std::uint8_t> in;

  bool contains(int v) const { return in[v] != 0; }
  int count() const;
  bool subset_of(const VertexRegion& o) const;
  bool disjoint_from(const VertexRegion& o) const;
  bool operator==(const VertexRegion& o) const { return in == o.in; }
};

// Adds every complement component that cannot reach a boundary vertex
// outside the region (those are exactly the finite components enclosed by it).
VertexRegion augment(const Domain& d, const VertexRegion& r, RegionTag tag = RegionTag::other);

// Plaquettes dual to domain edges with exactly one endpoint in the region.
std::vector<Plaquette> edge_boundary(const Domain& d, const VertexRegion& r);

enum class InterfaceLabel { blue, red, top, bot, full };
enum class PottsSide { blue, red };
enum class FkSide { top, bot };

inline constexpr int kNoHeight = INT_MIN;

// Per-column extreme heights (doubled) of the horizontal plaquettes.
struct ColumnHeights {
  int n = 0, i0 = 0;
  std::vector<int> max2, min2;  // kNoHeight when the column is missed
  int col(int i, int j) const { return (j - i0) * n + (i - i0); }
};

struct InterfaceSet {
  InterfaceLabel label = InterfaceLabel::full;
  std::vector<Plaquette> plaquettes;  // sorted, unique
  VertexRegion region;                // the augmented region (empty for Full)

  int size() const { return static_cast<int>(plaquettes.size()); }
  bool contains(const Plaquette& f) const;
  bool subset_of(const InterfaceSet& o) const;
  ColumnHeights heights(const Domain& d) const;
  int max_height2() const;
  int min_height2() const;
};

ColumnHeights column_heights(const Domain& d, const std::vector<Plaquette>& plaquettes);

VertexRegion potts_cluster(const SpinConfig& sigma, PottsSide side);
VertexRegion fk_cluster(const EdgeConfig& omega, FkSide side);

InterfaceSet extract_potts_interface(const SpinConfig& sigma, PottsSide side);
InterfaceSet extract_fk_interface(const EdgeConfig& omega, FkSide side);
InterfaceSet extract_full_interface(const EdgeConfig& omega);

bool verify_ordering(const InterfaceSet& top, const InterfaceSet& red, const InterfaceSet& blue,
                     const InterfaceSet& bot);

// Soft-floor event: every site below height 0 lies in the augmented blue region.
bool blue_interface_in_upper_half(const SpinConfig& sigma);

std::vector<Plaquette> theta_shift(const std::vector<Plaquette>& I, int j, const Domain& d);
InterfaceSet theta_shift(const InterfaceSet& I, int j, const Domain& d);

// Column (i, j) of the footprint.
using Column = std::pair<int, int>;
EdgeConfig spike_transform(const EdgeConfig& omega, const std::vector<Column>& A, int h);

// Region above a candidate top interface: vertices reachable from the red
// boundary without crossing the given plaquettes, then augmented.
VertexRegion region_above(const Lattice& lat, const std::vector<Plaquette>& I);

// Plaquette adjacency helpers, all in doubled coordinates.
std::array<std::array<int, 3>, 4> plaquette_segments(const Plaquette& f);
std::array<Plaquette, 4> segment_plaquettes(const std::array<int, 3>& seg);
std::array<std::array<int, 3>, 4> plaquette_corners(const Plaquette& f);
// The up to 12 plaquettes sharing an edge with f.
std::vector<Plaquette> one_neighbors(const Plaquette& f);

}  // namespace pfsim
