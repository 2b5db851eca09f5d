#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "pfsim/interfaces.hpp"

namespace pfsim {

inline constexpr int kRedNode = -1;
inline constexpr int kBlueNode = -2;

// An FK model on an explicit graph: ordinary vertices 0..n-1 plus up to two
// wired class nodes.  Weight of a configuration is prod_{open e} w_e times
// q^kappa, kappa counting the class nodes that are present.
struct FkGraph {
  struct Edge {
    int u;
    int v;  // ordinary vertex, kRedNode or kBlueNode
    double w;
  };
  int n = 0;
  std::vector<Edge> edges;
  std::vector<std::uint8_t> must_reach_red;  // per vertex, or empty
  bool has_red = false, has_blue = false;
  bool forbid_merge = true;  // drop configurations joining the two classes
  std::vector<SiteCoord> coords;  // optional, for site orders
  std::vector<int> site_of;       // optional, domain vertex id per vertex

  int num_edges() const { return static_cast<int>(edges.size()); }
};

// Sum over all 2^|E| configurations.
double fk_partition_brute(const FkGraph& g, int q, double cap = 67108864.0);

// Transfer-matrix evaluation adding vertices in the given order.
double fk_partition_frontier(const FkGraph& g, int q, const std::vector<int>& order);

// Order by coordinates; `axes` lists the most significant axis first
// (0 = i, 1 = j, 2 = k).
std::vector<int> coordinate_order(const FkGraph& g, std::array<int, 3> axes);

// The FK graph induced on the interior sites of `region`, with the boundary
// vertices of the region wired into their classes.  Edges dual to a plaquette
// in `cut` are dropped.  With `top_side_of_cut`, sites of the region lying on
// an edge dual to a cut plaquette must connect to the red class.
FkGraph region_graph(const Lattice& lat, const VertexRegion& region, const std::vector<Plaquette>& cut,
                     double w, bool top_side_of_cut);

// Whole-domain graph (optionally conditioned on disconnection).
FkGraph domain_graph(const Lattice& lat, double w, bool forbid_merge);

// Domain graph with all boundary edges from one site to one class merged into
// a single edge of weight (1 + w)^k - 1.  Same partition function.
FkGraph merged_domain_graph(const Lattice& lat, double w, bool forbid_merge);

}  // namespace pfsim
