#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace pfsim {

using Color = std::uint8_t;
inline constexpr Color kBlue = 1;
inline constexpr Color kRed = 2;

struct GeometryError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Site (i+1/2, j+1/2, k+1/2) of the half-integer lattice.
struct SiteCoord {
  int i = 0, j = 0, k = 0;
  auto operator<=>(const SiteCoord&) const = default;
  // Heights are kept doubled so that half-integers stay exact.
  int height2() const { return 2 * k + 1; }
  std::array<int, 3> doubled() const { return {2 * i + 1, 2 * j + 1, 2 * k + 1}; }
};

bool adjacent(const SiteCoord& a, const SiteCoord& b);

enum class Orientation { horizontal, vertical };

// A plaquette is stored by the doubled coordinates of its midpoint: exactly
// one coordinate is even, and that axis is the plaquette normal.
struct Plaquette {
  int x2 = 0, y2 = 0, z2 = 0;
  auto operator<=>(const Plaquette&) const = default;

  int normal_axis() const;
  Orientation orientation() const {
    return (z2 % 2 == 0) ? Orientation::horizontal : Orientation::vertical;
  }
  int height2() const { return z2; }
  std::pair<SiteCoord, SiteCoord> dual_edge() const;
  std::uint64_t key() const;
  static Plaquette from_key(std::uint64_t key);
  std::string str() const;
};

Plaquette plaquette_of_edge(const SiteCoord& u, const SiteCoord& v);

// Packs doubled coordinates (sites, plaquettes, segments, corners) into a key.
std::uint64_t pack_doubled(int x2, int y2, int z2);

enum class DomainKind { floor_box, slab_box };

struct Edge {
  int u;  // interior vertex id
  int v;  // interior or boundary vertex id
};

// Box domain with its outer vertex boundary.  Interior vertex ids come first
// in (k, j, i) lexicographic order, boundary ids follow in the same order.
class Domain {
 public:
  Domain(DomainKind kind, int n, int m);

  DomainKind kind() const { return kind_; }
  int n() const { return n_; }
  int m() const { return m_; }
  int i0() const { return i0_; }
  int k0() const { return k0_; }
  int layers() const { return layers_; }
  int k_end() const { return k0_ + layers_; }
  // Heights of the lowest and highest box faces, doubled.
  int floor2() const { return 2 * k0_; }
  int ceiling2() const { return 2 * (k0_ + layers_); }

  int num_sites() const { return num_sites_; }
  int num_boundary() const { return static_cast<int>(coords_.size()) - num_sites_; }
  int num_vertices() const { return static_cast<int>(coords_.size()); }
  bool is_interior(int v) const { return v >= 0 && v < num_sites_; }

  const SiteCoord& coord(int v) const { return coords_[v]; }
  // -1 when the site is neither interior nor boundary.
  int vertex_id(const SiteCoord& s) const;
  int vertex_id(int i, int j, int k) const { return vertex_id(SiteCoord{i, j, k}); }
  bool in_box(int i, int j, int k) const {
    return i >= i0_ && i < i0_ + n_ && j >= i0_ && j < i0_ + n_ && k >= k0_ && k < k0_ + layers_;
  }

  // Neighbour table: 6 entries per interior site, in direction order
  // -z, -y, -x, +x, +y, +z.
  int neighbor(int s, int dir) const { return nbr_[6 * s + dir]; }
  const int* neighbors(int s) const { return &nbr_[6 * s]; }
  int edge_at(int s, int dir) const { return site_edge_[6 * s + dir]; }

  const std::vector<Edge>& edges() const { return edges_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_interior_edges() const { return num_interior_edges_; }
  int num_boundary_edges() const { return num_edges() - num_interior_edges_; }
  Plaquette edge_plaquette(int e) const;
  // -1 when the plaquette is not dual to a domain edge.
  int edge_of_plaquette(const Plaquette& f) const;

  int column_index(int i, int j) const { return (j - i0_) * n_ + (i - i0_); }
  int num_columns() const { return n_ * n_; }
  std::string describe() const;

  static constexpr std::array<std::array<int, 3>, 6> kDirs = {{
      {0, 0, -1}, {0, -1, 0}, {-1, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};

 private:
  int grid_index(int i, int j, int k) const;

  DomainKind kind_;
  int n_, m_, i0_, k0_, layers_;
  int num_sites_ = 0;
  int num_interior_edges_ = 0;
  std::vector<SiteCoord> coords_;
  std::vector<int> grid_;
  std::vector<int> nbr_;
  std::vector<int> site_edge_;
  std::vector<Edge> edges_;
};

Domain build_domain(DomainKind kind, int n, int m);

struct BoundaryCondition {
  enum class Kind { floor, split, red_all };
  Kind kind = Kind::floor;
  int h = 0;
  Color red = kRed;

  static BoundaryCondition floor() { return {Kind::floor, 0, kRed}; }
  static BoundaryCondition split(int h) { return {Kind::split, h, kRed}; }
  static BoundaryCondition dobrushin() { return split(0); }
  static BoundaryCondition red_all() { return {Kind::red_all, 0, kRed}; }
  // Color assigned to a site outside the box at layer k.
  Color color_at_layer(int k) const;
  std::string str() const;
  bool operator==(const BoundaryCondition&) const = default;
};

// Throws for interior sites and for sites that are not on the boundary.
Color boundary_color(const Domain& d, const BoundaryCondition& bc, const SiteCoord& s);

struct ModelParams {
  int q = 2;
  double beta = 1.0;
  ModelParams() = default;
  ModelParams(int q_, double beta_);
  double p() const;
  double odds() const;  // p / (1 - p)
};

inline constexpr int kRedClass = 0;
inline constexpr int kBlueClass = 1;

// Domain together with a boundary condition: fixes boundary colors and the
// FK wiring classes.  Immutable and shared between configurations.
class Lattice {
 public:
  Lattice(Domain domain, BoundaryCondition bc);
  static std::shared_ptr<const Lattice> make(DomainKind kind, int n, int m, BoundaryCondition bc);

  const Domain& domain() const { return domain_; }
  const BoundaryCondition& bc() const { return bc_; }
  int num_sites() const { return domain_.num_sites(); }
  int num_vertices() const { return domain_.num_vertices(); }
  // Fixed color of a boundary vertex id.
  Color color(int v) const { return boundary_colors_[v - domain_.num_sites()]; }
  // -1 for interior vertices, else kRedClass / kBlueClass.
  int vertex_class(int v) const {
    return v < domain_.num_sites() ? -1 : boundary_class_[v - domain_.num_sites()];
  }
  bool has_class(int c) const { return class_size_[c] > 0; }
  int num_classes() const { return (class_size_[0] > 0) + (class_size_[1] > 0); }
  // Boundary vertices adjacent to both a red and a blue boundary vertex
  // around a common unit segment mark the rim where the full interface
  // attaches.
  bool is_rim_segment(int x2, int y2, int z2) const;

 private:
  Domain domain_;
  BoundaryCondition bc_;
  std::vector<Color> boundary_colors_;
  std::vector<int> boundary_class_;
  std::array<int, 2> class_size_{0, 0};
};

using LatticePtr = std::shared_ptr<const Lattice>;

}  // namespace pfsim
