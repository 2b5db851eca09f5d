#include "pfsim/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace pfsim {

bool adjacent(const SiteCoord& a, const SiteCoord& b) {
  int d = std::abs(a.i - b.i) + std::abs(a.j - b.j) + std::abs(a.k - b.k);
  return d == 1;
}

std::uint64_t pack_doubled(int x2, int y2, int z2) {
  constexpr std::int64_t off = 1 << 20;
  auto u = [](int c) { return static_cast<std::uint64_t>(c + off) & 0x1fffff; };
  return (u(z2) << 42) | (u(y2) << 21) | u(x2);
}

int Plaquette::normal_axis() const {
  if (x2 % 2 == 0) return 0;
  if (y2 % 2 == 0) return 1;
  return 2;
}

std::pair<SiteCoord, SiteCoord> Plaquette::dual_edge() const {
  std::array<int, 3> c{x2, y2, z2};
  int a = normal_axis();
  std::array<int, 3> lo = c, hi = c;
  lo[a] -= 1;
  hi[a] += 1;
  // Odd doubled coordinates divide exactly.
  auto to_site = [](const std::array<int, 3>& d) {
    return SiteCoord{(d[0] - 1) / 2, (d[1] - 1) / 2, (d[2] - 1) / 2};
  };
  return {to_site(lo), to_site(hi)};
}

std::uint64_t Plaquette::key() const { return pack_doubled(x2, y2, z2); }

Plaquette Plaquette::from_key(std::uint64_t key) {
  constexpr std::int64_t off = 1 << 20;
  auto c = [&](int shift) {
    return static_cast<int>(static_cast<std::int64_t>((key >> shift) & 0x1fffff) - off);
  };
  return Plaquette{c(0), c(21), c(42)};
}

std::string Plaquette::str() const {
  std::ostringstream os;
  os << '(' << x2 / 2.0 << ',' << y2 / 2.0 << ',' << z2 / 2.0 << ')';
  return os.str();
}

Plaquette plaquette_of_edge(const SiteCoord& u, const SiteCoord& v) {
  if (!adjacent(u, v)) throw GeometryError("plaquette_of_edge: sites are not adjacent");
  auto a = u.doubled();
  auto b = v.doubled();
  return Plaquette{(a[0] + b[0]) / 2, (a[1] + b[1]) / 2, (a[2] + b[2]) / 2};
}

Domain::Domain(DomainKind kind, int n, int m) : kind_(kind), n_(n), m_(m) {
  if (n < 2) throw GeometryError("domain side n must be at least 2");
  if (m < 1) throw GeometryError("domain height m must be at least 1");
  i0_ = -(n / 2);
  if (kind == DomainKind::floor_box) {
    k0_ = 0;
    layers_ = m;
  } else {
    k0_ = -m;
    layers_ = 2 * m;
  }
  num_sites_ = n * n * layers_;
  coords_.reserve(num_sites_);
  for (int k = k0_; k < k0_ + layers_; ++k)
    for (int j = i0_; j < i0_ + n; ++j)
      for (int i = i0_; i < i0_ + n; ++i) coords_.push_back({i, j, k});

  grid_.assign(static_cast<std::size_t>(n + 2) * (n + 2) * (layers_ + 2), -1);
  for (int v = 0; v < num_sites_; ++v) {
    const auto& s = coords_[v];
    grid_[grid_index(s.i, s.j, s.k)] = v;
  }
  // Outer vertex boundary, in (k, j, i) order.
  for (int k = k0_ - 1; k <= k0_ + layers_; ++k)
    for (int j = i0_ - 1; j <= i0_ + n; ++j)
      for (int i = i0_ - 1; i <= i0_ + n; ++i) {
        if (in_box(i, j, k)) continue;
        bool touches = false;
        for (const auto& d : kDirs)
          if (in_box(i + d[0], j + d[1], k + d[2])) touches = true;
        if (!touches) continue;
        grid_[grid_index(i, j, k)] = static_cast<int>(coords_.size());
        coords_.push_back({i, j, k});
      }

  nbr_.resize(6 * static_cast<std::size_t>(num_sites_));
  site_edge_.assign(6 * static_cast<std::size_t>(num_sites_), -1);
  for (int s = 0; s < num_sites_; ++s) {
    const auto& c = coords_[s];
    for (int d = 0; d < 6; ++d) {
      int w = grid_[grid_index(c.i + kDirs[d][0], c.j + kDirs[d][1], c.k + kDirs[d][2])];
      nbr_[6 * s + d] = w;
    }
  }
  // Interior edges first, then boundary edges; each block follows the
  // lower endpoint order.
  for (int pass = 0; pass < 2; ++pass) {
    for (int s = 0; s < num_sites_; ++s)
      for (int d = 0; d < 6; ++d) {
        int w = nbr_[6 * s + d];
        bool interior = w < num_sites_;
        if (pass == 0 && interior && w > s) {
          site_edge_[6 * s + d] = static_cast<int>(edges_.size());
          site_edge_[6 * w + (5 - d)] = static_cast<int>(edges_.size());
          edges_.push_back({s, w});
        } else if (pass == 1 && !interior) {
          site_edge_[6 * s + d] = static_cast<int>(edges_.size());
          edges_.push_back({s, w});
        }
      }
    if (pass == 0) num_interior_edges_ = static_cast<int>(edges_.size());
  }
}

int Domain::grid_index(int i, int j, int k) const {
  return ((k - k0_ + 1) * (n_ + 2) + (j - i0_ + 1)) * (n_ + 2) + (i - i0_ + 1);
}

int Domain::vertex_id(const SiteCoord& s) const {
  if (s.i < i0_ - 1 || s.i > i0_ + n_ || s.j < i0_ - 1 || s.j > i0_ + n_ || s.k < k0_ - 1 ||
      s.k > k0_ + layers_)
    return -1;
  return grid_[grid_index(s.i, s.j, s.k)];
}

Plaquette Domain::edge_plaquette(int e) const {
  const auto& ed = edges_[e];
  return plaquette_of_edge(coords_[ed.u], coords_[ed.v]);
}

int Domain::edge_of_plaquette(const Plaquette& f) const {
  auto [a, b] = f.dual_edge();
  int u = vertex_id(a), v = vertex_id(b);
  if (u < 0 || v < 0) return -1;
  if (!is_interior(u)) std::swap(u, v);
  if (!is_interior(u)) return -1;
  for (int d = 0; d < 6; ++d)
    if (nbr_[6 * u + d] == v) return site_edge_[6 * u + d];
  return -1;
}

std::string Domain::describe() const {
  std::ostringstream os;
  os << (kind_ == DomainKind::floor_box ? "FloorBox" : "SlabBox") << '(' << n_ << ',' << m_ << ')';
  return os.str();
}

Domain build_domain(DomainKind kind, int n, int m) { return Domain(kind, n, m); }

Color BoundaryCondition::color_at_layer(int k) const {
  switch (kind) {
    case Kind::floor:
      return k < 0 ? kBlue : red;
    case Kind::split:
      return k >= h ? red : kBlue;  // height k + 1/2 > h
    case Kind::red_all:
      return red;
  }
  return red;
}

std::string BoundaryCondition::str() const {
  switch (kind) {
    case Kind::floor:
      return "floor";
    case Kind::split:
      return "split(" + std::to_string(h) + ")";
    case Kind::red_all:
      return "red";
  }
  return "?";
}

Color boundary_color(const Domain& d, const BoundaryCondition& bc, const SiteCoord& s) {
  int v = d.vertex_id(s);
  if (v < 0) throw GeometryError("boundary_color: site is not on the domain boundary");
  if (d.is_interior(v)) throw GeometryError("boundary_color: site is interior");
  return bc.color_at_layer(s.k);
}

ModelParams::ModelParams(int q_, double beta_) : q(q_), beta(beta_) {
  if (q < 2) throw std::invalid_argument("q must be at least 2");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be finite and nonnegative");
}

double ModelParams::p() const { return -std::expm1(-beta); }
double ModelParams::odds() const { return std::expm1(beta); }

Lattice::Lattice(Domain domain, BoundaryCondition bc) : domain_(std::move(domain)), bc_(bc) {
  if (bc_.red == kBlue) throw std::invalid_argument("red boundary color must differ from blue");
  int nb = domain_.num_boundary();
  boundary_colors_.resize(nb);
  boundary_class_.resize(nb);
  for (int b = 0; b < nb; ++b) {
    const auto& s = domain_.coord(domain_.num_sites() + b);
    Color c = bc_.color_at_layer(s.k);
    boundary_colors_[b] = c;
    boundary_class_[b] = (c == kBlue) ? kBlueClass : kRedClass;
    ++class_size_[boundary_class_[b]];
  }
}

std::shared_ptr<const Lattice> Lattice::make(DomainKind kind, int n, int m, BoundaryCondition bc) {
  return std::make_shared<const Lattice>(Domain(kind, n, m), bc);
}

bool Lattice::is_rim_segment(int x2, int y2, int z2) const {
  std::array<int, 3> c{x2, y2, z2};
  int odd = -1, nodd = 0;
  for (int a = 0; a < 3; ++a)
    if ((c[a] & 1) != 0) {
      odd = a;
      ++nodd;
    }
  if (nodd != 1) return false;
  int a = (odd + 1) % 3, b = (odd + 2) % 3;
  bool red = false, blue = false;
  for (int sa = -1; sa <= 1; sa += 2)
    for (int sb = -1; sb <= 1; sb += 2) {
      std::array<int, 3> s = c;
      s[a] += sa;
      s[b] += sb;
      int v = domain_.vertex_id(SiteCoord{(s[0] - 1) / 2, (s[1] - 1) / 2, (s[2] - 1) / 2});
      if (v < 0 || domain_.is_interior(v)) continue;
      if (vertex_class(v) == kRedClass) red = true;
      else blue = true;
    }
  return red && blue;
}

}  // namespace pfsim
