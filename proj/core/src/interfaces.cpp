#include "pfsim/interfaces.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <unordered_set>

#include "pfsim/union_find.hpp"

namespace pfsim {

int VertexRegion::count() const {
  int c = 0;
  for (auto b : in) c += b != 0;
  return c;
}

bool VertexRegion::subset_of(const VertexRegion& o) const {
  for (std::size_t v = 0; v < in.size(); ++v)
    if (in[v] && !o.in[v]) return false;
  return true;
}

bool VertexRegion::disjoint_from(const VertexRegion& o) const {
  for (std::size_t v = 0; v < in.size(); ++v)
    if (in[v] && o.in[v]) return false;
  return true;
}

namespace {

// Floods interior sites from the seed boundary vertices through sites
// accepted by `pass`; boundary vertices are never entered from inside.
template <class Seed, class Pass>
std::vector<std::uint8_t> flood(const Domain& d, Seed seed, Pass pass) {
  const int V = d.num_sites();
  std::vector<std::uint8_t> reached(d.num_vertices(), 0);
  std::vector<int> stack;
  for (int v = V; v < d.num_vertices(); ++v)
    if (seed(v)) reached[v] = 1;
  for (int e = d.num_interior_edges(); e < d.num_edges(); ++e) {
    const auto& ed = d.edges()[e];
    if (reached[ed.v] && !reached[ed.u] && pass(ed.u, e)) {
      reached[ed.u] = 1;
      stack.push_back(ed.u);
    }
  }
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    for (int dir = 0; dir < 6; ++dir) {
      int w = d.neighbor(s, dir);
      if (w >= V || reached[w]) continue;
      if (!pass(w, d.edge_at(s, dir))) continue;
      reached[w] = 1;
      stack.push_back(w);
    }
  }
  return reached;
}

}  // namespace

VertexRegion augment(const Domain& d, const VertexRegion& r, RegionTag tag) {
  const int V = d.num_sites();
  auto reached = flood(
      d, [&](int v) { return !r.in[v]; }, [&](int s, int) { return !r.in[s]; });
  VertexRegion out{tag, r.in};
  for (int s = 0; s < V; ++s)
    if (!r.in[s] && !reached[s]) out.in[s] = 1;
  return out;
}

std::vector<Plaquette> edge_boundary(const Domain& d, const VertexRegion& r) {
  std::vector<Plaquette> out;
  for (int e = 0; e < d.num_edges(); ++e) {
    const auto& ed = d.edges()[e];
    if (r.in[ed.u] != r.in[ed.v]) out.push_back(d.edge_plaquette(e));
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool InterfaceSet::contains(const Plaquette& f) const {
  return std::binary_search(plaquettes.begin(), plaquettes.end(), f);
}

bool InterfaceSet::subset_of(const InterfaceSet& o) const {
  return std::includes(o.plaquettes.begin(), o.plaquettes.end(), plaquettes.begin(), plaquettes.end());
}

ColumnHeights column_heights(const Domain& d, const std::vector<Plaquette>& plaquettes) {
  ColumnHeights h;
  h.n = d.n();
  h.i0 = d.i0();
  h.max2.assign(d.num_columns(), kNoHeight);
  h.min2.assign(d.num_columns(), kNoHeight);
  for (const auto& f : plaquettes) {
    if (f.orientation() != Orientation::horizontal) continue;
    int i = (f.x2 - 1) / 2, j = (f.y2 - 1) / 2;
    if (i < d.i0() || i >= d.i0() + d.n() || j < d.i0() || j >= d.i0() + d.n()) continue;
    int c = h.col(i, j);
    if (h.max2[c] == kNoHeight || f.z2 > h.max2[c]) h.max2[c] = f.z2;
    if (h.min2[c] == kNoHeight || f.z2 < h.min2[c]) h.min2[c] = f.z2;
  }
  return h;
}

ColumnHeights InterfaceSet::heights(const Domain& d) const { return column_heights(d, plaquettes); }

int InterfaceSet::max_height2() const {
  int m = kNoHeight;
  for (const auto& f : plaquettes) m = std::max(m, f.z2);
  return m;
}

int InterfaceSet::min_height2() const {
  if (plaquettes.empty()) return kNoHeight;
  int m = INT_MAX;
  for (const auto& f : plaquettes) m = std::min(m, f.z2);
  return m;
}

VertexRegion potts_cluster(const SpinConfig& sigma, PottsSide side) {
  const Domain& d = sigma.domain();
  const Color target = side == PottsSide::blue ? kBlue : sigma.lattice().bc().red;
  auto reached = flood(
      d, [&](int v) { return sigma[v] == target; }, [&](int s, int) { return sigma[s] == target; });
  return VertexRegion{side == PottsSide::blue ? RegionTag::v_blue : RegionTag::v_red, std::move(reached)};
}

VertexRegion fk_cluster(const EdgeConfig& omega, FkSide side) {
  const Lattice& lat = omega.lattice();
  const Domain& d = lat.domain();
  const int cls = side == FkSide::top ? kRedClass : kBlueClass;
  auto reached = flood(
      d, [&](int v) { return lat.vertex_class(v) == cls; }, [&](int, int e) { return omega.open(e); });
  return VertexRegion{side == FkSide::top ? RegionTag::v_top : RegionTag::v_bot, std::move(reached)};
}

InterfaceSet extract_potts_interface(const SpinConfig& sigma, PottsSide side) {
  const Domain& d = sigma.domain();
  VertexRegion v = potts_cluster(sigma, side);
  InterfaceSet I;
  I.label = side == PottsSide::blue ? InterfaceLabel::blue : InterfaceLabel::red;
  I.region = augment(d, v, side == PottsSide::blue ? RegionTag::vhat_blue : RegionTag::vhat_red);
  I.plaquettes = edge_boundary(d, I.region);
  return I;
}

InterfaceSet extract_fk_interface(const EdgeConfig& omega, FkSide side) {
  if (!check_disconnection(omega))
    throw DisconnectionError("extract_fk_interface: disconnection event violated");
  const Domain& d = omega.domain();
  VertexRegion v = fk_cluster(omega, side);
  InterfaceSet I;
  I.label = side == FkSide::top ? InterfaceLabel::top : InterfaceLabel::bot;
  I.region = augment(d, v, side == FkSide::top ? RegionTag::vhat_top : RegionTag::vhat_bot);
  I.plaquettes = edge_boundary(d, I.region);
  return I;
}

std::array<std::array<int, 3>, 4> plaquette_segments(const Plaquette& f) {
  std::array<int, 3> m{f.x2, f.y2, f.z2};
  int a = f.normal_axis();
  std::array<std::array<int, 3>, 4> out{};
  int k = 0;
  for (int b = 0; b < 3; ++b) {
    if (b == a) continue;
    for (int s = -1; s <= 1; s += 2) {
      out[k] = m;
      out[k][b] += s;
      ++k;
    }
  }
  return out;
}

std::array<Plaquette, 4> segment_plaquettes(const std::array<int, 3>& seg) {
  int c = (seg[0] & 1) ? 0 : (seg[1] & 1) ? 1 : 2;
  std::array<Plaquette, 4> out{};
  int k = 0;
  for (int a = 0; a < 3; ++a) {
    if (a == c) continue;
    for (int s = -1; s <= 1; s += 2) {
      auto p = seg;
      p[a] += s;
      out[k++] = Plaquette{p[0], p[1], p[2]};
    }
  }
  return out;
}

std::array<std::array<int, 3>, 4> plaquette_corners(const Plaquette& f) {
  std::array<int, 3> m{f.x2, f.y2, f.z2};
  int a = f.normal_axis();
  int b = (a + 1) % 3, c = (a + 2) % 3;
  std::array<std::array<int, 3>, 4> out{};
  int k = 0;
  for (int sb = -1; sb <= 1; sb += 2)
    for (int sc = -1; sc <= 1; sc += 2) {
      out[k] = m;
      out[k][b] += sb;
      out[k][c] += sc;
      ++k;
    }
  return out;
}

std::vector<Plaquette> one_neighbors(const Plaquette& f) {
  std::vector<Plaquette> out;
  out.reserve(12);
  for (const auto& seg : plaquette_segments(f))
    for (const auto& g : segment_plaquettes(seg))
      if (g != f) out.push_back(g);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

InterfaceSet extract_full_interface(const EdgeConfig& omega) {
  const Lattice& lat = omega.lattice();
  if (lat.num_classes() < 2)
    throw std::invalid_argument("extract_full_interface: needs a two-class boundary condition");
  if (!check_disconnection(omega))
    throw DisconnectionError("extract_full_interface: disconnection event violated");
  const Domain& d = lat.domain();
  std::unordered_set<std::uint64_t> closed;
  closed.reserve(2 * d.num_edges());
  for (int e = 0; e < d.num_edges(); ++e)
    if (!omega.open(e)) closed.insert(d.edge_plaquette(e).key());
  std::unordered_set<std::uint64_t> seen;
  std::vector<Plaquette> stack;
  for (int e = 0; e < d.num_edges(); ++e) {
    if (omega.open(e)) continue;
    Plaquette f = d.edge_plaquette(e);
    for (const auto& s : plaquette_segments(f))
      if (lat.is_rim_segment(s[0], s[1], s[2])) {
        if (seen.insert(f.key()).second) stack.push_back(f);
        break;
      }
  }
  InterfaceSet I;
  I.label = InterfaceLabel::full;
  while (!stack.empty()) {
    Plaquette f = stack.back();
    stack.pop_back();
    I.plaquettes.push_back(f);
    for (const auto& s : plaquette_segments(f))
      for (const auto& g : segment_plaquettes(s)) {
        auto key = g.key();
        if (closed.count(key) && seen.insert(key).second) stack.push_back(g);
      }
  }
  std::sort(I.plaquettes.begin(), I.plaquettes.end());
  return I;
}

bool verify_ordering(const InterfaceSet& top, const InterfaceSet& red, const InterfaceSet& blue,
                     const InterfaceSet& bot) {
  return bot.region.subset_of(blue.region) && top.region.subset_of(red.region) &&
         red.region.disjoint_from(blue.region);
}

bool blue_interface_in_upper_half(const SpinConfig& sigma) {
  const Domain& d = sigma.domain();
  VertexRegion vb = potts_cluster(sigma, PottsSide::blue);
  auto reached = flood(
      d, [&](int v) { return !vb.in[v]; }, [&](int s, int) { return !vb.in[s]; });
  for (int s = 0; s < d.num_sites(); ++s)
    if (reached[s] && d.coord(s).k < 0) return false;
  return true;
}

std::vector<Plaquette> theta_shift(const std::vector<Plaquette>& I, int j, const Domain& d) {
  if (j < 0) throw std::invalid_argument("theta_shift: j must be nonnegative");
  if (j == 0) return I;
  int top = kNoHeight;
  for (const auto& f : I) {
    if (f.z2 < 0) throw std::invalid_argument("theta_shift: interface must lie in the upper half-space");
    top = std::max(top, f.z2);
  }
  if (top != kNoHeight && top + 2 * j > d.ceiling2())
    throw std::out_of_range("theta_shift: lifted interface overflows the domain ceiling");
  if (j > d.layers()) throw std::out_of_range("theta_shift: lift exceeds the domain height");
  std::vector<Plaquette> out;
  out.reserve(I.size() + 4 * j * d.n());
  for (const auto& f : I) out.push_back({f.x2, f.y2, f.z2 + 2 * j});
  for (int k = 0; k < j; ++k) {
    if (!d.in_box(d.i0(), d.i0(), k)) throw std::out_of_range("theta_shift: layer outside the domain");
    for (int jj = d.i0(); jj < d.i0() + d.n(); ++jj)
      for (int ii = d.i0(); ii < d.i0() + d.n(); ++ii) {
        int s = d.vertex_id(ii, jj, k);
        for (int dir = 1; dir <= 4; ++dir) {
          int w = d.neighbor(s, dir);
          if (!d.is_interior(w)) out.push_back(plaquette_of_edge(d.coord(s), d.coord(w)));
        }
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

InterfaceSet theta_shift(const InterfaceSet& I, int j, const Domain& d) {
  InterfaceSet out;
  out.label = I.label;
  out.plaquettes = theta_shift(I.plaquettes, j, d);
  return out;
}

EdgeConfig spike_transform(const EdgeConfig& omega, const std::vector<Column>& A, int h) {
  if (A.empty()) return omega;
  if (h < 1) throw std::invalid_argument("spike_transform: h must be positive");
  const Domain& d = omega.domain();
  InterfaceSet top = extract_fk_interface(omega, FkSide::top);
  VertexRegion vtop = fk_cluster(omega, FkSide::top);
  ColumnHeights hts = top.heights(d);
  EdgeConfig out = omega;
  for (const auto& [i, j] : A) {
    if (i < d.i0() || i >= d.i0() + d.n() || j < d.i0() || j >= d.i0() + d.n())
      throw std::invalid_argument("spike_transform: column outside the footprint");
    int u2 = hts.min2[hts.col(i, j)];
    if (u2 == kNoHeight) throw std::invalid_argument("spike_transform: column blocked (no top plaquette)");
    int u = u2 / 2;
    int v0 = d.vertex_id(i, j, u);
    if (!d.is_interior(v0) || !vtop.contains(v0))
      throw std::invalid_argument("spike_transform: column blocked (v0 not in the top cluster)");
    std::vector<int> v{v0};
    for (int t = 1; t <= h; ++t) {
      int w = d.vertex_id(i, j, u - t);
      if (!d.is_interior(w)) throw std::invalid_argument("spike_transform: spike leaves the domain");
      v.push_back(w);
    }
    for (int t = 1; t <= h; ++t) {
      out.set(d.edge_at(v[t], 5), true);
      for (int dir = 1; dir <= 4; ++dir) out.set(d.edge_at(v[t], dir), false);
    }
    out.set(d.edge_at(v[h], 0), false);
  }
  if (!check_disconnection(out)) throw std::logic_error("spike_transform: output violates disconnection");
  return out;
}

VertexRegion region_above(const Lattice& lat, const std::vector<Plaquette>& I) {
  const Domain& d = lat.domain();
  std::unordered_set<std::uint64_t> cut;
  for (const auto& f : I) cut.insert(f.key());
  auto reached = flood(
      d, [&](int v) { return lat.vertex_class(v) == kRedClass; },
      [&](int, int e) { return !cut.count(d.edge_plaquette(e).key()); });
  return augment(d, VertexRegion{RegionTag::v_top, std::move(reached)}, RegionTag::vhat_top);
}

}  // namespace pfsim
