#include "pfsim/walls.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "pfsim/union_find.hpp"

namespace pfsim {

int WallDecomposition::total_excess() const {
  int t = 0;
  for (const auto& w : walls) t += w.excess_area();
  return t;
}

std::vector<Plaquette> star_augment(const InterfaceSet& full, const Domain& d) {
  std::set<Plaquette> out(full.plaquettes.begin(), full.plaquettes.end());
  for (const auto& f : full.plaquettes)
    for (const auto& g : one_neighbors(f))
      if (g.orientation() == Orientation::horizontal && !out.count(g) && d.edge_of_plaquette(g) >= 0)
        out.insert(g);
  return {out.begin(), out.end()};
}

namespace {

// Groups plaquettes into 0-connected components (shared corner).
std::vector<std::vector<int>> corner_components(const std::vector<Plaquette>& ps) {
  UnionFind uf(static_cast<int>(ps.size()));
  std::unordered_map<std::uint64_t, int> first;
  for (int i = 0; i < static_cast<int>(ps.size()); ++i)
    for (const auto& c : plaquette_corners(ps[i])) {
      auto [it, fresh] = first.emplace(pack_doubled(c[0], c[1], c[2]), i);
      if (!fresh) uf.unite(it->second, i);
    }
  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < static_cast<int>(ps.size()); ++i) groups[uf.find(i)].push_back(i);
  std::vector<std::vector<int>> out;
  for (auto& [r, g] : groups) out.push_back(std::move(g));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

std::vector<Cell2> hull_cells(const Wall& w, const Domain& d) {
  const int n = d.n(), i0 = d.i0();
  const int W = n + 2;
  auto idx = [&](int i, int j) { return (j - i0 + 1) * W + (i - i0 + 1); };
  std::vector<std::uint8_t> blocked(W * W, 0), reached(W * W, 0);
  for (const auto& c : w.cells) blocked[idx((c.x2 - 1) / 2, (c.y2 - 1) / 2)] = 1;
  std::set<Cell2> segs(w.segments.begin(), w.segments.end());
  std::vector<std::pair<int, int>> stack;
  for (int j = i0 - 1; j <= i0 + n; ++j)
    for (int i = i0 - 1; i <= i0 + n; ++i)
      if (i == i0 - 1 || i == i0 + n || j == i0 - 1 || j == i0 + n) {
        reached[idx(i, j)] = 1;
        stack.push_back({i, j});
      }
  const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
  while (!stack.empty()) {
    auto [i, j] = stack.back();
    stack.pop_back();
    for (int k = 0; k < 4; ++k) {
      int a = i + di[k], b = j + dj[k];
      if (a < i0 - 1 || a > i0 + n || b < i0 - 1 || b > i0 + n) continue;
      if (reached[idx(a, b)] || blocked[idx(a, b)]) continue;
      // Segment between the two cells, in doubled coordinates.
      Cell2 s{i + a + 1, j + b + 1};
      if (segs.count(s)) continue;
      reached[idx(a, b)] = 1;
      stack.push_back({a, b});
    }
  }
  std::vector<Cell2> out;
  for (int j = i0; j < i0 + n; ++j)
    for (int i = i0; i < i0 + n; ++i)
      if (!reached[idx(i, j)]) out.push_back({2 * i + 1, 2 * j + 1});
  return out;
}

}  // namespace

WallDecomposition decompose_walls(const InterfaceSet& full, const Domain& d) {
  WallDecomposition dec;
  dec.star = star_augment(full, d);
  std::unordered_map<std::uint64_t, int> per_column;
  auto colkey = [](const Plaquette& f) { return pack_doubled(f.x2, f.y2, 0); };
  for (const auto& f : dec.star)
    if (f.orientation() == Orientation::horizontal) ++per_column[colkey(f)];
  std::vector<Plaquette> ceiling, wall;
  for (const auto& f : dec.star) {
    if (f.orientation() == Orientation::horizontal && per_column[colkey(f)] == 1) ceiling.push_back(f);
    else wall.push_back(f);
  }
  for (const auto& g : corner_components(ceiling)) {
    Ceiling c;
    for (int i : g) c.plaquettes.push_back(ceiling[i]);
    c.height2 = c.plaquettes.front().z2;
    dec.ceilings.push_back(std::move(c));
  }
  const int lo = 2 * d.i0(), hi = 2 * (d.i0() + d.n());
  for (const auto& g : corner_components(wall)) {
    Wall w;
    std::set<Cell2> cells, segs;
    for (int i : g) {
      const Plaquette& f = wall[i];
      (full.contains(f) ? w.A : w.B).push_back(f);
      if (f.orientation() == Orientation::horizontal) {
        cells.insert({f.x2, f.y2});
        if (f.x2 == lo + 1 || f.x2 == hi - 1 || f.y2 == lo + 1 || f.y2 == hi - 1) w.touches_side = true;
      } else {
        segs.insert({f.x2, f.y2});
        if (f.x2 == lo || f.x2 == hi || f.y2 == lo || f.y2 == hi) w.touches_side = true;
      }
    }
    w.cells.assign(cells.begin(), cells.end());
    w.segments.assign(segs.begin(), segs.end());
    w.hull = hull_cells(w, d);
    dec.walls.push_back(std::move(w));
  }
  return dec;
}

std::vector<int> outermost_walls(const std::vector<Wall>& walls) {
  std::vector<int> out;
  for (int a = 0; a < static_cast<int>(walls.size()); ++a) {
    bool inside = false;
    for (int b = 0; b < static_cast<int>(walls.size()) && !inside; ++b) {
      if (a == b) continue;
      std::set<Cell2> hull(walls[b].hull.begin(), walls[b].hull.end());
      bool all = true;
      for (const auto& c : walls[a].cells)
        if (!hull.count(c)) {
          all = false;
          break;
        }
      for (const auto& s : walls[a].segments) {
        if (!all) break;
        Cell2 c1 = (s.x2 % 2 == 0) ? Cell2{s.x2 - 1, s.y2} : Cell2{s.x2, s.y2 - 1};
        Cell2 c2 = (s.x2 % 2 == 0) ? Cell2{s.x2 + 1, s.y2} : Cell2{s.x2, s.y2 + 1};
        if (!hull.count(c1) && !hull.count(c2)) all = false;
      }
      inside = all;
    }
    if (!inside) out.push_back(a);
  }
  return out;
}

WallSampleStats wall_sample_stats(const InterfaceSet& full, const InterfaceSet& blue, const Domain& d,
                                  int level_h) {
  WallSampleStats s;
  s.full_size = full.size();
  WallDecomposition dec = decompose_walls(full, d);
  s.n_walls = static_cast<int>(dec.walls.size());
  s.total_excess = dec.total_excess();
  for (int w : outermost_walls(dec.walls)) s.outermost_hull_area += static_cast<int>(dec.walls[w].hull.size());
  ColumnHeights h = blue.heights(d);
  for (int v : h.max2)
    if (v != kNoHeight && v >= 2 * (level_h + 1)) ++s.level_set_count;
  return s;
}

WallAreaSummary wall_area_statistics(const std::vector<WallSampleStats>& samples, int n) {
  std::vector<double> hull, level, area;
  const double n2 = double(n) * n;
  for (const auto& s : samples) {
    hull.push_back(s.outermost_hull_area / n2);
    level.push_back(s.level_set_count / n2);
    area.push_back(s.full_size / n2);
  }
  return {estimate(hull), estimate(level), estimate(area)};
}

}  // namespace pfsim
