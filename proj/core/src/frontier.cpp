#include "pfsim/fkgraph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "pfsim/union_find.hpp"

namespace pfsim {

namespace {

inline int node_index(const FkGraph& g, int v) {
  if (v >= 0) return v;
  return g.n + (v == kRedNode ? 0 : 1);
}

}  // namespace

double fk_partition_brute(const FkGraph& g, int q, double cap) {
  const int E = g.num_edges();
  if (E > 62 || std::ldexp(1.0, E) > cap)
    throw std::length_error("fk_partition_brute: too many edges to enumerate");
  const int R = g.n, B = g.n + 1;
  double Z = 0.0;
  const std::uint64_t total = std::uint64_t{1} << E;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    UnionFind uf(g.n + 2);
    double w = 1.0;
    for (int e = 0; e < E; ++e)
      if (mask >> e & 1) {
        uf.unite(g.edges[e].u, node_index(g, g.edges[e].v));
        w *= g.edges[e].w;
      }
    const bool merged = g.has_red && g.has_blue && uf.same(R, B);
    if (merged && g.forbid_merge) continue;
    bool ok = true;
    if (!g.must_reach_red.empty())
      for (int v = 0; v < g.n && ok; ++v)
        if (g.must_reach_red[v] && (!g.has_red || !uf.same(v, R))) ok = false;
    if (!ok) continue;
    std::unordered_set<int> roots;
    for (int v = 0; v < g.n; ++v) roots.insert(uf.find(v));
    if (g.has_red) roots.insert(uf.find(R));
    if (g.has_blue) roots.insert(uf.find(B));
    Z += w * std::pow(double(q), double(roots.size()));
  }
  return Z;
}

namespace {

using Key = unsigned __int128;

struct KeyHash {
  std::size_t operator()(Key k) const {
    std::uint64_t lo = static_cast<std::uint64_t>(k), hi = static_cast<std::uint64_t>(k >> 64);
    return std::hash<std::uint64_t>()(lo * 0x9e3779b97f4a7c15ULL ^ (hi + 0x632be59bd9b4e019ULL));
  }
};

constexpr int kMaxFrontier = 14;
constexpr std::uint8_t kRedLabel = 0, kBlueLabel = 1;

// Frontier state: block label per frontier slot, must-reach-red flag per
// label, whether the classes have been joined.
struct State {
  std::array<std::uint8_t, kMaxFrontier + 1> lab{};
  std::uint32_t sflag = 0;
  bool merged = false;
};

Key encode(const State& s, int F) {
  Key k = 0;
  for (int i = 0; i < F; ++i) k |= Key(s.lab[i]) << (4 * i);
  k |= Key(s.sflag & 0xFFFF) << 64;
  k |= Key(s.merged ? 1 : 0) << 80;
  return k;
}

State decode(Key k, int F) {
  State s;
  for (int i = 0; i < F; ++i) s.lab[i] = static_cast<std::uint8_t>((k >> (4 * i)) & 15);
  s.sflag = static_cast<std::uint32_t>((k >> 64) & 0xFFFF);
  s.merged = ((k >> 80) & 1) != 0;
  return s;
}

// Renumbers free labels by first appearance; false if they do not fit.
bool canonicalize(State& s, int F) {
  std::array<int, 32> map;
  map.fill(-1);
  map[kRedLabel] = kRedLabel;
  map[kBlueLabel] = kBlueLabel;
  int next = 2;
  std::uint32_t flags = s.sflag & 0x3;
  for (int i = 0; i < F; ++i) {
    int l = s.lab[i];
    if (map[l] < 0) {
      if (next > 15) return false;
      map[l] = next++;
      if (s.sflag >> l & 1) flags |= 1u << map[l];
    }
    s.lab[i] = static_cast<std::uint8_t>(map[l]);
  }
  s.sflag = flags;
  return true;
}

// Joins blocks a and b.  Returns false when the state must be dropped.
bool join(State& s, int F, int a, int b, bool forbid_merge) {
  if (s.merged) {
    if (a == kBlueLabel) a = kRedLabel;
    if (b == kBlueLabel) b = kRedLabel;
  }
  if (a == b) return true;
  if (a > b) std::swap(a, b);
  if (a == kRedLabel && b == kBlueLabel) {
    if (forbid_merge) return false;
    s.merged = true;
    for (int i = 0; i < F; ++i)
      if (s.lab[i] == kBlueLabel) s.lab[i] = kRedLabel;
    s.sflag &= ~0x3u;
    return true;
  }
  // b is a free block; a may be a class or a free block.
  for (int i = 0; i < F; ++i)
    if (s.lab[i] == b) s.lab[i] = static_cast<std::uint8_t>(a);
  if (a == kRedLabel) {
    s.sflag &= ~(1u << b);
  } else {
    if (s.sflag >> b & 1) s.sflag |= 1u << a;
    s.sflag &= ~(1u << b);
  }
  return true;
}

}  // namespace

double fk_partition_frontier(const FkGraph& g, int q, const std::vector<int>& order) {
  const int n = g.n;
  if (static_cast<int>(order.size()) != n) throw std::invalid_argument("fk_partition_frontier: bad order");
  std::vector<int> pos(n, -1);
  for (int t = 0; t < n; ++t) {
    if (order[t] < 0 || order[t] >= n || pos[order[t]] >= 0)
      throw std::invalid_argument("fk_partition_frontier: order is not a permutation");
    pos[order[t]] = t;
  }
  // Per vertex: edges to earlier vertices, combined class weights, last use.
  std::vector<std::vector<std::pair<int, double>>> back(n);
  std::vector<std::array<double, 2>> cls(n, {1.0, 1.0});  // product of (1 + w)
  std::vector<int> last(n);
  for (int v = 0; v < n; ++v) last[v] = pos[v];
  for (const auto& e : g.edges) {
    if (e.v < 0) {
      if ((e.v == kRedNode && !g.has_red) || (e.v == kBlueNode && !g.has_blue))
        throw std::invalid_argument("fk_partition_frontier: edge to an absent class");
      cls[e.u][e.v == kRedNode ? 0 : 1] *= 1.0 + e.w;
      continue;
    }
    if (e.u == e.v) continue;
    int a = e.u, b = e.v;
    if (pos[a] < pos[b]) std::swap(a, b);  // a is processed later
    back[a].push_back({b, e.w});
    last[b] = std::max(last[b], pos[a]);
  }
  const double dq = q;
  std::vector<int> frontier;  // vertex per slot
  std::unordered_map<Key, double, KeyHash> cur, nxt;
  cur[encode(State{}, 0)] = 1.0;
  for (int t = 0; t < n; ++t) {
    const int v = order[t];
    const int F = static_cast<int>(frontier.size());
    if (F + 1 > kMaxFrontier) throw std::length_error("fk_partition_frontier: frontier too wide");
    std::vector<int> slot_of_back;
    for (auto& [u, w] : back[v]) {
      auto it = std::find(frontier.begin(), frontier.end(), u);
      slot_of_back.push_back(static_cast<int>(it - frontier.begin()));
    }
    // Slots that retire after this vertex.
    std::vector<int> frontier2 = frontier;
    frontier2.push_back(v);
    std::vector<char> retire(F + 1, 0);
    for (int i = 0; i <= F; ++i) retire[i] = last[frontier2[i]] == t;
    std::vector<int> keep;
    for (int i = 0; i <= F; ++i)
      if (!retire[i]) keep.push_back(frontier2[i]);
    const bool need_red = !g.must_reach_red.empty() && g.must_reach_red[v];
    nxt.clear();
    for (const auto& [key, weight] : cur) {
      State s0 = decode(key, F);
      s0.lab[F] = 15;  // fresh block; 15 is never used after canonicalization of F < 14 slots
      if (need_red) s0.sflag |= 1u << 15;
      // Enumerate class edges then back edges.
      std::vector<std::pair<State, double>> branches{{s0, weight}};
      for (int c = 0; c < 2; ++c) {
        const double wopen = cls[v][c] - 1.0;
        if (wopen == 0.0) continue;
        std::vector<std::pair<State, double>> nb;
        nb.reserve(2 * branches.size());
        for (auto& [s, w] : branches) {
          nb.push_back({s, w});
          State o = s;
          if (join(o, F + 1, o.lab[F], c == 0 ? kRedLabel : kBlueLabel, g.forbid_merge))
            nb.push_back({o, w * wopen});
        }
        branches.swap(nb);
      }
      for (std::size_t k = 0; k < back[v].size(); ++k) {
        const int slot = slot_of_back[k];
        const double we = back[v][k].second;
        std::vector<std::pair<State, double>> nb;
        nb.reserve(2 * branches.size());
        for (auto& [s, w] : branches) {
          nb.push_back({s, w});
          State o = s;
          if (join(o, F + 1, o.lab[F], o.lab[slot], g.forbid_merge)) nb.push_back({o, w * we});
        }
        branches.swap(nb);
      }
      for (auto& [s, w] : branches) {
        double wt = w;
        bool dead = false;
        // Close blocks losing their last frontier slot.
        for (int i = 0; i <= F && !dead; ++i) {
          if (!retire[i]) continue;
          int l = s.lab[i];
          if (s.merged && l == kBlueLabel) l = kRedLabel;
          if (l == kRedLabel || l == kBlueLabel) continue;
          bool alive = false;
          for (int k2 = 0; k2 <= F; ++k2)
            if (!retire[k2] && s.lab[k2] == l) alive = true;
          // Also alive if another retiring slot was already handled: only
          // close once, at the first retiring slot of the block.
          bool first = true;
          for (int k2 = 0; k2 < i; ++k2)
            if (retire[k2] && s.lab[k2] == l) first = false;
          if (alive || !first) continue;
          if (s.sflag >> l & 1) dead = true;
          else wt *= dq;
        }
        if (dead) continue;
        State r;
        r.merged = s.merged;
        r.sflag = s.sflag & 0x3;
        int k2 = 0;
        for (int i = 0; i <= F; ++i) {
          if (retire[i]) continue;
          r.lab[k2++] = s.lab[i];
        }
        // Carry flags of surviving free labels.
        for (int i = 0; i < k2; ++i)
          if (r.lab[i] >= 2 && (s.sflag >> r.lab[i] & 1)) r.sflag |= 1u << r.lab[i];
        if (!canonicalize(r, k2)) throw std::length_error("fk_partition_frontier: too many blocks");
        nxt[encode(r, k2)] += wt;
      }
    }
    frontier = keep;
    cur.swap(nxt);
  }
  double Z = 0.0;
  for (const auto& [key, w] : cur) {
    State s = decode(key, 0);
    int classes = int(g.has_red) + int(g.has_blue);
    if (s.merged) --classes;
    if (!s.merged && (s.sflag >> kBlueLabel & 1)) continue;
    if (!g.has_red && !g.must_reach_red.empty()) {
      bool any = std::any_of(g.must_reach_red.begin(), g.must_reach_red.end(), [](auto b) { return b != 0; });
      if (any) continue;
    }
    Z += w * std::pow(dq, classes);
  }
  return Z;
}

std::vector<int> coordinate_order(const FkGraph& g, std::array<int, 3> axes) {
  if (static_cast<int>(g.coords.size()) != g.n) throw std::invalid_argument("coordinate_order: no coordinates");
  std::vector<int> order(g.n);
  for (int v = 0; v < g.n; ++v) order[v] = v;
  auto key = [&](int v) {
    const auto& c = g.coords[v];
    std::array<int, 3> x{c.i, c.j, c.k};
    return std::array<int, 3>{x[axes[0]], x[axes[1]], x[axes[2]]};
  };
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return key(a) < key(b); });
  return order;
}

FkGraph region_graph(const Lattice& lat, const VertexRegion& region, const std::vector<Plaquette>& cut,
                     double w, bool top_side_of_cut) {
  const Domain& d = lat.domain();
  std::unordered_set<std::uint64_t> cutset;
  for (const auto& f : cut) cutset.insert(f.key());
  FkGraph g;
  std::vector<int> local(d.num_vertices(), -1);
  for (int s = 0; s < d.num_sites(); ++s)
    if (region.contains(s)) {
      local[s] = g.n++;
      g.coords.push_back(d.coord(s));
      g.site_of.push_back(s);
    }
  g.must_reach_red.assign(g.n, 0);
  for (int e = 0; e < d.num_edges(); ++e) {
    const auto& ed = d.edges()[e];
    const bool in_u = region.contains(ed.u), in_v = region.contains(ed.v);
    if (cutset.count(d.edge_plaquette(e).key())) {
      if (top_side_of_cut) {
        if (in_u && !in_v) g.must_reach_red[local[ed.u]] = 1;
        if (in_v && !in_u && d.is_interior(ed.v)) g.must_reach_red[local[ed.v]] = 1;
      }
      continue;
    }
    if (!in_u || !in_v) continue;
    if (d.is_interior(ed.v)) {
      g.edges.push_back({local[ed.u], local[ed.v], w});
    } else {
      const int c = lat.vertex_class(ed.v);
      g.edges.push_back({local[ed.u], c == kRedClass ? kRedNode : kBlueNode, w});
    }
  }
  for (int v = d.num_sites(); v < d.num_vertices(); ++v)
    if (region.contains(v)) {
      if (lat.vertex_class(v) == kRedClass) g.has_red = true;
      else g.has_blue = true;
    }
  return g;
}

FkGraph domain_graph(const Lattice& lat, double w, bool forbid_merge) {
  const Domain& d = lat.domain();
  FkGraph g;
  g.n = d.num_sites();
  for (int s = 0; s < g.n; ++s) {
    g.coords.push_back(d.coord(s));
    g.site_of.push_back(s);
  }
  for (const auto& ed : d.edges()) {
    if (d.is_interior(ed.v)) g.edges.push_back({ed.u, ed.v, w});
    else g.edges.push_back({ed.u, lat.vertex_class(ed.v) == kRedClass ? kRedNode : kBlueNode, w});
  }
  g.has_red = lat.has_class(kRedClass);
  g.has_blue = lat.has_class(kBlueClass);
  g.forbid_merge = forbid_merge;
  return g;
}

FkGraph merged_domain_graph(const Lattice& lat, double w, bool forbid_merge) {
  FkGraph full = domain_graph(lat, w, forbid_merge);
  FkGraph g = full;
  g.edges.clear();
  std::map<std::pair<int, int>, int> mult;
  for (const auto& e : full.edges) {
    if (e.v >= 0) g.edges.push_back(e);
    else ++mult[{e.u, e.v}];
  }
  for (const auto& [key, k] : mult) g.edges.push_back({key.first, key.second, std::pow(1.0 + w, k) - 1.0});
  return g;
}

}  // namespace pfsim
