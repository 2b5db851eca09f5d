#include "pfsim/rates.hpp"

#include <cmath>
#include <numeric>

namespace pfsim {

namespace {

// Labels the components of the interior sites accepted by `keep`; returns
// per-site labels (-1 when rejected) and fills the max k per label.
template <class Keep>
std::vector<int> label_components(const Domain& d, Keep keep, std::vector<int>& maxk) {
  const int V = d.num_sites();
  std::vector<int> lab(V, -1);
  std::vector<int> stack;
  maxk.clear();
  for (int s = 0; s < V; ++s) {
    if (lab[s] >= 0 || !keep(s)) continue;
    const int id = static_cast<int>(maxk.size());
    maxk.push_back(d.coord(s).k);
    lab[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      maxk[id] = std::max(maxk[id], d.coord(u).k);
      for (int dir = 0; dir < 6; ++dir) {
        int w = d.neighbor(u, dir);
        if (w >= V || lab[w] >= 0 || !keep(w)) continue;
        lab[w] = id;
        stack.push_back(w);
      }
    }
  }
  return lab;
}

}  // namespace

Pillar nonred_pillar(const SpinConfig& sigma, const SiteCoord& x) {
  if (x.k != 0) throw std::invalid_argument("nonred_pillar: x must sit at height 1/2");
  const Domain& d = sigma.domain();
  const int x_id = d.vertex_id(x);
  if (!d.is_interior(x_id)) throw std::invalid_argument("nonred_pillar: x is not an interior site");
  VertexRegion red = augment(d, potts_cluster(sigma, PottsSide::red));
  auto keep = [&](int s) { return !red.contains(s) && d.coord(s).k >= 0; };
  Pillar p;
  if (!keep(x_id)) return p;
  std::vector<int> maxk;
  auto lab = label_components(d, keep, maxk);
  for (int s = 0; s < d.num_sites(); ++s)
    if (lab[s] == lab[x_id]) p.sites.push_back(s);
  p.height = maxk[lab[x_id]] + 1;
  return p;
}

std::vector<int> pillar_heights(const SpinConfig& sigma) {
  const Domain& d = sigma.domain();
  VertexRegion red = augment(d, potts_cluster(sigma, PottsSide::red));
  std::vector<int> maxk;
  auto lab = label_components(d, [&](int s) { return !red.contains(s) && d.coord(s).k >= 0; }, maxk);
  std::vector<int> out(d.num_columns(), 0);
  for (int j = d.i0(); j < d.i0() + d.n(); ++j)
    for (int i = d.i0(); i < d.i0() + d.n(); ++i) {
      int s = d.vertex_id(i, j, 0);
      if (d.is_interior(s) && lab[s] >= 0) out[d.column_index(i, j)] = maxk[lab[s]] + 1;
    }
  return out;
}

std::vector<int> nonred_reach(const SpinConfig& sigma) {
  const Domain& d = sigma.domain();
  VertexRegion red = potts_cluster(sigma, PottsSide::red);
  std::vector<int> maxk;
  auto lab = label_components(d, [&](int s) { return !red.contains(s); }, maxk);
  std::vector<int> out(d.num_sites(), -1);
  for (int s = 0; s < d.num_sites(); ++s)
    if (lab[s] >= 0) out[s] = maxk[lab[s]] - d.coord(s).k + 1;
  return out;
}

RatePoint make_rate_point(int h, const McEstimate& p, std::int64_t hits) {
  RatePoint r;
  r.h = h;
  r.p = p;
  r.hits = hits;
  r.usable = hits > 0 && p.mean > 0.0;
  if (r.usable) {
    const double rel = p.stderr_ / p.mean;
    r.rate = -std::log(p.mean) - 0.5 * rel * rel;
    r.rate_stderr = rel;
  }
  return r;
}

const RatePoint& RateSeries::at(int h) const {
  for (const auto& p : points)
    if (p.h == h) return p;
  throw std::out_of_range("RateSeries: no point at h = " + std::to_string(h));
}

std::vector<int> RateSeries::usable_h() const {
  std::vector<int> out;
  for (const auto& p : points)
    if (p.usable) out.push_back(p.h);
  return out;
}

std::vector<int> bulk_sites(const Domain& d, int h_max) {
  const int ml = d.n() / 4;
  const int mv = std::max(1, d.layers() / 4);
  std::vector<int> w;
  for (int s = 0; s < d.num_sites(); ++s) {
    const auto& c = d.coord(s);
    if (c.i < d.i0() + ml || c.i >= d.i0() + d.n() - ml) continue;
    if (c.j < d.i0() + ml || c.j >= d.i0() + d.n() - ml) continue;
    if (c.k < d.k0() + mv || c.k + std::max(h_max, 1) - 1 >= d.k_end() - mv) continue;
    w.push_back(s);
  }
  if (w.empty()) throw std::invalid_argument("rates: box too small for the requested h_max");
  return w;
}

std::vector<double> connection_fractions(const SpinConfig& sigma, const std::vector<int>& sites, int h_max) {
  auto reach = nonred_reach(sigma);
  std::vector<double> out(h_max + 1, 0.0);
  for (int s : sites)
    for (int h = 0; h <= h_max; ++h) out[h] += connection_event(reach[s], h);
  for (auto& v : out) v /= double(sites.size());
  return out;
}

namespace {

std::int64_t per_chain(std::int64_t n_samples, int chains) { return (n_samples + chains - 1) / chains; }

}  // namespace

std::vector<RateSeries> estimate_point_to_plane_pair(const ModelParams& params, int n, int h_max,
                                                     std::int64_t n_samples, std::uint64_t seed,
                                                     const RateOptions& opt) {
  if (h_max < 0) throw std::invalid_argument("estimate_point_to_plane: h_max must be nonnegative");
  const int m = opt.m > 0 ? opt.m : std::max(1, n / 2);
  auto lat = Lattice::make(DomainKind::slab_box, n, m, BoundaryCondition::red_all());
  const Domain& d = lat->domain();
  const std::vector<int> win = bulk_sites(d, h_max);
  const int C = std::max(1, opt.schedule.n_chains);
  const std::int64_t S = per_chain(n_samples, C);
  const int H = h_max + 1;
  // [chain][h] per-sample series
  std::vector<std::vector<std::vector<double>>> plain(C, std::vector<std::vector<double>>(H)),
      num(C, std::vector<std::vector<double>>(H)), den(C, std::vector<std::vector<double>>(H));
  std::vector<std::vector<std::int64_t>> hits(C, std::vector<std::int64_t>(H, 0)),
      chits(C, std::vector<std::int64_t>(H, 0));
  const double inv = 1.0 / win.size();
  run_chains(
      params, [&](int) { return SpinConfig::ground_state(lat); }, S, seed, opt.schedule,
      [&](int c, std::int64_t, const SpinConfig& sigma, Rng&) {
        auto reach = nonred_reach(sigma);
        std::vector<std::int64_t> cnt(H, 0), ccnt(H, 0);
        std::int64_t cden = 0;
        for (int s : win) {
          const int below = d.neighbor(s, 0);
          const bool nonred_below = sigma[below] != lat->bc().red;
          cden += nonred_below;
          for (int h = 0; h < H; ++h)
            if (connection_event(reach[s], h)) {
              ++cnt[h];
              if (nonred_below) ++ccnt[h];
            }
        }
        for (int h = 0; h < H; ++h) {
          plain[c][h].push_back(cnt[h] * inv);
          num[c][h].push_back(double(ccnt[h]));
          den[c][h].push_back(double(cden));
          hits[c][h] += cnt[h];
          chits[c][h] += ccnt[h];
        }
      });
  RateSeries a{"xi", {}}, b{"xi_tilde", {}};
  for (int h = 0; h < H; ++h) {
    std::vector<McEstimate> pe, ce;
    std::int64_t th = 0, tch = 0;
    for (int c = 0; c < C; ++c) {
      pe.push_back(estimate(plain[c][h]));
      ce.push_back(ratio_estimate(num[c][h], den[c][h]));
      th += hits[c][h];
      tch += chits[c][h];
    }
    a.points.push_back(make_rate_point(h, combine(pe), th));
    b.points.push_back(make_rate_point(h, combine(ce), tch));
  }
  return {a, b};
}

RateSeries estimate_point_to_plane(const ModelParams& params, int n, int h_max, std::int64_t n_samples,
                                   std::uint64_t seed, bool conditioned, const RateOptions& opt) {
  return estimate_point_to_plane_pair(params, n, h_max, n_samples, seed, opt)[conditioned ? 1 : 0];
}

RateSeries estimate_pillar_rate(const ModelParams& params, int n, int h_max, std::int64_t n_samples,
                                std::uint64_t seed, const RateOptions& opt) {
  if (h_max < 1) throw std::invalid_argument("estimate_pillar_rate: h_max must be positive");
  const int m = opt.m > 0 ? opt.m : std::max(h_max + 1, n / 2);
  auto lat = Lattice::make(DomainKind::slab_box, n, m, BoundaryCondition::dobrushin());
  const Domain& d = lat->domain();
  const int ml = n / 4;
  std::vector<int> cols;
  for (int j = d.i0() + ml; j < d.i0() + n - ml; ++j)
    for (int i = d.i0() + ml; i < d.i0() + n - ml; ++i) cols.push_back(d.column_index(i, j));
  const int C = std::max(1, opt.schedule.n_chains);
  const std::int64_t S = per_chain(n_samples, C);
  std::vector<std::vector<std::vector<double>>> frac(C, std::vector<std::vector<double>>(h_max + 1));
  std::vector<std::vector<std::int64_t>> hits(C, std::vector<std::int64_t>(h_max + 1, 0));
  const double inv = 1.0 / cols.size();
  run_chains(
      params, [&](int) { return SpinConfig::ground_state(lat); }, S, seed, opt.schedule,
      [&](int c, std::int64_t, const SpinConfig& sigma, Rng&) {
        auto ph = pillar_heights(sigma);
        for (int h = 1; h <= h_max; ++h) {
          std::int64_t k = 0;
          for (int col : cols) k += ph[col] >= h;
          frac[c][h].push_back(k * inv);
          hits[c][h] += k;
        }
      });
  RateSeries out{"alpha", {}};
  for (int h = 1; h <= h_max; ++h) {
    std::vector<McEstimate> pe;
    std::int64_t th = 0;
    for (int c = 0; c < C; ++c) {
      pe.push_back(estimate(frac[c][h]));
      th += hits[c][h];
    }
    out.points.push_back(make_rate_point(h, combine(pe), th));
  }
  return out;
}

XiFit fit_xi(const RateSeries& series) {
  std::vector<const RatePoint*> pts;
  for (const auto& p : series.points)
    if (p.usable && p.h >= 1) pts.push_back(&p);
  if (pts.size() < 2) throw FitError("fit_xi: fewer than 2 usable points");
  bool weighted = true;
  for (auto* p : pts)
    if (!(p->rate_stderr > 0.0) || !std::isfinite(p->rate_stderr)) weighted = false;
  double S = 0, Sx = 0, Sy = 0, Sxx = 0, Sxy = 0;
  for (auto* p : pts) {
    const double w = weighted ? 1.0 / (p->rate_stderr * p->rate_stderr) : 1.0;
    S += w;
    Sx += w * p->h;
    Sy += w * p->rate;
    Sxx += w * p->h * p->h;
    Sxy += w * p->h * p->rate;
  }
  const double D = S * Sxx - Sx * Sx;
  XiFit f;
  f.slope = (S * Sxy - Sx * Sy) / D;
  f.intercept = (Sxx * Sy - Sx * Sxy) / D;
  if (weighted) {
    f.slope_stderr = std::sqrt(S / D);
    f.intercept_stderr = std::sqrt(Sxx / D);
  } else {
    double rss = 0;
    for (auto* p : pts) {
      double r = p->rate - f.intercept - f.slope * p->h;
      rss += r * r;
    }
    const double s2 = pts.size() > 2 ? rss / (pts.size() - 2) : 0.0;
    f.slope_stderr = std::sqrt(s2 * S / D);
    f.intercept_stderr = std::sqrt(s2 * Sxx / D);
  }
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    if (pts[k + 1]->h != pts[k]->h + 1) continue;
    f.diffs.push_back({pts[k]->h, pts[k + 1]->rate - pts[k]->rate,
                       std::hypot(pts[k + 1]->rate_stderr, pts[k]->rate_stderr)});
  }
  return f;
}

int h_star(double n, double xi) {
  if (!(xi > 0.0)) throw std::invalid_argument("h_star: xi must be positive");
  if (n < 2) throw std::invalid_argument("h_star: n must be at least 2");
  return static_cast<int>(std::floor(std::log(n) / xi));
}

double outside_fraction(const InterfaceSet& I, const Domain& d, int hs, double eps) {
  const double lo = (1.0 - eps) * hs, hi = hs;
  int out = 0;
  for (const auto& f : I.plaquettes) {
    const double h = f.z2 / 2.0;
    if (h < lo || h > hi) ++out;
  }
  return out / (double(d.n()) * d.n());
}

double median_column_height(const InterfaceSet& I, const Domain& d) {
  ColumnHeights h = I.heights(d);
  std::vector<double> v;
  for (int x : h.max2)
    if (x != kNoHeight) v.push_back(x / 2.0);
  if (v.empty()) return 0.0;
  return median(std::move(v));
}

HeightConcentration height_concentration_statistic(const std::vector<InterfaceSet>& samples, const Domain& d,
                                                   int hs, double eps) {
  std::vector<double> a, b;
  for (const auto& I : samples) {
    a.push_back(outside_fraction(I, d, hs, eps));
    b.push_back(median_column_height(I, d));
  }
  return {estimate(a), estimate(b)};
}

std::vector<RelationRow> relation_bundle(const RateSeries& xi, const RateSeries& xi_tilde,
                                         const RateSeries& alpha, const ModelParams& params) {
  std::vector<RelationRow> out;
  const double shift = 2.0 * params.beta - std::log(double(params.q - 1));
  for (const auto& a : alpha.points) {
    if (!a.usable) continue;
    bool ok = false;
    for (const auto& p : xi.points) ok |= p.h == a.h && p.usable;
    for (const auto& p : xi_tilde.points) ok &= !(p.h == a.h && !p.usable);
    if (!ok) continue;
    out.push_back({a.h, a.rate - (xi.at(a.h).rate - shift), xi_tilde.at(a.h).rate - a.rate});
  }
  return out;
}

}  // namespace pfsim
