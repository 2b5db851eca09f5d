#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "pfsim/interfaces.hpp"
#include "pfsim/sampling.hpp"
#include "pfsim/stats.hpp"

namespace pfsim {

struct Pillar {
  std::vector<int> sites;  // ascending vertex ids
  int height = 0;          // 0 for the empty pillar
  bool empty() const { return sites.empty(); }
};

// Component of (augmented red)^c within the upper half-space containing x.
// x must sit at height 1/2.
Pillar nonred_pillar(const SpinConfig& sigma, const SiteCoord& x);
// Pillar heights of every column's height-1/2 site, in column order.
std::vector<int> pillar_heights(const SpinConfig& sigma);

// For every interior site x: -1 if x lies in V_red, otherwise 1 plus the
// largest k - k_x over the component of x in V_red^c.  A_{x,h} holds iff
// the value is >= max(h, 1).
std::vector<int> nonred_reach(const SpinConfig& sigma);

inline bool connection_event(int reach, int h) { return reach >= std::max(h, 1); }

// Sites at lateral distance >= n/4 from the sides and far enough from the
// top and bottom faces that a reach of max(h_max, 1) fits.
std::vector<int> bulk_sites(const Domain& d, int h_max);
// Fraction of `sites` where A_{x,h} holds, for h = 0..h_max.
std::vector<double> connection_fractions(const SpinConfig& sigma, const std::vector<int>& sites, int h_max);

struct RatePoint {
  int h = 0;
  McEstimate p;
  std::int64_t hits = 0;
  bool usable = false;
  double rate = std::numeric_limits<double>::infinity();
  double rate_stderr = std::numeric_limits<double>::infinity();
};

// -log p with the first-order bias correction and delta-method error.
RatePoint make_rate_point(int h, const McEstimate& p, std::int64_t hits);

struct RateSeries {
  std::string name;
  std::vector<RatePoint> points;
  const RatePoint& at(int h) const;
  std::vector<int> usable_h() const;
};

struct RateOptions {
  ChainSchedule schedule;
  int m = 0;  // half-height of the slab; 0 picks n / 2
};

// mu^red on a slab with all-red boundary; translation average over bulk sites.
RateSeries estimate_point_to_plane(const ModelParams& params, int n, int h_max, std::int64_t n_samples,
                                   std::uint64_t seed, bool conditioned, const RateOptions& opt = {});
// Both series from one run: [0] plain, [1] conditioned on a non-red site below x.
std::vector<RateSeries> estimate_point_to_plane_pair(const ModelParams& params, int n, int h_max,
                                                     std::int64_t n_samples, std::uint64_t seed,
                                                     const RateOptions& opt = {});
// Dobrushin slab; translation average over bulk columns.
RateSeries estimate_pillar_rate(const ModelParams& params, int n, int h_max, std::int64_t n_samples,
                                std::uint64_t seed, const RateOptions& opt = {});

struct FitError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct XiFit {
  double slope = 0.0, slope_stderr = 0.0;
  double intercept = 0.0, intercept_stderr = 0.0;
  struct Diff {
    int h;
    double value, stderr_;
  };
  std::vector<Diff> diffs;  // rate(h+1) - rate(h) over consecutive usable h
};

// Weighted least squares of rate against h over usable points with h >= 1.
XiFit fit_xi(const RateSeries& series);

int h_star(double n, double xi);

struct HeightConcentration {
  McEstimate outside_fraction;  // plaquettes outside [(1-eps) h*, h*] per n^2
  McEstimate median_height;     // per-sample median of the column top heights
};

HeightConcentration height_concentration_statistic(const std::vector<InterfaceSet>& samples, const Domain& d,
                                                   int h_star, double eps);
// Per-sample pieces of the statistic above.
double outside_fraction(const InterfaceSet& I, const Domain& d, int h_star, double eps);
double median_column_height(const InterfaceSet& I, const Domain& d);

struct RelationRow {
  int h;
  double alpha_gap;     // alpha_h - (xi_h - 2 beta + log(q - 1))
  double tilde_gap;     // xi~_h - alpha_h
};
std::vector<RelationRow> relation_bundle(const RateSeries& xi, const RateSeries& xi_tilde,
                                         const RateSeries& alpha, const ModelParams& params);

}  // namespace pfsim
