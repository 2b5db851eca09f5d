#pragma once

#include <cstddef>
#include <vector>

namespace pfsim {

struct McEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t n_samples = 0;
  double tau = 0.5;  // integrated autocorrelation time, 0.5 for iid
  double n_eff() const { return tau > 0 ? n_samples / (2.0 * tau) : double(n_samples); }
};

// Sokal's automatic windowing with c = 6.
double integrated_autocorr_time(const std::vector<double>& x, double c = 6.0);

// Mean with batch-means standard error (nbatches equal batches, tail dropped
// from the error estimate only).
McEstimate estimate(const std::vector<double>& x, int nbatches = 32);

// Ratio sum(num)/sum(den) with batch-means error on the per-batch ratios.
McEstimate ratio_estimate(const std::vector<double>& num, const std::vector<double>& den,
                          int nbatches = 32);

// Merge independent estimates (e.g. one per chain), weighting by sample count.
McEstimate combine(const std::vector<McEstimate>& parts);

double median(std::vector<double> v);

}  // namespace pfsim
