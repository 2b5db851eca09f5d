#include "pfsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pfsim {

double integrated_autocorr_time(const std::vector<double>& x, double c) {
  const std::size_t n = x.size();
  if (n < 4) return 0.5;
  double mu = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double c0 = 0.0;
  for (double v : x) c0 += (v - mu) * (v - mu);
  c0 /= n;
  if (c0 <= 0.0) return 0.5;
  double tau = 0.5;
  const std::size_t max_lag = std::min<std::size_t>(n / 2, 2000);
  for (std::size_t t = 1; t < max_lag; ++t) {
    double ct = 0.0;
    for (std::size_t i = 0; i + t < n; ++i) ct += (x[i] - mu) * (x[i + t] - mu);
    ct /= n;
    tau += ct / c0;
    if (static_cast<double>(t) >= c * tau) break;
  }
  return std::max(tau, 0.5);
}

namespace {

double iid_stderr(const std::vector<double>& x, double mu) {
  if (x.size() < 2) return 0.0;
  double s = 0.0;
  for (double v : x) s += (v - mu) * (v - mu);
  return std::sqrt(s / (x.size() - 1) / x.size());
}

}  // namespace

McEstimate estimate(const std::vector<double>& x, int nbatches) {
  McEstimate e;
  e.n_samples = x.size();
  if (x.empty()) return e;
  e.mean = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  const std::size_t nb = std::min<std::size_t>(nbatches, x.size());
  const std::size_t b = x.size() / nb;
  if (nb >= 2 && b >= 1) {
    std::vector<double> bm(nb, 0.0);
    for (std::size_t k = 0; k < nb; ++k) {
      for (std::size_t i = 0; i < b; ++i) bm[k] += x[k * b + i];
      bm[k] /= b;
    }
    double mu = std::accumulate(bm.begin(), bm.end(), 0.0) / nb;
    double s = 0.0;
    for (double v : bm) s += (v - mu) * (v - mu);
    e.stderr_ = std::sqrt(s / (nb - 1) / nb);
  }
  double floor_err = iid_stderr(x, e.mean);
  if (e.stderr_ < floor_err && b <= 1) e.stderr_ = floor_err;
  if (e.stderr_ == 0.0) e.stderr_ = floor_err;
  e.tau = integrated_autocorr_time(x);
  return e;
}

McEstimate ratio_estimate(const std::vector<double>& num, const std::vector<double>& den,
                          int nbatches) {
  if (num.size() != den.size()) throw std::invalid_argument("ratio_estimate: length mismatch");
  McEstimate e;
  e.n_samples = num.size();
  double sn = std::accumulate(num.begin(), num.end(), 0.0);
  double sd = std::accumulate(den.begin(), den.end(), 0.0);
  if (sd <= 0.0) return e;
  e.mean = sn / sd;
  const std::size_t nb = std::min<std::size_t>(nbatches, num.size());
  if (nb < 2) return e;
  const std::size_t b = num.size() / nb;
  // Delta-method batch means: residuals num - R den per batch.
  std::vector<double> r(nb, 0.0);
  double dmean = 0.0;
  for (std::size_t k = 0; k < nb; ++k) {
    double bn = 0.0, bd = 0.0;
    for (std::size_t i = 0; i < b; ++i) {
      bn += num[k * b + i];
      bd += den[k * b + i];
    }
    r[k] = (bn - e.mean * bd) / b;
    dmean += bd / b;
  }
  dmean /= nb;
  double s = 0.0;
  for (double v : r) s += v * v;
  if (dmean > 0.0) e.stderr_ = std::sqrt(s / (nb - 1) / nb) / dmean;
  std::vector<double> resid(num.size());
  for (std::size_t i = 0; i < num.size(); ++i) resid[i] = num[i] - e.mean * den[i];
  e.tau = integrated_autocorr_time(resid);
  return e;
}

McEstimate combine(const std::vector<McEstimate>& parts) {
  McEstimate e;
  double var = 0.0, tau = 0.0;
  for (const auto& p : parts) e.n_samples += p.n_samples;
  if (e.n_samples == 0) return e;
  for (const auto& p : parts) {
    double w = static_cast<double>(p.n_samples) / e.n_samples;
    e.mean += w * p.mean;
    var += w * w * p.stderr_ * p.stderr_;
    tau += w * p.tau;
  }
  e.stderr_ = std::sqrt(var);
  e.tau = tau;
  return e;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace pfsim
