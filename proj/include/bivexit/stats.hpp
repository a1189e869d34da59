#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "bivexit/special.hpp"

namespace bivexit {

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

namespace detail {

// asymptotic Kolmogorov tail: 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2)
inline double kolmogorov_pvalue(double lambda2) {
  double p = 0.0;
  double s = 1.0;
  for (int k = 1; k <= 200; ++k) {
    double term = std::exp(-2.0 * k * k * lambda2);
    p += 2.0 * s * term;
    if (term < 1e-12) break;
    s = -s;
  }
  return std::min(1.0, std::max(0.0, p));
}

}  // namespace detail

// one-sample KS against a continuous CDF
inline KsResult ks_test(std::vector<double> sample,
                        const std::function<double(double)>& cdf) {
  if (sample.size() < 1) throw std::domain_error("ks_test: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    double c = cdf(sample[i]);
    d = std::max(d, std::max((i + 1) / n - c, c - i / n));
  }
  return {d, detail::kolmogorov_pvalue(n * d * d)};
}

// two-sample KS
inline KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::domain_error("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(i / na - j / nb));
  }
  double neff = na * nb / (na + nb);
  return {d, detail::kolmogorov_pvalue(neff * d * d)};
}

struct Chi2Result {
  double statistic = 0.0;
  double p_value = 1.0;
  int dof = 0;
};

// chi-square goodness of fit on pre-binned counts vs expected counts
inline Chi2Result chi2_from_counts(const std::vector<double>& observed,
                                   const std::vector<double>& expected,
                                   int fitted_params = 0) {
  if (observed.size() != expected.size() || observed.size() < 2)
    throw std::domain_error("chi2_from_counts: bad bins");
  double stat = 0.0;
  int used = 0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    if (expected[k] <= 0.0) continue;
    double diff = observed[k] - expected[k];
    stat += diff * diff / expected[k];
    ++used;
  }
  int dof = used - 1 - fitted_params;
  if (dof < 1) dof = 1;
  return {stat, gamma_q(0.5 * dof, 0.5 * stat), dof};
}

// chi-square test of a sample in [lo, hi] against a CDF, equal-width bins
inline Chi2Result chi2_gof(const std::vector<double>& sample,
                           const std::function<double(double)>& cdf, double lo,
                           double hi, int bins) {
  std::vector<double> obs(bins, 0.0), exp(bins, 0.0);
  const double w = (hi - lo) / bins;
  for (double x : sample) {
    int k = static_cast<int>((x - lo) / w);
    if (k < 0) k = 0;
    if (k >= bins) k = bins - 1;
    obs[k] += 1.0;
  }
  double n = static_cast<double>(sample.size());
  double prev = cdf(lo);
  for (int k = 0; k < bins; ++k) {
    double next = cdf(lo + (k + 1) * w);
    exp[k] = n * (next - prev);
    prev = next;
  }
  return chi2_from_counts(obs, exp);
}

inline double mean(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

inline double variance(const std::vector<double>& x) {
  double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

}  // namespace bivexit
