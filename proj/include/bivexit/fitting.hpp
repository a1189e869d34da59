#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bivexit/extended.hpp"
#include "bivexit/optimize.hpp"
#include "bivexit/rng.hpp"

namespace bivexit {

struct FitResult {
  std::string model;
  std::vector<std::pair<std::string, double>> params;
  double loglik = 0.0;
  double aic = 0.0;
  double bic = 0.0;
  int k = 0;
  std::size_t n = 0;
  bool converged = false;
  int iterations = 0;
};

inline void finalize_fit(FitResult& f) {
  f.aic = 2.0 * f.k - 2.0 * f.loglik;
  f.bic = f.k * std::log(static_cast<double>(f.n)) - 2.0 * f.loglik;
}

namespace detail {

struct CircularStats {
  double mean_dir;
  double resultant;
};

inline CircularStats circular_stats(const std::vector<double>& theta) {
  double c = 0.0, s = 0.0;
  for (double t : theta) {
    c += std::cos(t);
    s += std::sin(t);
  }
  c /= theta.size();
  s /= theta.size();
  return {wrap_angle(std::atan2(s, c)), std::sqrt(c * c + s * s)};
}

inline double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }
inline double logit(double p) {
  p = std::min(std::max(p, 1e-9), 1.0 - 1e-9);
  return std::log(p / (1.0 - p));
}

// shared multi-start driver: deterministic jitters around the base start
inline NelderMeadResult multistart_nelder_mead(
    const std::function<double(const std::vector<double>&)>& objective,
    const std::vector<double>& base, const std::vector<double>& jitter_scale,
    int starts, std::uint64_t seed) {
  RngStream jrng(seed, 0x5717);
  NelderMeadOptions opts;
  opts.max_iterations = 4000;
  opts.diameter_tol = 1e-8;
  opts.initial_step = 0.25;
  NelderMeadResult best;
  bool have = false;
  for (int s = 0; s < starts; ++s) {
    std::vector<double> x0 = base;
    if (s > 0)
      for (std::size_t i = 0; i < x0.size(); ++i)
        x0[i] += jitter_scale[i] * jrng.gaussian();
    NelderMeadResult r = nelder_mead(objective, x0, opts);
    if (!have || r.value < best.value) {
      best = r;
      have = true;
    }
  }
  return best;
}

}  // namespace detail

// maximum likelihood fit of the von Mises marginal copula family.
// Search space: angles free (wrapped on report), kappa = exp(t),
// |psi| logistic, arg(psi) free. k = 6.
inline FitResult vm_copula_fit(const std::vector<AnglePair>& sample,
                               int starts = 5, std::uint64_t seed = 0) {
  if (sample.size() < 10) throw std::domain_error("vm_copula_fit: require n >= 10");
  std::vector<double> tu, tv;
  for (const auto& [a, b] : sample) {
    tu.push_back(wrap_angle(a));
    tv.push_back(wrap_angle(b));
  }
  auto su = detail::circular_stats(tu);
  auto sv = detail::circular_stats(tv);
  double k1 = von_mises_kappa_from_resultant(su.resultant);
  double k2 = von_mises_kappa_from_resultant(sv.resultant);

  // moment start for psi from the probability-integral-transformed angles
  VonMisesCdfTable t1({su.mean_dir, k1}), t2({sv.mean_dir, k2});
  Complex psi0 = 0.0;
  for (std::size_t j = 0; j < tu.size(); ++j)
    psi0 += std::polar(1.0, kTwoPi * (t1.cdf(tu[j]) - t2.cdf(tv[j])));
  psi0 /= static_cast<double>(tu.size());
  if (std::abs(psi0) > 0.95) psi0 *= 0.95 / std::abs(psi0);

  auto unpack = [](const std::vector<double>& x) {
    VMCopulaParams p;
    p.mu1 = wrap_angle(x[0]);
    p.mu2 = wrap_angle(x[1]);
    p.kappa1 = std::exp(std::min(x[2], 8.0));
    p.kappa2 = std::exp(std::min(x[3], 8.0));
    p.psi = std::polar(detail::logistic(x[4]), x[5]);
    return p;
  };
  auto objective = [&](const std::vector<double>& x) {
    VMCopulaDensity dens(unpack(x));
    double nll = 0.0;
    for (std::size_t j = 0; j < tu.size(); ++j)
      nll -= dens.log_density(tu[j], tv[j]);
    return nll;
  };

  std::vector<double> base = {su.mean_dir,
                              sv.mean_dir,
                              std::log(std::max(k1, 1e-3)),
                              std::log(std::max(k2, 1e-3)),
                              detail::logit(std::abs(psi0)),
                              std::arg(psi0)};
  std::vector<double> jitter = {0.4, 0.4, 0.5, 0.5, 0.7, 0.7};
  NelderMeadResult r = detail::multistart_nelder_mead(objective, base, jitter,
                                                      starts, seed);

  VMCopulaParams p = unpack(r.x);
  FitResult f;
  f.model = "vm-copula";
  f.params = {{"mu1", p.mu1},       {"mu2", p.mu2},
              {"kappa1", p.kappa1}, {"kappa2", p.kappa2},
              {"psi_abs", std::abs(p.psi)}, {"psi_arg", wrap_angle(std::arg(p.psi))}};
  f.loglik = -r.value;
  f.k = 6;
  f.n = sample.size();
  f.converged = r.converged;
  f.iterations = r.iterations;
  finalize_fit(f);
  return f;
}

// maximum likelihood fit of the eight-parameter quadratic-form family;
// the normalizer is recomputed per objective evaluation on a fixed grid
// and once more on a doubled grid for the reported log-likelihood. k = 8.
inline FitResult sengupta_fit(const std::vector<AnglePair>& sample,
                              int starts = 5, std::uint64_t seed = 0,
                              int fit_grid = 128) {
  if (sample.size() < 10) throw std::domain_error("sengupta_fit: require n >= 10");
  std::vector<double> tu, tv;
  for (const auto& [a, b] : sample) {
    tu.push_back(wrap_angle(a));
    tv.push_back(wrap_angle(b));
  }

  auto unpack = [](const std::vector<double>& x) {
    SenGuptaParams p;
    // row-major over the eight free entries, skipping (0,0)
    const int idx[8][2] = {{0, 1}, {0, 2}, {1, 0}, {1, 1},
                           {1, 2}, {2, 0}, {2, 1}, {2, 2}};
    for (int i = 0; i < 8; ++i) p.m(idx[i][0], idx[i][1]) = x[i];
    return p;
  };
  auto neg_loglik = [&](const SenGuptaParams& p, int grid) {
    double logz = sengupta_log_normalizer(p, grid);
    double nll = tu.size() * logz;
    for (std::size_t j = 0; j < tu.size(); ++j) nll -= p.exponent(tu[j], tv[j]);
    return nll;
  };
  auto objective = [&](const std::vector<double>& x) {
    for (double v : x)
      if (std::fabs(v) > 30.0) return 1e12;  // keep the exponent bounded
    return neg_loglik(unpack(x), fit_grid);
  };

  std::vector<double> base(8, 0.0);
  std::vector<double> jitter(8, 0.5);
  NelderMeadResult r = detail::multistart_nelder_mead(objective, base, jitter,
                                                      starts, seed);

  SenGuptaParams p = unpack(r.x);
  FitResult f;
  f.model = "sengupta";
  const char* names[8] = {"m12", "m13", "m21", "m22", "m23", "m31", "m32", "m33"};
  for (int i = 0; i < 8; ++i) f.params.emplace_back(names[i], r.x[i]);
  f.loglik = -neg_loglik(p, 2 * fit_grid);  // polished normalizer
  f.k = 8;
  f.n = sample.size();
  f.converged = r.converged;
  f.iterations = r.iterations;
  finalize_fit(f);
  return f;
}

// maximum likelihood fit of the three-cosine family. k = 6.
inline FitResult shieh_johnson_fit(const std::vector<AnglePair>& sample,
                                   int starts = 5, std::uint64_t seed = 0) {
  if (sample.size() < 10)
    throw std::domain_error("shieh_johnson_fit: require n >= 10");
  std::vector<double> tu, tv;
  for (const auto& [a, b] : sample) {
    tu.push_back(wrap_angle(a));
    tv.push_back(wrap_angle(b));
  }
  auto su = detail::circular_stats(tu);
  auto sv = detail::circular_stats(tv);
  double k1 = von_mises_kappa_from_resultant(su.resultant);
  double k2 = von_mises_kappa_from_resultant(sv.resultant);

  VonMisesCdfTable t1({su.mean_dir, k1}), t2({sv.mean_dir, k2});
  Complex coupling = 0.0;
  for (std::size_t j = 0; j < tu.size(); ++j)
    coupling += std::polar(1.0, kTwoPi * (t1.cdf(tu[j]) - t2.cdf(tv[j])));
  coupling /= static_cast<double>(tu.size());
  double k3 = von_mises_kappa_from_resultant(std::abs(coupling));

  auto unpack = [](const std::vector<double>& x) {
    ShiehJohnsonParams p;
    p.mu1 = wrap_angle(x[0]);
    p.mu2 = wrap_angle(x[1]);
    p.mu3 = wrap_angle(x[2]);
    p.kappa1 = std::exp(std::min(x[3], 8.0));
    p.kappa2 = std::exp(std::min(x[4], 8.0));
    p.kappa3 = std::exp(std::min(x[5], 8.0));
    return p;
  };
  auto objective = [&](const std::vector<double>& x) {
    ShiehJohnsonDensity dens(unpack(x));
    double nll = 0.0;
    for (std::size_t j = 0; j < tu.size(); ++j)
      nll -= dens.log_density(tu[j], tv[j]);
    return nll;
  };

  std::vector<double> base = {su.mean_dir,
                              sv.mean_dir,
                              wrap_angle(std::arg(coupling)),
                              std::log(std::max(k1, 1e-3)),
                              std::log(std::max(k2, 1e-3)),
                              std::log(std::max(k3, 1e-3))};
  std::vector<double> jitter = {0.4, 0.4, 0.4, 0.5, 0.5, 0.5};
  NelderMeadResult r = detail::multistart_nelder_mead(objective, base, jitter,
                                                      starts, seed);

  ShiehJohnsonParams p = unpack(r.x);
  FitResult f;
  f.model = "shieh-johnson";
  f.params = {{"mu1", p.mu1},       {"mu2", p.mu2},       {"mu3", p.mu3},
              {"kappa1", p.kappa1}, {"kappa2", p.kappa2}, {"kappa3", p.kappa3}};
  f.loglik = -r.value;
  f.k = 6;
  f.n = sample.size();
  f.converged = r.converged;
  f.iterations = r.iterations;
  finalize_fit(f);
  return f;
}

struct ModelRanking {
  std::vector<std::size_t> by_aic;
  std::vector<std::size_t> by_bic;
};

// rank fits on the same sample; AIC primary, BIC reported alongside,
// ties broken toward fewer parameters
inline ModelRanking model_select(const std::vector<FitResult>& fits) {
  if (fits.empty()) throw std::domain_error("model_select: no fits");
  for (const FitResult& f : fits)
    if (f.n != fits[0].n)
      throw std::domain_error("model_select: mixed sample sizes");
  ModelRanking r;
  r.by_aic.resize(fits.size());
  r.by_bic.resize(fits.size());
  std::iota(r.by_aic.begin(), r.by_aic.end(), 0);
  std::iota(r.by_bic.begin(), r.by_bic.end(), 0);
  auto cmp = [&](double FitResult::* crit) {
    return [&fits, crit](std::size_t a, std::size_t b) {
      if (fits[a].*crit != fits[b].*crit) return fits[a].*crit < fits[b].*crit;
      return fits[a].k < fits[b].k;
    };
  };
  std::stable_sort(r.by_aic.begin(), r.by_aic.end(), cmp(&FitResult::aic));
  std::stable_sort(r.by_bic.begin(), r.by_bic.end(), cmp(&FitResult::bic));
  return r;
}

}  // namespace bivexit
