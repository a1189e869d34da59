#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bivexit/bs_model.hpp"
#include "bivexit/extended.hpp"
#include "bivexit/linalg.hpp"
#include "bivexit/rng.hpp"
#include "bivexit/stats.hpp"

namespace bivexit {

// generative check: simulate the Brownian path itself and record where
// it leaves the inner sphere (radius rho) and then the unit sphere.
// This route never touches the closed-form samplers.
struct PathConfig {
  int d = 2;
  double rho = 0.5;
  Matrix q;
  Vec start;          // ||start|| < rho
  double dt = 1e-5;   // 0 < dt <= 1e-3
  long max_steps = 200000000;

  void validate() const {
    if (d < 2) throw std::domain_error("PathConfig: require d >= 2");
    if (!(rho > 0.0 && rho < 1.0))
      throw std::domain_error("PathConfig: require 0 < rho < 1");
    if (!(dt > 0.0 && dt <= 1e-3))
      throw std::domain_error("PathConfig: require 0 < dt <= 1e-3");
    if (static_cast<int>(start.size()) != d || !(norm(start) < rho))
      throw std::domain_error("PathConfig: require ||start|| < rho");
    if (q.rows != static_cast<std::size_t>(d) || !is_orthogonal(q))
      throw std::domain_error("PathConfig: Q must be d x d orthogonal");
  }
};

struct SimulationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

// crossing point of the segment prev -> cur with the sphere of radius r,
// projected back onto the sphere
inline Vec sphere_crossing(const Vec& prev, const Vec& cur, double r) {
  const std::size_t d = prev.size();
  Vec delta(d);
  for (std::size_t i = 0; i < d; ++i) delta[i] = cur[i] - prev[i];
  double a = dot(delta, delta);
  double b = 2.0 * dot(prev, delta);
  double c = dot(prev, prev) - r * r;
  double disc = b * b - 4.0 * a * c;
  double s = (a > 0.0 && disc >= 0.0) ? (-b + std::sqrt(disc)) / (2.0 * a) : 1.0;
  s = std::min(std::max(s, 0.0), 1.0);
  Vec x(d);
  for (std::size_t i = 0; i < d; ++i) x[i] = prev[i] + s * delta[i];
  double nx = norm(x);
  for (double& v : x) v /= nx;  // unit direction of the crossing
  return x;
}

}  // namespace detail

// Euler path from cfg.start; returns (Q * exit direction from the rho
// sphere, exit point on the unit sphere), both unit norm
inline std::pair<Vec, Vec> simulate_exit_pair(const PathConfig& cfg,
                                              RngStream& rng) {
  cfg.validate();
  const int d = cfg.d;
  const double step = std::sqrt(cfg.dt);
  Vec x = cfg.start, prev = cfg.start;
  Vec exit1;
  bool crossed_inner = false;
  for (long it = 0; it < cfg.max_steps; ++it) {
    prev = x;
    for (int i = 0; i < d; ++i) x[i] += step * rng.gaussian();
    double r = norm(x);
    if (!crossed_inner && r >= cfg.rho) {
      exit1 = detail::sphere_crossing(prev, x, cfg.rho);
      crossed_inner = true;
      // tau_1 < tau_2 by construction: the path starts inside the rho
      // sphere, so the unit sphere cannot be reached first
    }
    if (r >= 1.0) {
      if (!crossed_inner)
        throw SimulationError("simulate_exit_pair: inner sphere never crossed");
      Vec exit2 = detail::sphere_crossing(prev, x, 1.0);
      return {matvec(cfg.q, exit1), exit2};
    }
  }
  throw SimulationError("simulate_exit_pair: max_steps exceeded");
}

struct OracleReport {
  std::size_t paths = 0;
  double mean_inner_product = 0.0;  // mean of u'Qv
  KsResult ks;                      // empirical u'Qv law vs reference
  Chi2Result chi2;                  // angular histogram (d = 2 only)
  double dt_bias_shift = 0.0;       // mean shift between dt and dt/4 runs
  bool has_chi2 = false;
};

// compare path-simulated exit pairs against the closed-form model.
// start = 0 checks against the inner-product density; start = xi checks
// the V marginal against the exit-distribution sampler.
inline OracleReport oracle_compare(const PathConfig& cfg, std::size_t n,
                                   RngStream& rng,
                                   std::size_t bias_check_paths = 0) {
  cfg.validate();
  OracleReport rep;
  rep.paths = n;
  bool centered = norm(cfg.start) < 1e-14;
  Vec pole = cfg.start;  // direction statistic axis for the shifted case
  if (!centered) {
    double np = norm(pole);
    for (double& p : pole) p /= np;
  }
  std::vector<double> t(n);        // u'Qv per path
  std::vector<double> v_stat(n);   // pole'v per path (shifted case)
  double sum_t = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    RngStream path_rng = rng.child(j);  // one stream per path
    auto [u, v] = simulate_exit_pair(cfg, path_rng);
    t[j] = dot(u, matvec(cfg.q, v));
    sum_t += t[j];
    if (!centered) v_stat[j] = dot(pole, v);
  }
  rep.mean_inner_product = sum_t / static_cast<double>(n);

  BSParams model{cfg.rho, cfg.q, cfg.d};
  if (centered) {
    rep.ks = ks_test(t, [&](double x) { return t_cdf(x, model); });
    if (cfg.d == 2) {
      rep.chi2 = chi2_gof(t, [&](double x) { return t_cdf(x, model); }, -1.0,
                          1.0, 20);
      rep.has_chi2 = true;
    }
  } else {
    // reference V marginal: Exit_d(xi), drawn from an independent stream
    RngStream ref_rng = rng.child(0xAAAA0000ULL);
    ExitParams vp{cfg.start};
    std::vector<double> ref_stat(n);
    for (std::size_t j = 0; j < n; ++j)
      ref_stat[j] = dot(pole, exit_sample(vp, ref_rng));
    rep.ks = ks_two_sample(v_stat, ref_stat);
  }

  if (bias_check_paths > 0) {
    PathConfig fine = cfg;
    fine.dt = cfg.dt / 4.0;
    double coarse_sum = 0.0, fine_sum = 0.0;
    for (std::size_t j = 0; j < bias_check_paths; ++j) {
      RngStream c1 = rng.child(0xB1A50000ULL + j);
      RngStream c2 = rng.child(0xB1A58000ULL + j);
      auto [u1, v1] = simulate_exit_pair(cfg, c1);
      auto [u2, v2] = simulate_exit_pair(fine, c2);
      coarse_sum += dot(u1, matvec(cfg.q, v1));
      fine_sum += dot(u2, matvec(cfg.q, v2));
    }
    rep.dt_bias_shift = (coarse_sum - fine_sum) / static_cast<double>(bias_check_paths);
  }
  return rep;
}

}  // namespace bivexit
