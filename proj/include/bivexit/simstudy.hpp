#pragma once

#include <atomic>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <thread>
#include <vector>

#include "bivexit/bc_model.hpp"
#include "bivexit/rng.hpp"

namespace bivexit {

// relative-MSE grid for the circular family: method of moments vs MLE
struct StudyGrid {
  std::vector<std::size_t> sample_sizes = {10, 20, 30, 50, 100};
  std::vector<double> psi_values = {0.1, 0.3, 0.5, 0.7, 0.9};
  std::size_t replicates = 2000;
  std::uint64_t master_seed = 0;

  void validate() const {
    if (replicates < 1) throw std::domain_error("StudyGrid: replicates >= 1");
    if (sample_sizes.empty() || psi_values.empty())
      throw std::domain_error("StudyGrid: empty grid axis");
    for (double p : psi_values)
      if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("StudyGrid: psi values must lie in (0,1)");
  }
};

struct StudyResult {
  StudyGrid grid;
  // ratio[i][j]: mean |psi_mom - psi|^2 / mean |psi_mle - psi|^2
  // at n = sample_sizes[i], psi = psi_values[j]
  std::vector<std::vector<double>> ratio;
  std::vector<double> analytic_row;  // n = infinity: 1 / (1 - psi^2)
};

inline double simstudy_analytic_ratio(double psi) {
  return 1.0 / (1.0 - psi * psi);
}

namespace detail {

// one (n, psi) cell; replicate seeds depend only on grid coordinates,
// never on scheduling
inline double simstudy_cell(std::size_t n, double psi, std::size_t replicates,
                            std::uint64_t master_seed, std::size_t n_idx,
                            std::size_t psi_idx) {
  BCParams model{psi, +1};
  double mse_mom = 0.0, mse_mle = 0.0;
  for (std::size_t rep = 0; rep < replicates; ++rep) {
    RngStream rng(derive_seed(master_seed, n_idx, psi_idx, rep), 0);
    CirclePairSample s = bc_sample(model, n, rng);
    Complex mom = bc_mom_estimate(s, +1);
    Complex mle = bc_mle_estimate(s, +1).phi;
    mse_mom += std::norm(mom - model.psi);
    mse_mle += std::norm(mle - model.psi);
  }
  return mse_mom / mse_mle;
}

}  // namespace detail

inline StudyResult run_simstudy(const StudyGrid& grid, unsigned workers = 0) {
  grid.validate();
  if (workers == 0) {
    workers = std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
  }
  StudyResult out;
  out.grid = grid;
  out.ratio.assign(grid.sample_sizes.size(),
                   std::vector<double>(grid.psi_values.size(), 0.0));
  for (double p : grid.psi_values)
    out.analytic_row.push_back(simstudy_analytic_ratio(p));

  const std::size_t cells = grid.sample_sizes.size() * grid.psi_values.size();
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      std::size_t c = next.fetch_add(1);
      if (c >= cells) return;
      std::size_t i = c / grid.psi_values.size();
      std::size_t j = c % grid.psi_values.size();
      out.ratio[i][j] =
          detail::simstudy_cell(grid.sample_sizes[i], grid.psi_values[j],
                                grid.replicates, grid.master_seed, i, j);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace bivexit
