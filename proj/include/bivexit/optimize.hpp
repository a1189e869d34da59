#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace bivexit {

// bracketed root finding: bisection with secant acceleration
inline double find_root(const std::function<double(double)>& f, double lo,
                        double hi, double tol = 1e-12) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0)
    throw std::domain_error("find_root: no sign change on bracket");
  for (int it = 0; it < 200; ++it) {
    double mid;
    // secant step when it falls inside the bracket, else bisect
    double denom = fhi - flo;
    if (denom != 0.0) {
      mid = hi - fhi * (hi - lo) / denom;
      double lo_guard = lo + 0.01 * (hi - lo);
      double hi_guard = hi - 0.01 * (hi - lo);
      if (!(mid > lo_guard && mid < hi_guard)) mid = 0.5 * (lo + hi);
    } else {
      mid = 0.5 * (lo + hi);
    }
    double fmid = f(mid);
    if (fmid == 0.0 || hi - lo <= tol) return mid;
    if (flo * fmid < 0.0) {
      hi = mid;
      fhi = fmid;
    } else {
      lo = mid;
      flo = fmid;
    }
  }
  return 0.5 * (lo + hi);
}

struct NelderMeadOptions {
  int max_iterations = 5000;
  double diameter_tol = 1e-8;
  double initial_step = 0.5;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
};

// derivative-free simplex search (Nelder-Mead)
inline NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& objective,
    const std::vector<double>& x0, NelderMeadOptions opts = {}) {
  const std::size_t n = x0.size();
  auto eval = [&](const std::vector<double>& x) {
    double v = objective(x);
    if (std::isnan(v))
      throw std::runtime_error("nelder_mead: non-finite objective at x[0]=" +
                               (x.empty() ? std::string("?") : std::to_string(x[0])));
    return v;
  };

  std::vector<std::vector<double>> verts(n + 1, x0);
  std::vector<double> fv(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    double step = opts.initial_step;
    if (verts[i + 1][i] != 0.0) step *= std::fabs(verts[i + 1][i]);
    verts[i + 1][i] += step;
  }
  for (std::size_t i = 0; i <= n; ++i) fv[i] = eval(verts[i]);

  auto order = [&]() {
    std::vector<std::size_t> idx(n + 1);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    std::vector<std::vector<double>> v2(n + 1);
    std::vector<double> f2(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      v2[k] = verts[idx[k]];
      f2[k] = fv[idx[k]];
    }
    verts.swap(v2);
    fv.swap(f2);
  };

  auto diameter = [&]() {
    double dmax = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      double d2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double diff = verts[k][i] - verts[0][i];
        d2 += diff * diff;
      }
      dmax = std::max(dmax, std::sqrt(d2));
    }
    return dmax;
  };

  NelderMeadResult res;
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    order();
    if (diameter() <= opts.diameter_tol) {
      res.converged = true;
      break;
    }
    std::vector<double> centroid(n, 0.0);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) centroid[i] += verts[k][i] / n;

    auto point = [&](double coef) {
      std::vector<double> p(n);
      for (std::size_t i = 0; i < n; ++i)
        p[i] = centroid[i] + coef * (verts[n][i] - centroid[i]);
      return p;
    };

    std::vector<double> xr = point(-1.0);
    double fr = eval(xr);
    if (fr < fv[0]) {
      std::vector<double> xe = point(-2.0);
      double fe = eval(xe);
      if (fe < fr) {
        verts[n] = xe;
        fv[n] = fe;
      } else {
        verts[n] = xr;
        fv[n] = fr;
      }
    } else if (fr < fv[n - 1]) {
      verts[n] = xr;
      fv[n] = fr;
    } else {
      double coef = (fr < fv[n]) ? -0.5 : 0.5;
      std::vector<double> xc = point(coef);
      double fc = eval(xc);
      if (fc < std::min(fr, fv[n])) {
        verts[n] = xc;
        fv[n] = fc;
      } else {
        // shrink toward the best vertex
        for (std::size_t k = 1; k <= n; ++k) {
          for (std::size_t i = 0; i < n; ++i)
            verts[k][i] = verts[0][i] + 0.5 * (verts[k][i] - verts[0][i]);
          fv[k] = eval(verts[k]);
        }
      }
    }
  }
  order();
  res.x = verts[0];
  res.value = fv[0];
  res.iterations = it;
  return res;
}

}  // namespace bivexit
