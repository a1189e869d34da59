#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>

#include "bivexit/special.hpp"

namespace bivexit {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;  // reported by the rule, not a guarantee
  std::size_t evaluations = 0;
};

struct QuadratureError : std::runtime_error {
  QuadratureResult best;
  QuadratureError(const char* msg, QuadratureResult r)
      : std::runtime_error(msg), best(r) {}
};

namespace detail {

struct AdaptiveSimpson {
  const std::function<double(double)>& f;
  std::size_t evals = 0;
  double err = 0.0;

  double eval(double x) {
    ++evals;
    return f(x);
  }

  double recurse(double a, double b, double fa, double fm, double fb,
                 double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = eval(lm), frm = eval(rm);
    double h = b - a;
    double left = h / 12.0 * (fa + 4.0 * flm + fm);
    double right = h / 12.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
      if (depth <= 0 && std::fabs(delta) > 15.0 * tol)
        err += std::fabs(delta);
      else
        err += std::fabs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
  }
};

}  // namespace detail

// adaptive Simpson on [a, b]; |value - integral| <= tol for smooth f
inline QuadratureResult quad_1d(const std::function<double(double)>& f,
                                double a, double b, double tol = 1e-10) {
  detail::AdaptiveSimpson s{f};
  double fa = s.eval(a), fb = s.eval(b), fm = s.eval(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  double v = s.recurse(a, b, fa, fm, fb, whole, tol, 48);
  QuadratureResult r{v, s.err, s.evals};
  if (!(std::isfinite(v))) throw QuadratureError("quad_1d: non-finite result", r);
  if (s.err > 100.0 * tol && s.err > 1e-8)
    throw QuadratureError("quad_1d: failed to reach tolerance", r);
  return r;
}

// tensor trapezoid over [0,2pi)^2; spectrally accurate for smooth
// periodic integrands. Grid is doubled until the relative change is
// below 1e-9 (or the cap is hit).
inline double quad_torus_2d(const std::function<double(double, double)>& f,
                            int n = 32) {
  if (n < 4) n = 4;
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (; n <= 4096; n *= 2) {
    double sum = 0.0;
    double h = kTwoPi / n;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) sum += f(i * h, j * h);
    double v = sum * h * h;
    if (std::isfinite(prev) &&
        std::fabs(v - prev) <= 1e-9 * std::max(1.0, std::fabs(v)))
      return v;
    prev = v;
  }
  return prev;
}

// single fixed-grid torus rule, used where the caller controls refinement
inline double torus_trapezoid(const std::function<double(double, double)>& f,
                              int n) {
  double sum = 0.0;
  double h = kTwoPi / n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sum += f(i * h, j * h);
  return sum * h * h;
}

}  // namespace bivexit
