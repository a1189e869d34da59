#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bivexit {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 6.28318530717958647692;

// ln Gamma(x), x > 0. Lanczos approximation (g = 7, 9 terms),
// relative error below 1e-13 on the positive axis.
inline double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: require x > 0");
  static const double c[9] = {
      0.99999999999980993,    676.5203681218851,    -1259.1392167224028,
      771.32342877765313,     -176.61502916214059,  12.507343278686905,
      -0.13857109526572012,   9.9843695780195716e-6, 1.5056327351493116e-7};
  if (x < 0.5) {
    // reflection
    return std::log(kPi / std::sin(kPi * x)) - log_gamma(1.0 - x);
  }
  double z = x - 1.0;
  double a = c[0];
  for (int i = 1; i < 9; ++i) a += c[i] / (z + i);
  double t = z + 7.5;
  return 0.5 * std::log(kTwoPi) + (z + 0.5) * std::log(t) - t + std::log(a);
}

inline double beta_fn(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("beta_fn: require a, b > 0");
  return std::exp(log_gamma(a) + log_gamma(b) - log_gamma(a + b));
}

namespace detail {

// continued fraction for the incomplete beta (Lentz's method)
inline double betacf(double a, double b, double x) {
  const double eps = 1e-16;
  const double tiny = 1e-300;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 500; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return h;
}

}  // namespace detail

// regularized incomplete beta I_x(a, b)
inline double reg_inc_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::domain_error("reg_inc_beta: require a, b > 0");
  if (x < 0.0 || x > 1.0)
    throw std::domain_error("reg_inc_beta: require x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  double lbeta = log_gamma(a) + log_gamma(b) - log_gamma(a + b);
  double front = std::exp(a * std::log(x) + b * std::log1p(-x) - lbeta);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * detail::betacf(a, b, x) / a;
  }
  return 1.0 - front * detail::betacf(b, a, 1.0 - x) / b;
}

namespace detail {

// asymptotic series of I_nu for large argument, nu in {0, 1}
inline double bessel_i_asym_series(int nu, double x) {
  double mu = 4.0 * nu * nu;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k <= 20; ++k) {
    term *= -(mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * x * k);
    sum += term;
    if (std::fabs(term) < 1e-17 * std::fabs(sum)) break;
  }
  return sum;
}

inline double bessel_i_power_series(int nu, double x) {
  double h = 0.5 * x;
  double term = 1.0;
  for (int j = 1; j <= nu; ++j) term *= h / j;
  double sum = term;
  double h2 = h * h;
  for (int k = 1; k <= 200; ++k) {
    term *= h2 / (k * (k + nu));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

}  // namespace detail

inline double log_bessel_i0(double x) {
  if (x < 0.0) throw std::domain_error("bessel_i0: require x >= 0");
  if (x < 20.0) return std::log(detail::bessel_i_power_series(0, x));
  return x - 0.5 * std::log(kTwoPi * x) + std::log(detail::bessel_i_asym_series(0, x));
}

inline double bessel_i0(double x) {
  if (x < 0.0) throw std::domain_error("bessel_i0: require x >= 0");
  if (x < 20.0) return detail::bessel_i_power_series(0, x);
  return std::exp(log_bessel_i0(x));
}

inline double bessel_i1(double x) {
  if (x < 0.0) throw std::domain_error("bessel_i1: require x >= 0");
  if (x < 20.0) return detail::bessel_i_power_series(1, x);
  return std::exp(x - 0.5 * std::log(kTwoPi * x)) * detail::bessel_i_asym_series(1, x);
}

namespace detail {

inline double gamma_p_series(double a, double x) {
  double ap = a, sum = 1.0 / a, del = sum;
  for (int n = 1; n <= 500; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
}

inline double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - log_gamma(a)) * h;
}

}  // namespace detail

// regularized lower incomplete gamma P(a, x)
inline double gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::domain_error("gamma_p: bad arguments");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return detail::gamma_p_series(a, x);
  return 1.0 - detail::gamma_q_cf(a, x);
}

inline double gamma_q(double a, double x) { return 1.0 - gamma_p(a, x); }

// surface area of the unit sphere S^{d-1}
inline double sphere_area(int d) {
  return 2.0 * std::pow(kPi, 0.5 * d) / std::exp(log_gamma(0.5 * d));
}

}  // namespace bivexit
