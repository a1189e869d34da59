#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "bivexit/linalg.hpp"
#include "bivexit/optimize.hpp"
#include "bivexit/quadrature.hpp"
#include "bivexit/rng.hpp"
#include "bivexit/special.hpp"

namespace bivexit {

using Complex = std::complex<double>;

inline double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  return t;
}

// ---------------------------------------------------------------------
// uniform distribution on S^{d-1}

inline Vec uniform_sphere_sample(int d, RngStream& rng) {
  if (d < 2) throw std::domain_error("uniform_sphere_sample: require d >= 2");
  Vec x(d);
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (int i = 0; i < d; ++i) {
      x[i] = rng.gaussian();
      n2 += x[i] * x[i];
    }
  } while (n2 < 1e-24);
  double inv = 1.0 / std::sqrt(n2);
  for (double& v : x) v *= inv;
  return x;
}

// uniform on the tangent subsphere {t : ||t|| = 1, mu't = 0}
inline Vec tangent_sphere_sample(const Vec& mu, RngStream& rng) {
  const int d = static_cast<int>(mu.size());
  Vec t(d);
  double n2 = 0.0;
  do {
    for (int i = 0; i < d; ++i) t[i] = rng.gaussian();
    double proj = dot(t, mu);
    for (int i = 0; i < d; ++i) t[i] -= proj * mu[i];
    n2 = dot(t, t);
  } while (n2 < 1e-24);
  double inv = 1.0 / std::sqrt(n2);
  for (double& v : t) v *= inv;
  return t;
}

// ---------------------------------------------------------------------
// H'(theta, nu) family on (-1, 1)

struct HPrimeParams {
  double theta = 0.0;  // -1 < theta < 1
  double nu = 0.0;     // nu > -1/2

  void validate() const {
    if (!(theta > -1.0 && theta < 1.0))
      throw std::domain_error("HPrimeParams: require |theta| < 1");
    if (!(nu > -0.5)) throw std::domain_error("HPrimeParams: require nu > -1/2");
  }
};

inline double hprime_density(double x, const HPrimeParams& p) {
  p.validate();
  if (std::fabs(x) > 1.0) throw std::domain_error("hprime_density: require |x| <= 1");
  if (std::fabs(x) == 1.0 && p.nu < 0.5)
    return std::numeric_limits<double>::infinity();
  double th = p.theta, nu = p.nu;
  return (1.0 - th * th) * std::pow(1.0 - x * x, nu - 0.5) /
         (beta_fn(nu + 0.5, 0.5) *
          std::pow(1.0 - 2.0 * th * x + th * th, nu + 1.0));
}

// CDF via the substitution x = cos(phi), which removes the endpoint
// singularity of the (1 - x^2)^{nu - 1/2} factor
inline double hprime_cdf(double x, const HPrimeParams& p) {
  p.validate();
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double th = p.theta, nu = p.nu;
  double c = (1.0 - th * th) / beta_fn(nu + 0.5, 0.5);
  auto g = [&](double phi) {
    double s = std::sin(phi);
    double xx = std::cos(phi);
    return c * std::pow(s * s, nu) /
           std::pow(1.0 - 2.0 * th * xx + th * th, nu + 1.0);
  };
  // integrate over phi in [acos(x), pi] <-> x' in (-1, x]
  return quad_1d(g, std::acos(x), kPi, 1e-11).value;
}

// mean theta; E(X^2) = {1 + (2 nu + 1) theta^2} / {2 (nu + 1)}
inline double hprime_mean(const HPrimeParams& p) { return p.theta; }
inline double hprime_second_moment(const HPrimeParams& p) {
  return (1.0 + (2.0 * p.nu + 1.0) * p.theta * p.theta) / (2.0 * (p.nu + 1.0));
}

namespace detail {

// proposal draw from the theta = 0 member, i.e. x with density
// proportional to (1 - x^2)^{nu - 1/2}. When 2 nu + 2 is an integer m
// this is the first coordinate of a uniform point on S^{m-1}; otherwise
// fall back to Beta(nu + 1/2, nu + 1/2) by CDF inversion.
inline double hprime_symmetric_draw(double nu, RngStream& rng) {
  double md = 2.0 * nu + 2.0;
  int m = static_cast<int>(std::lround(md));
  if (m >= 2 && std::fabs(md - m) < 1e-9) {
    if (m == 2) return std::cos(kPi * rng.uniform());
    Vec y = uniform_sphere_sample(m, rng);
    return y[0];
  }
  double a = nu + 0.5;
  double u = rng.uniform();
  double b = find_root([&](double t) { return reg_inc_beta(t, a, a) - u; },
                       0.0, 1.0, 1e-13);
  return 2.0 * b - 1.0;
}

}  // namespace detail

// rejection sampler; acceptance degrades as |theta| -> 1
inline double hprime_sample(const HPrimeParams& p, RngStream& rng) {
  p.validate();
  double th = p.theta, nu = p.nu;
  if (th == 0.0) return detail::hprime_symmetric_draw(nu, rng);
  double at = std::fabs(th);
  // sup over x of (1 - 2 theta x + theta^2)^{-(nu+1)} is at x = sgn(theta)
  double log_m = -2.0 * (nu + 1.0) * std::log1p(-at);
  for (int it = 0; it < 100000; ++it) {
    double x = detail::hprime_symmetric_draw(nu, rng);
    double log_r = -(nu + 1.0) * std::log(1.0 - 2.0 * th * x + th * th);
    if (std::log(std::max(rng.uniform(), 1e-300)) <= log_r - log_m) return x;
  }
  throw std::runtime_error("hprime_sample: rejection loop exhausted");
}

// ---------------------------------------------------------------------
// exit distribution Exit_d(eta) on S^{d-1}

struct ExitParams {
  Vec eta;  // ||eta|| < 1

  int dim() const { return static_cast<int>(eta.size()); }
  void validate() const {
    if (dim() < 2) throw std::domain_error("ExitParams: require d >= 2");
    if (!(norm(eta) < 1.0))
      throw std::domain_error("ExitParams: require ||eta|| < 1");
  }
};

inline double exit_density(const Vec& x, const ExitParams& p) {
  p.validate();
  const int d = p.dim();
  if (static_cast<int>(x.size()) != d)
    throw std::domain_error("exit_density: dimension mismatch");
  double eta2 = dot(p.eta, p.eta);
  double dist2 = 0.0;
  for (int i = 0; i < d; ++i) {
    double diff = x[i] - p.eta[i];
    dist2 += diff * diff;
  }
  return (1.0 - eta2) / (sphere_area(d) * std::pow(dist2, 0.5 * d));
}

inline Vec exit_sample(const ExitParams& p, RngStream& rng) {
  p.validate();
  const int d = p.dim();
  double r = norm(p.eta);
  if (r < 1e-14) return uniform_sphere_sample(d, rng);
  Vec mu = p.eta;
  for (double& v : mu) v /= r;
  double w = hprime_sample({r, 0.5 * (d - 2)}, rng);
  Vec t = tangent_sphere_sample(mu, rng);
  double s = std::sqrt(std::max(0.0, 1.0 - w * w));
  Vec x(d);
  for (int i = 0; i < d; ++i) x[i] = w * mu[i] + s * t[i];
  return x;
}

// ---------------------------------------------------------------------
// wrapped (circular) Cauchy C*(phi)

struct WrappedCauchyParams {
  Complex phi;

  void validate() const {
    if (!(std::abs(phi) < 1.0))
      throw std::domain_error("WrappedCauchyParams: require |phi| < 1");
  }
};

// density w.r.t. arc length d theta
inline double wrapped_cauchy_density(Complex z, const WrappedCauchyParams& p) {
  p.validate();
  double r2 = std::norm(p.phi);
  return (1.0 - r2) / (kTwoPi * std::norm(z - p.phi));
}

// Mobius map of the unit circle: (z + beta) / (1 + conj(beta) z)
inline Complex mobius_unit(Complex z, Complex beta) {
  return (z + beta) / (1.0 + std::conj(beta) * z);
}

inline Complex mobius_unit_inverse(Complex w, Complex beta) {
  return (w - beta) / (1.0 - std::conj(beta) * w);
}

inline Complex wrapped_cauchy_sample(const WrappedCauchyParams& p, RngStream& rng) {
  p.validate();
  Complex z = std::polar(1.0, kTwoPi * rng.uniform());
  return mobius_unit(z, p.phi);
}

// CDF of the angle on [0, 2pi), cut at 0; exact via the inverse Mobius map
inline double wrapped_cauchy_cdf(double theta, const WrappedCauchyParams& p) {
  p.validate();
  auto u = [&](double t) {
    Complex z = std::polar(1.0, t);
    return (std::arg(mobius_unit_inverse(z, p.phi)) + kPi) / kTwoPi;
  };
  double f = u(wrap_angle(theta)) - u(0.0);
  if (f < 0.0) f += 1.0;
  return f;
}

struct WrappedCauchyFit {
  Complex phi;
  bool converged = false;
  bool boundary = false;
  int iterations = 0;
};

inline double wrapped_cauchy_loglik(const std::vector<Complex>& z, Complex phi) {
  double ll = 0.0;
  double lr = std::log1p(-std::norm(phi));
  for (const Complex& zj : z) ll += lr - std::log(std::norm(zj - phi));
  return ll;
}

// MLE of phi by the score fixed point, with a simplex fallback.
// |phi| is clamped to 1 - 1e-9; the boundary flag reports clamping.
inline WrappedCauchyFit wrapped_cauchy_mle(const std::vector<Complex>& z,
                                           int max_iterations = 1000) {
  if (z.size() < 1) throw std::domain_error("wrapped_cauchy_mle: empty sample");
  const double clamp = 1.0 - 1e-9;
  WrappedCauchyFit fit;
  if (z.size() == 1) {
    fit.phi = z[0] / std::abs(z[0]);
    fit.phi *= clamp;
    fit.boundary = true;
    fit.converged = true;
    return fit;
  }
  Complex phi = 0.0;
  for (const Complex& zj : z) phi += zj;
  phi /= static_cast<double>(z.size());  // moment start
  if (std::abs(phi) > 0.999) phi *= 0.999 / std::abs(phi);
  int it = 0;
  for (; it < max_iterations; ++it) {
    // score equation: phi / (1 - |phi|^2) = mean of (z_j - phi) / |z_j - phi|^2
    double wsum = 0.0;
    Complex zsum = 0.0;
    for (const Complex& zj : z) {
      double w = 1.0 / std::max(std::norm(zj - phi), 1e-300);
      wsum += w;
      zsum += w * zj;
    }
    double n = static_cast<double>(z.size());
    Complex next = (zsum / n) / (wsum / n + 1.0 / (1.0 - std::norm(phi)));
    if (std::abs(next) > clamp) next *= clamp / std::abs(next);
    double step = std::abs(next - phi);
    phi = next;
    if (step <= 1e-10) {
      fit.converged = true;
      break;
    }
  }
  if (!fit.converged) {
    // simplex fallback on (Re, Im) with the disc constraint via penalty
    auto nll = [&](const std::vector<double>& x) {
      Complex c(x[0], x[1]);
      if (std::abs(c) >= clamp) c *= clamp / std::abs(c);
      return -wrapped_cauchy_loglik(z, c);
    };
    NelderMeadOptions opts;
    opts.diameter_tol = 1e-11;
    auto r = nelder_mead(nll, {phi.real(), phi.imag()}, opts);
    Complex c(r.x[0], r.x[1]);
    if (std::abs(c) >= clamp) c *= clamp / std::abs(c);
    if (-r.value >= wrapped_cauchy_loglik(z, phi)) phi = c;
    fit.converged = r.converged;
  }
  fit.phi = phi;
  fit.boundary = std::abs(phi) >= clamp - 1e-12;
  fit.iterations = it;
  return fit;
}

// ---------------------------------------------------------------------
// von Mises vM(mu, kappa)

struct VonMisesParams {
  double mu = 0.0;     // [0, 2pi)
  double kappa = 0.0;  // >= 0

  void validate() const {
    if (!(kappa >= 0.0)) throw std::domain_error("VonMisesParams: require kappa >= 0");
  }
};

inline double von_mises_density(double theta, const VonMisesParams& p) {
  p.validate();
  return std::exp(p.kappa * std::cos(theta - p.mu) - log_bessel_i0(p.kappa)) / kTwoPi;
}

// F(theta) = integral of the density from 0 to theta, theta in [0, 2pi]
inline double von_mises_cdf(double theta, const VonMisesParams& p) {
  p.validate();
  if (theta <= 0.0) return 0.0;
  if (theta >= kTwoPi) return 1.0;
  if (p.kappa == 0.0) return theta / kTwoPi;
  return quad_1d([&](double t) { return von_mises_density(t, p); }, 0.0, theta,
                 1e-11)
      .value;
}

inline double von_mises_quantile(double u, const VonMisesParams& p) {
  p.validate();
  if (u < 0.0 || u > 1.0)
    throw std::domain_error("von_mises_quantile: require u in [0, 1]");
  if (u == 0.0) return 0.0;
  if (u == 1.0) return kTwoPi;
  if (p.kappa == 0.0) return kTwoPi * u;
  return find_root([&](double t) { return von_mises_cdf(t, p) - u; }, 0.0,
                   kTwoPi, 1e-10);
}

// tabulated CDF/quantile for fitting loops; cumulative Simpson on a
// uniform grid, linear interpolation between nodes
class VonMisesCdfTable {
 public:
  explicit VonMisesCdfTable(const VonMisesParams& p, int n = 1024)
      : p_(p), n_(n), cdf_(n + 1, 0.0) {
    p.validate();
    const double h = kTwoPi / n;
    double prev = von_mises_density(0.0, p);
    for (int i = 0; i < n; ++i) {
      double mid = von_mises_density((i + 0.5) * h, p);
      double next = von_mises_density((i + 1.0) * h, p);
      cdf_[i + 1] = cdf_[i] + h / 6.0 * (prev + 4.0 * mid + next);
      prev = next;
    }
    // normalize away residual quadrature error
    double total = cdf_[n];
    for (double& v : cdf_) v /= total;
  }

  double cdf(double theta) const {
    double t = wrap_angle(theta);
    double pos = t / kTwoPi * n_;
    int i = std::min(static_cast<int>(pos), n_ - 1);
    double frac = pos - i;
    return cdf_[i] + frac * (cdf_[i + 1] - cdf_[i]);
  }

  double quantile(double u) const {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return kTwoPi;
    auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    int i = std::max(1, static_cast<int>(it - cdf_.begin()));
    double lo = cdf_[i - 1], hi = cdf_[i];
    double frac = (hi > lo) ? (u - lo) / (hi - lo) : 0.0;
    return (i - 1 + frac) * kTwoPi / n_;
  }

 private:
  VonMisesParams p_;
  int n_;
  std::vector<double> cdf_;
};

// inverse of A1(kappa) = I1/I0, for moment-based initialization
inline double von_mises_kappa_from_resultant(double rbar) {
  if (rbar <= 0.0) return 0.0;
  if (rbar >= 0.999) rbar = 0.999;
  auto f = [&](double k) { return bessel_i1(k) / bessel_i0(k) - rbar; };
  double hi = 1.0;
  while (f(hi) < 0.0 && hi < 1e4) hi *= 2.0;
  return find_root(f, 0.0, hi, 1e-10);
}

// ---------------------------------------------------------------------
// real Cauchy C(phi), location Re(phi), scale Im(phi)

struct RealCauchyParams {
  Complex phi;  // Im(phi) > 0

  void validate() const {
    if (!(phi.imag() > 0.0))
      throw std::domain_error("RealCauchyParams: require Im(phi) > 0");
  }
};

inline double real_cauchy_density(double x, const RealCauchyParams& p) {
  p.validate();
  double m = p.phi.real(), s = p.phi.imag();
  return s / (kPi * (s * s + (x - m) * (x - m)));
}

inline double real_cauchy_cdf(double x, const RealCauchyParams& p) {
  p.validate();
  return 0.5 + std::atan((x - p.phi.real()) / p.phi.imag()) / kPi;
}

}  // namespace bivexit
