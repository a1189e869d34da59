#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bivexit/bc_model.hpp"
#include "bivexit/bs_model.hpp"
#include "bivexit/quadrature.hpp"
#include "bivexit/univariate.hpp"

namespace bivexit {

using AnglePair = std::pair<double, double>;

// ---------------------------------------------------------------------
// shifted-start family: Brownian motion launched from xi instead of 0

struct ShiftedParams {
  double rho = 0.5;
  Matrix q;
  int d = 2;
  Vec xi;  // ||xi|| < rho

  void validate() const {
    BSParams{rho, q, d}.validate();
    if (static_cast<int>(xi.size()) != d)
      throw std::domain_error("ShiftedParams: xi dimension mismatch");
    if (!(norm(xi) < rho))
      throw std::domain_error("ShiftedParams: require ||xi|| < rho");
  }

  Vec u_marginal_pole() const {  // Exit_d pole of the U marginal
    Vec e = matvec(q, xi);
    for (double& x : e) x /= rho;
    return e;
  }
};

// joint density as exit-marginal times exit-conditional:
// f(u, v) = Exit_d(rho^{-1} Q xi)(u) * Exit_d(rho Q'u)(v)
inline double shifted_log_density(const Vec& u, const Vec& v,
                                  const ShiftedParams& p) {
  p.validate();
  ExitParams mu{p.u_marginal_pole()};
  Vec eta = matvec(transpose(p.q), u);
  for (double& x : eta) x *= p.rho;
  ExitParams cond{eta};
  return std::log(exit_density(u, mu)) + std::log(exit_density(v, cond));
}

inline PairSample shifted_sample(const ShiftedParams& p, std::size_t n,
                                 RngStream& rng) {
  p.validate();
  PairSample s;
  s.d = p.d;
  s.u.reserve(n);
  s.v.reserve(n);
  ExitParams mu{p.u_marginal_pole()};
  for (std::size_t j = 0; j < n; ++j) {
    Vec u = exit_sample(mu, rng);
    Vec eta = matvec(transpose(p.q), u);
    for (double& x : eta) x *= p.rho;
    s.v.push_back(exit_sample(ExitParams{eta}, rng));
    s.u.push_back(std::move(u));
  }
  return s;
}

// ---------------------------------------------------------------------
// Mobius-marginal family: BC+ pushed through a Mobius map per coordinate

struct MobiusMarginalParams {
  Complex psi, alpha1, alpha2;

  void validate() const {
    if (!(std::abs(psi) < 1.0 && std::abs(alpha1) < 1.0 && std::abs(alpha2) < 1.0))
      throw std::domain_error("MobiusMarginalParams: require moduli < 1");
  }
};

inline double mobius_marginal_log_density(Complex z_u, Complex z_v,
                                          const MobiusMarginalParams& p) {
  p.validate();
  Complex wu = mobius_unit_inverse(z_u, p.alpha1);
  Complex wv = mobius_unit_inverse(z_v, p.alpha2);
  // |d g^{-1} / dz| on the circle
  double j1 = (1.0 - std::norm(p.alpha1)) / std::norm(1.0 - std::conj(p.alpha1) * z_u);
  double j2 = (1.0 - std::norm(p.alpha2)) / std::norm(1.0 - std::conj(p.alpha2) * z_v);
  return bc_log_density(wu, wv, {p.psi, +1}) + std::log(j1) + std::log(j2);
}

inline CirclePairSample mobius_marginal_sample(const MobiusMarginalParams& p,
                                               std::size_t n, RngStream& rng) {
  p.validate();
  CirclePairSample s = bc_sample({p.psi, +1}, n, rng);
  for (std::size_t j = 0; j < n; ++j) {
    s.zu[j] = mobius_unit(s.zu[j], p.alpha1);
    s.zv[j] = mobius_unit(s.zv[j], p.alpha2);
  }
  return s;
}

// ---------------------------------------------------------------------
// von Mises marginal copula family

struct VMCopulaParams {
  double mu1 = 0.0, mu2 = 0.0;
  double kappa1 = 0.0, kappa2 = 0.0;
  Complex psi;

  void validate() const {
    if (!(kappa1 >= 0.0 && kappa2 >= 0.0))
      throw std::domain_error("VMCopulaParams: require kappa >= 0");
    if (!(std::abs(psi) < 1.0))
      throw std::domain_error("VMCopulaParams: require |psi| < 1");
  }
};

// density evaluator with cached marginal CDF tables; build once per
// parameter value, evaluate many times
class VMCopulaDensity {
 public:
  explicit VMCopulaDensity(const VMCopulaParams& p, int table_size = 1024)
      : p_(p),
        f1_(VonMisesParams{p.mu1, p.kappa1}, table_size),
        f2_(VonMisesParams{p.mu2, p.kappa2}, table_size) {
    p.validate();
  }

  double log_density(double theta_u, double theta_v) const {
    double r = std::abs(p_.psi);
    double phase = kTwoPi * (f1_.cdf(theta_u) - f2_.cdf(theta_v)) - std::arg(p_.psi);
    double bracket = 1.0 + r * r - 2.0 * r * std::cos(phase);
    return std::log1p(-r * r) - std::log(4.0 * kPi * kPi) -
           log_bessel_i0(p_.kappa1) - log_bessel_i0(p_.kappa2) +
           p_.kappa1 * std::cos(theta_u - p_.mu1) +
           p_.kappa2 * std::cos(theta_v - p_.mu2) - std::log(bracket);
  }

  const VonMisesCdfTable& f1() const { return f1_; }
  const VonMisesCdfTable& f2() const { return f2_; }
  const VMCopulaParams& params() const { return p_; }

 private:
  VMCopulaParams p_;
  VonMisesCdfTable f1_, f2_;
};

inline double vm_copula_log_density(double theta_u, double theta_v,
                                    const VMCopulaParams& p) {
  return VMCopulaDensity(p).log_density(theta_u, theta_v);
}

inline std::vector<AnglePair> vm_copula_sample(const VMCopulaParams& p,
                                               std::size_t n, RngStream& rng) {
  p.validate();
  VMCopulaDensity dens(p);
  CirclePairSample base = bc_sample({p.psi, +1}, n, rng);
  std::vector<AnglePair> out;
  out.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    double tu = wrap_angle(std::arg(base.zu[j]));
    double tv = wrap_angle(std::arg(base.zv[j]));
    out.emplace_back(dens.f1().quantile(tu / kTwoPi),
                     dens.f2().quantile(tv / kTwoPi));
  }
  return out;
}

// ---------------------------------------------------------------------
// comparison family with von Mises conditionals (exponential quadratic
// form in (1, cos, sin) of both angles; m11 absorbed by the normalizer)

struct SenGuptaParams {
  Matrix m{3, 3};  // m(0,0) ignored

  double exponent(double theta_u, double theta_v) const {
    double au[3] = {1.0, std::cos(theta_u), std::sin(theta_u)};
    double av[3] = {1.0, std::cos(theta_v), std::sin(theta_v)};
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        if (i == 0 && j == 0) continue;
        s += au[i] * m(i, j) * av[j];
      }
    return s;
  }
};

inline double sengupta_log_normalizer(const SenGuptaParams& p, int grid = 256) {
  double z = torus_trapezoid(
      [&](double a, double b) { return std::exp(p.exponent(a, b)); }, grid);
  return std::log(z);
}

inline double sengupta_log_density(double theta_u, double theta_v,
                                   const SenGuptaParams& p,
                                   double log_normalizer) {
  return p.exponent(theta_u, theta_v) - log_normalizer;
}

inline double sengupta_log_density(double theta_u, double theta_v,
                                   const SenGuptaParams& p) {
  return sengupta_log_density(theta_u, theta_v, p, sengupta_log_normalizer(p));
}

// ---------------------------------------------------------------------
// comparison family with an extra coupling cosine (exactly normalized)

struct ShiehJohnsonParams {
  double mu1 = 0.0, mu2 = 0.0, mu3 = 0.0;
  double kappa1 = 0.0, kappa2 = 0.0, kappa3 = 0.0;

  void validate() const {
    if (!(kappa1 >= 0.0 && kappa2 >= 0.0 && kappa3 >= 0.0))
      throw std::domain_error("ShiehJohnsonParams: require kappa >= 0");
  }
};

class ShiehJohnsonDensity {
 public:
  explicit ShiehJohnsonDensity(const ShiehJohnsonParams& p, int table_size = 1024)
      : p_(p),
        f1_(VonMisesParams{p.mu1, p.kappa1}, table_size),
        f2_(VonMisesParams{p.mu2, p.kappa2}, table_size) {
    p.validate();
  }

  double log_density(double theta_u, double theta_v) const {
    double phase = kTwoPi * (f1_.cdf(theta_u) - f2_.cdf(theta_v)) - p_.mu3;
    return p_.kappa1 * std::cos(theta_u - p_.mu1) +
           p_.kappa2 * std::cos(theta_v - p_.mu2) +
           p_.kappa3 * std::cos(phase) - std::log(4.0 * kPi * kPi) -
           log_bessel_i0(p_.kappa1) - log_bessel_i0(p_.kappa2) -
           log_bessel_i0(p_.kappa3);
  }

 private:
  ShiehJohnsonParams p_;
  VonMisesCdfTable f1_, f2_;
};

inline double shieh_johnson_log_density(double theta_u, double theta_v,
                                        const ShiehJohnsonParams& p) {
  return ShiehJohnsonDensity(p).log_density(theta_u, theta_v);
}

// ---------------------------------------------------------------------
// planar family via the Cayley transform of both circle coordinates

// x = tan(arg(z)/2) realizes i (1 - z) / (1 + z) for |z| = 1
inline double cayley_to_real(Complex z) {
  return std::tan(0.5 * std::arg(z));
}

inline double plane_density(double x, double y, Complex psi) {
  if (!(std::abs(psi) < 1.0))
    throw std::domain_error("plane_density: require |psi| < 1");
  Complex theta = Complex(0.0, 1.0) * (1.0 - psi) / (1.0 + psi);
  Complex denom = x + y + theta * (1.0 - x * y);
  return theta.imag() / (kPi * kPi * std::norm(denom));
}

inline std::vector<std::pair<double, double>> plane_sample(Complex psi,
                                                           std::size_t n,
                                                           RngStream& rng) {
  CirclePairSample s = bc_sample({psi, -1}, n, rng);
  std::vector<std::pair<double, double>> out;
  out.reserve(n);
  for (std::size_t j = 0; j < n; ++j)
    out.emplace_back(cayley_to_real(s.zu[j]), cayley_to_real(s.zv[j]));
  return out;
}

// conditional X | Y = y: the joint kernel factors as
// x + y + theta(1 - xy) = (1 - theta y) {x + (theta + y)/(1 - theta y)},
// a Cauchy centered at -Re{(theta + y)/(1 - theta y)}
inline RealCauchyParams plane_conditional(Complex psi, double given_y) {
  Complex theta = Complex(0.0, 1.0) * (1.0 - psi) / (1.0 + psi);
  Complex c = -(theta + given_y) / (1.0 - theta * given_y);
  if (c.imag() < 0.0) c = std::conj(c);  // representative with positive scale
  return RealCauchyParams{c};
}

// ---------------------------------------------------------------------
// cylindrical family: keep the first circle coordinate, Cayley the other

inline std::vector<std::pair<Complex, double>> cylinder_sample(Complex psi,
                                                               std::size_t n,
                                                               RngStream& rng) {
  CirclePairSample s = bc_sample({psi, +1}, n, rng);
  std::vector<std::pair<Complex, double>> out;
  out.reserve(n);
  for (std::size_t j = 0; j < n; ++j)
    out.emplace_back(s.zu[j], cayley_to_real(s.zv[j]));
  return out;
}

inline WrappedCauchyParams cylinder_angle_given_x(Complex psi, double x) {
  Complex c = (Complex(1.0, x) / Complex(1.0, -x)) * psi;
  return WrappedCauchyParams{c};
}

inline RealCauchyParams cylinder_x_given_angle(Complex psi, Complex z_theta) {
  Complex zp = std::conj(z_theta) * psi;
  Complex c = Complex(0.0, -1.0) * (1.0 - zp) / (1.0 + zp);
  if (c.imag() < 0.0) c = std::conj(c);
  return RealCauchyParams{c};
}

// ---------------------------------------------------------------------
// Sklar-style marginal transform of a uniform-marginal angle sample

struct MarginalTarget {
  std::function<double(double)> cdf;
  std::function<double(double)> quantile;
};

inline MarginalTarget uniform_circle_target() {
  return {[](double t) { return t / kTwoPi; },
          [](double u) { return kTwoPi * u; }};
}

// (theta_u, theta_v) with uniform marginals on [0, 2pi) mapped to
// (Fu^{-1}(theta_u / 2pi), Fv^{-1}(theta_v / 2pi))
inline std::vector<AnglePair> transform_marginals(
    const std::vector<AnglePair>& sample, const MarginalTarget& target_u,
    const MarginalTarget& target_v) {
  if (!target_u.cdf || !target_u.quantile || !target_v.cdf || !target_v.quantile)
    throw std::domain_error("transform_marginals: missing target functions");
  for (const MarginalTarget* t : {&target_u, &target_v}) {
    double prev = t->quantile(0.02);
    for (int k = 2; k <= 48; ++k) {
      double cur = t->quantile(0.02 * k);
      if (!(cur > prev))
        throw std::domain_error("transform_marginals: target not strictly increasing");
      prev = cur;
    }
  }
  std::vector<AnglePair> out;
  out.reserve(sample.size());
  for (const auto& [tu, tv] : sample)
    out.emplace_back(target_u.quantile(tu / kTwoPi),
                     target_v.quantile(tv / kTwoPi));
  return out;
}

}  // namespace bivexit
