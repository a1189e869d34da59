#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "bivexit/linalg.hpp"
#include "bivexit/rng.hpp"
#include "bivexit/univariate.hpp"

namespace bivexit {

// circular complex form of the d = 2 family; sign carries det Q
struct BCParams {
  Complex psi;
  int sign = +1;  // +1 or -1

  void validate() const {
    if (!(std::abs(psi) < 1.0)) throw std::domain_error("BCParams: require |psi| < 1");
    if (sign != 1 && sign != -1) throw std::domain_error("BCParams: sign must be +-1");
  }
};

struct CirclePairSample {
  std::vector<Complex> zu, zv;

  std::size_t size() const { return zu.size(); }
};

inline double bc_log_density(Complex z_u, Complex z_v, const BCParams& p) {
  p.validate();
  // kernel |1 - psi z_v conj(z_u)|^2 for det Q = +1, |1 - psi z_v z_u|^2 for -1
  Complex zu_pow = (p.sign > 0) ? std::conj(z_u) : z_u;
  double denom = std::norm(1.0 - p.psi * z_v * zu_pow);
  return std::log1p(-std::norm(p.psi)) - std::log(4.0 * kPi * kPi) -
         std::log(denom);
}

// Z_U circular uniform; Z_V | Z_U = z_u is wrapped Cauchy with
// parameter conj(psi) z_u (sign +) or conj(psi) conj(z_u) (sign -),
// reached by a Mobius push of an independent uniform point
inline CirclePairSample bc_sample(const BCParams& p, std::size_t n,
                                  RngStream& rng) {
  p.validate();
  CirclePairSample s;
  s.zu.reserve(n);
  s.zv.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    Complex zu = std::polar(1.0, kTwoPi * rng.uniform());
    Complex zt = std::polar(1.0, kTwoPi * rng.uniform());
    Complex beta = std::conj(p.psi) * (p.sign > 0 ? zu : std::conj(zu));
    s.zu.push_back(zu);
    s.zv.push_back(mobius_unit(zt, beta));
  }
  return s;
}

// closed-form cross moments E(Z_U^j Z_V^k)
inline Complex bc_moment(int j, int k, const BCParams& p) {
  p.validate();
  if (p.sign > 0) {
    if (j != -k) return 0.0;
    if (j >= 0) return std::pow(p.psi, j);
    return std::pow(std::conj(p.psi), -j);
  }
  if (j != k) return 0.0;
  if (j >= 0) return std::pow(std::conj(p.psi), j);
  return std::pow(p.psi, -j);
}

// reduce a pair to the wrapped Cauchy pivot W with W ~ C*(psi)
inline Complex bc_pair_w(Complex zu, Complex zv, int sign = +1) {
  return (sign > 0) ? zu * std::conj(zv) : std::conj(zu * zv);
}

// method of moments: psi_hat = mean of Z_U conj(Z_V) (sign +)
inline Complex bc_mom_estimate(const CirclePairSample& s, int sign = +1) {
  if (s.size() < 1) throw std::domain_error("bc_mom_estimate: empty sample");
  Complex sum = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j)
    sum += bc_pair_w(s.zu[j], s.zv[j], sign);
  return sum / static_cast<double>(s.size());
}

// MLE via the wrapped Cauchy reduction on W_j = Z_U conj(Z_V)
inline WrappedCauchyFit bc_mle_estimate(const CirclePairSample& s,
                                        int sign = +1) {
  if (s.size() < 1) throw std::domain_error("bc_mle_estimate: empty sample");
  if (s.size() == 1) {
    WrappedCauchyFit fit;
    fit.phi = bc_pair_w(s.zu[0], s.zv[0], sign);
    fit.converged = true;
    return fit;
  }
  std::vector<Complex> w(s.size());
  for (std::size_t j = 0; j < s.size(); ++j)
    w[j] = bc_pair_w(s.zu[j], s.zv[j], sign);
  return wrapped_cauchy_mle(w);
}

// Fisher information for (Re psi, Im psi): 2 / (1 - |psi|^2)^2 times I
inline Matrix bc_fisher_info(Complex psi) {
  if (!(std::abs(psi) < 1.0))
    throw std::domain_error("bc_fisher_info: require |psi| < 1");
  double scale = 2.0 / std::pow(1.0 - std::norm(psi), 2);
  Matrix m = Matrix::identity(2);
  for (double& v : m.a) v *= scale;
  return m;
}

// componentwise product; BC+(psi1) x BC+(psi2) -> BC+(psi1 psi2)
inline CirclePairSample bc_product(const CirclePairSample& s1,
                                   const CirclePairSample& s2) {
  if (s1.size() != s2.size())
    throw std::domain_error("bc_product: length mismatch");
  CirclePairSample out;
  out.zu.reserve(s1.size());
  out.zv.reserve(s1.size());
  for (std::size_t j = 0; j < s1.size(); ++j) {
    out.zu.push_back(s1.zu[j] * s2.zu[j]);
    out.zv.push_back(s1.zv[j] * s2.zv[j]);
  }
  return out;
}

// componentwise n-th power; output law BC(psi^n)
inline CirclePairSample bc_power(const CirclePairSample& s, int n) {
  if (n < 1) throw std::domain_error("bc_power: require n >= 1");
  CirclePairSample out;
  out.zu.reserve(s.size());
  out.zv.reserve(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) {
    out.zu.push_back(std::pow(s.zu[j], n));
    out.zv.push_back(std::pow(s.zv[j], n));
  }
  return out;
}

// draw from BC(psi^{1/n}); the n-fold product of independent such
// samples matches BC(psi). Principal branch of the root.
inline CirclePairSample bc_root_sample(const BCParams& p, int root,
                                       std::size_t n, RngStream& rng) {
  if (root < 1) throw std::domain_error("bc_root_sample: require root >= 1");
  BCParams q{std::pow(p.psi, 1.0 / root), p.sign};
  return bc_sample(q, n, rng);
}

}  // namespace bivexit
