#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "bivexit/linalg.hpp"
#include "bivexit/rng.hpp"
#include "bivexit/special.hpp"
#include "bivexit/stats.hpp"
#include "bivexit/univariate.hpp"

namespace bivexit {

inline bool is_orthogonal(const Matrix& q, double tol = 1e-10) {
  if (q.rows != q.cols) return false;
  Matrix qtq = matmul(transpose(q), q);
  for (std::size_t i = 0; i < q.rows; ++i) qtq(i, i) -= 1.0;
  return max_abs(qtq) <= tol && std::fabs(std::fabs(determinant(q)) - 1.0) <= tol;
}

struct BSParams {
  double rho = 0.0;  // [0, 1)
  Matrix q;          // orthogonal, d x d
  int d = 2;

  void validate() const {
    if (d < 2) throw std::domain_error("BSParams: require d >= 2");
    if (!(rho >= 0.0 && rho < 1.0))
      throw std::domain_error("BSParams: require 0 <= rho < 1");
    if (q.rows != static_cast<std::size_t>(d) || !is_orthogonal(q))
      throw std::domain_error("BSParams: Q must be d x d orthogonal");
  }
};

struct PairSample {
  int d = 0;
  std::vector<Vec> u, v;

  std::size_t size() const { return u.size(); }
};

// 2x2 orthogonal matrix: rotation for det +1, reflection for det -1
inline Matrix rotation2(double theta, int det_sign = +1) {
  Matrix q(2, 2);
  double c = std::cos(theta), s = std::sin(theta);
  double ds = (det_sign >= 0) ? 1.0 : -1.0;
  q(0, 0) = c;
  q(0, 1) = -ds * s;
  q(1, 0) = s;
  q(1, 1) = ds * c;
  return q;
}

// Haar-like orthogonal matrix: modified Gram-Schmidt of a Gaussian
// matrix; normalization signs give the positive-diagonal-R convention
inline Matrix random_orthogonal(int d, RngStream& rng) {
  Matrix g(d, d);
  for (auto& x : g.a) x = rng.gaussian();
  for (int k = 0; k < d; ++k) {
    for (int j = 0; j < k; ++j) {
      double proj = 0.0;
      for (int i = 0; i < d; ++i) proj += g(i, j) * g(i, k);
      for (int i = 0; i < d; ++i) g(i, k) -= proj * g(i, j);
    }
    double nk = 0.0;
    for (int i = 0; i < d; ++i) nk += g(i, k) * g(i, k);
    nk = std::sqrt(nk);
    for (int i = 0; i < d; ++i) g(i, k) /= nk;
  }
  return g;
}

inline double bs_log_density(const Vec& u, const Vec& v, const BSParams& p) {
  p.validate();
  if (static_cast<int>(u.size()) != p.d || static_cast<int>(v.size()) != p.d)
    throw std::domain_error("bs_log_density: dimension mismatch");
  double x = dot(u, matvec(p.q, v));
  double area = sphere_area(p.d);
  return -2.0 * std::log(area) + std::log1p(-p.rho * p.rho) -
         0.5 * p.d * std::log(1.0 - 2.0 * p.rho * x + p.rho * p.rho);
}

// V uniform, then U | V = v as W Qv + sqrt(1 - W^2) t with
// W ~ H'(rho, (d-2)/2) and t uniform on the tangent subsphere of Qv
inline PairSample bs_sample(const BSParams& p, std::size_t n, RngStream& rng) {
  p.validate();
  PairSample s;
  s.d = p.d;
  s.u.reserve(n);
  s.v.reserve(n);
  HPrimeParams hp{p.rho, 0.5 * (p.d - 2)};
  for (std::size_t j = 0; j < n; ++j) {
    Vec v = uniform_sphere_sample(p.d, rng);
    Vec qv = matvec(p.q, v);
    Vec u(p.d);
    if (p.rho == 0.0) {
      u = uniform_sphere_sample(p.d, rng);
    } else {
      double w = hprime_sample(hp, rng);
      Vec t = tangent_sphere_sample(qv, rng);
      double c = std::sqrt(std::max(0.0, 1.0 - w * w));
      for (int i = 0; i < p.d; ++i) u[i] = w * qv[i] + c * t[i];
    }
    s.u.push_back(std::move(u));
    s.v.push_back(std::move(v));
  }
  return s;
}

struct BSMoments {
  Vec mean_u, mean_v;
  Matrix cov_uu;    // d^{-1} I
  Matrix cross_uv;  // d^{-1} rho Q
};

inline BSMoments bs_moments(const BSParams& p) {
  p.validate();
  BSMoments m;
  m.mean_u.assign(p.d, 0.0);
  m.mean_v.assign(p.d, 0.0);
  m.cov_uu = Matrix::identity(p.d);
  for (double& x : m.cov_uu.a) x /= p.d;
  m.cross_uv = p.q;
  for (double& x : m.cross_uv.a) x *= p.rho / p.d;
  return m;
}

namespace detail {

inline Matrix sample_mean_outer(const std::vector<Vec>& x,
                                const std::vector<Vec>& y) {
  const std::size_t n = x.size();
  const std::size_t d = x[0].size();
  Matrix m(d, d);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) m(a, b) += x[j][a] * y[j][b];
  for (double& v : m.a) v /= static_cast<double>(n);
  return m;
}

inline Vec sample_mean(const std::vector<Vec>& x) {
  Vec m(x[0].size(), 0.0);
  for (const Vec& v : x)
    for (std::size_t i = 0; i < m.size(); ++i) m[i] += v[i];
  for (double& v : m) v /= static_cast<double>(x.size());
  return m;
}

// L^{-1} M for lower triangular L
inline Matrix trisolve_lower(const Matrix& l, const Matrix& m) {
  const std::size_t n = l.rows;
  Matrix x = m;
  for (std::size_t col = 0; col < m.cols; ++col) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = x(i, col);
      for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * x(k, col);
      x(i, col) = s / l(i, i);
    }
  }
  return x;
}

}  // namespace detail

// plug-in Johnson-Wehrly correlation: sqrt of the top eigenvalue of
// Suu^{-1} Suv Svv^{-1} Suv'
inline double jw_correlation(const PairSample& s) {
  if (s.size() < static_cast<std::size_t>(s.d + 1))
    throw std::domain_error("jw_correlation: require n >= d + 1");
  Vec mu = detail::sample_mean(s.u), mv = detail::sample_mean(s.v);
  Matrix suu = detail::sample_mean_outer(s.u, s.u);
  Matrix svv = detail::sample_mean_outer(s.v, s.v);
  Matrix suv = detail::sample_mean_outer(s.u, s.v);
  for (int i = 0; i < s.d; ++i)
    for (int j = 0; j < s.d; ++j) {
      suu(i, j) -= mu[i] * mu[j];
      svv(i, j) -= mv[i] * mv[j];
      suv(i, j) -= mu[i] * mv[j];
    }
  Matrix l;
  Matrix svv_inv;
  try {
    l = cholesky(suu);
    svv_inv = inverse(svv);
  } catch (const std::runtime_error&) {
    throw std::runtime_error("jw_correlation: singular sample covariance");
  }
  Matrix c = matmul(suv, matmul(svv_inv, transpose(suv)));
  // similarity transform to a symmetric matrix with the same spectrum
  Matrix x = detail::trisolve_lower(l, c);
  Matrix b = detail::trisolve_lower(l, transpose(x));
  // symmetrize away round-off
  for (int i = 0; i < s.d; ++i)
    for (int j = 0; j < i; ++j) {
      double avg = 0.5 * (b(i, j) + b(j, i));
      b(i, j) = b(j, i) = avg;
    }
  double lambda = top_eigenvalue_sym(b);
  return std::sqrt(std::max(0.0, lambda));
}

struct MomEstimate {
  double rho_hat = 0.0;
  Matrix q_hat;
  Matrix rhoq_hat;
  double ortho_deviation = 0.0;  // ||Q_hat' Q_hat - I||_F; Q_hat is the raw
                                 // moment estimate, not projected
};

inline MomEstimate bs_mom_estimate(const PairSample& s) {
  if (s.size() < 2) throw std::domain_error("bs_mom_estimate: require n >= 2");
  const int d = s.d;
  Matrix m = detail::sample_mean_outer(s.u, s.v);
  double det = determinant(m);
  if (det == 0.0)
    throw std::runtime_error(
        "bs_mom_estimate: rank condition rank(sum U_j V_j') = d fails");
  MomEstimate e;
  e.rhoq_hat = m;
  for (double& v : e.rhoq_hat.a) v *= d;
  e.rho_hat = d * std::pow(std::fabs(det), 1.0 / d);
  e.q_hat = e.rhoq_hat;
  for (double& v : e.q_hat.a) v /= e.rho_hat;
  Matrix dev = matmul(transpose(e.q_hat), e.q_hat);
  for (int i = 0; i < d; ++i) dev(i, i) -= 1.0;
  e.ortho_deviation = frobenius_norm(dev);
  return e;
}

// optional nearest-orthogonal projection of the raw moment Q (iterated
// Newton orthonormalization); off the estimation path by default
inline Matrix project_orthogonal(Matrix q) {
  for (int it = 0; it < 100; ++it) {
    Matrix qtq = matmul(transpose(q), q);
    Matrix next(q.rows, q.cols);
    // q <- q (3 I - q'q) / 2
    Matrix corr = Matrix::identity(q.rows);
    for (double& v : corr.a) v *= 3.0;
    for (std::size_t k = 0; k < corr.a.size(); ++k) corr.a[k] -= qtq.a[k];
    next = matmul(q, corr);
    for (double& v : next.a) v *= 0.5;
    q = next;
    Matrix dev = matmul(transpose(q), q);
    for (std::size_t i = 0; i < q.rows; ++i) dev(i, i) -= 1.0;
    if (max_abs(dev) < 1e-14) break;
  }
  return q;
}

// asymptotic covariance of sqrt(n) vec(rho_hat Q_hat), column-stacked,
// entry (i,j) at position m = j*d + i (zero-based)
inline Matrix bs_mom_asymptotic_cov(const BSParams& p) {
  p.validate();
  const int d = p.d;
  const double r2 = p.rho * p.rho;
  Matrix sigma(d * d, d * d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) {
      int m = j * d + i;
      for (int l = 0; l < d; ++l)
        for (int k = 0; k < d; ++k) {
          int n = l * d + k;
          if (m == n) {
            sigma(m, n) = 1.0 + r2 * ((d - 2) * p.q(i, j) * p.q(i, j) - 2.0) /
                                    (d + 2.0);
          } else {
            sigma(m, n) = r2 *
                          (d * p.q(k, j) * p.q(i, l) -
                           2.0 * p.q(i, j) * p.q(k, l)) /
                          (d + 2.0);
          }
        }
    }
  return sigma;
}

struct MleRho {
  double rho = 0.0;
  bool boundary = false;
  double gradient = 0.0;  // score at the optimum
};

// profile likelihood for rho with Q known, Eq-style closed form:
// l(rho) = n log(1 - rho^2) - (d/2) sum log(1 - 2 rho x_j + rho^2)
inline MleRho bs_mle_rho(const PairSample& s, const Matrix& q) {
  if (s.size() < 1) throw std::domain_error("bs_mle_rho: empty sample");
  const int d = s.d;
  const double hi = 1.0 - 1e-9;
  std::vector<double> x(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) x[j] = dot(s.u[j], matvec(q, s.v[j]));

  auto loglik = [&](double r) {
    double ll = s.size() * std::log1p(-r * r);
    for (double xj : x) ll -= 0.5 * d * std::log(1.0 - 2.0 * r * xj + r * r);
    return ll;
  };
  auto grad = [&](double r) {
    double g = -2.0 * s.size() * r / (1.0 - r * r);
    for (double xj : x) g += d * (xj - r) / (1.0 - 2.0 * r * xj + r * r);
    return g;
  };

  MleRho best{0.0, true, grad(0.0)};
  double best_ll = loglik(0.0);
  double bll = loglik(hi);
  if (bll > best_ll) {
    best = {hi, true, grad(hi)};
    best_ll = bll;
  }
  // interior stationary points: scan for score sign changes
  const int grid = 128;
  double prev_r = 0.0, prev_g = grad(0.0);
  for (int k = 1; k <= grid; ++k) {
    double r = hi * k / grid;
    double g = grad(r);
    if (prev_g > 0.0 && g <= 0.0) {
      double root = find_root(grad, prev_r, r, 1e-14);
      double ll = loglik(root);
      if (ll > best_ll) {
        best = {root, false, grad(root)};
        best_ll = ll;
      }
    }
    prev_r = r;
    prev_g = g;
  }
  return best;
}

inline double t_density(double t, const BSParams& p) {
  p.validate();
  if (t < -1.0 || t > 1.0) throw std::domain_error("t_density: require |t| <= 1");
  return hprime_density(t, {p.rho, 0.5 * (p.d - 2)});
}

inline double t_cdf(double t, const BSParams& p) {
  return hprime_cdf(t, {p.rho, 0.5 * (p.d - 2)});
}

// pivotal quantity: (1 - (u'Qv)^2) / (1 - 2 rho u'Qv + rho^2),
// distributed Beta((d-1)/2, 1/2) at the true parameters
inline double pivotal_statistic(const Vec& u, const Vec& v, const BSParams& p) {
  double x = dot(u, matvec(p.q, v));
  return (1.0 - x * x) / (1.0 - 2.0 * p.rho * x + p.rho * p.rho);
}

inline KsResult pivotal_test(const PairSample& s, const BSParams& p) {
  p.validate();
  std::vector<double> t(s.size());
  for (std::size_t j = 0; j < s.size(); ++j)
    t[j] = pivotal_statistic(s.u[j], s.v[j], p);
  double a = 0.5 * (p.d - 1);
  return ks_test(t, [&](double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return reg_inc_beta(x, a, 0.5);
  });
}

// Monte Carlo mean of a harmonic f over conditional draws V | U = u,
// i.e. Exit_d(rho Q'u); Theorem-style check target is f(rho Q'u)
inline double harmonic_conditional_mean_check(
    const BSParams& p, const std::function<double(const Vec&)>& f, const Vec& u,
    std::size_t n, RngStream& rng) {
  p.validate();
  Vec eta = matvec(transpose(p.q), u);
  for (double& x : eta) x *= p.rho;
  ExitParams ep{eta};
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) sum += f(exit_sample(ep, rng));
  return sum / static_cast<double>(n);
}

}  // namespace bivexit
