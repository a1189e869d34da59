#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace bivexit {

using Vec = std::vector<double>;

// small dense row-major matrix; everything in this project is d x d
// with d in single digits, so no cleverness needed
struct Matrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), a(r * c, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
};

inline Matrix matmul(const Matrix& x, const Matrix& y) {
  if (x.cols != y.rows) throw std::domain_error("matmul: shape mismatch");
  Matrix z(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t k = 0; k < x.cols; ++k) {
      double v = x(i, k);
      if (v == 0.0) continue;
      for (std::size_t j = 0; j < y.cols; ++j) z(i, j) += v * y(k, j);
    }
  return z;
}

inline Matrix transpose(const Matrix& x) {
  Matrix z(x.cols, x.rows);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < x.cols; ++j) z(j, i) = x(i, j);
  return z;
}

inline Vec matvec(const Matrix& x, const Vec& v) {
  if (x.cols != v.size()) throw std::domain_error("matvec: shape mismatch");
  Vec out(x.rows, 0.0);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < x.cols; ++j) out[i] += x(i, j) * v[j];
  return out;
}

inline double dot(const Vec& x, const Vec& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double norm(const Vec& x) { return std::sqrt(dot(x, x)); }

inline double frobenius_norm(const Matrix& x) {
  double s = 0.0;
  for (double v : x.a) s += v * v;
  return std::sqrt(s);
}

inline double max_abs(const Matrix& x) {
  double m = 0.0;
  for (double v : x.a) m = std::max(m, std::fabs(v));
  return m;
}

namespace detail {

// LU with partial pivoting; returns permutation sign, factors in place
inline double lu_decompose(Matrix& m, std::vector<std::size_t>& perm) {
  const std::size_t n = m.rows;
  perm.resize(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  double sign = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::fabs(m(k, k));
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::fabs(m(i, k)) > best) {
        best = std::fabs(m(i, k));
        piv = i;
      }
    if (best == 0.0) return 0.0;  // singular; caller checks
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m.a[k * n + j], m.a[piv * n + j]);
      std::swap(perm[k], perm[piv]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      m(i, k) /= m(k, k);
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= m(i, k) * m(k, j);
    }
  }
  return sign;
}

}  // namespace detail

inline double determinant(const Matrix& x) {
  if (x.rows != x.cols) throw std::domain_error("determinant: not square");
  Matrix lu = x;
  std::vector<std::size_t> perm;
  double sign = detail::lu_decompose(lu, perm);
  if (sign == 0.0) return 0.0;
  double det = sign;
  for (std::size_t i = 0; i < lu.rows; ++i) det *= lu(i, i);
  return det;
}

inline Vec solve(const Matrix& x, const Vec& b) {
  if (x.rows != x.cols || x.rows != b.size())
    throw std::domain_error("solve: shape mismatch");
  const std::size_t n = x.rows;
  Matrix lu = x;
  std::vector<std::size_t> perm;
  if (detail::lu_decompose(lu, perm) == 0.0)
    throw std::runtime_error("solve: singular matrix");
  Vec y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[perm[i]];
    for (std::size_t j = 0; j < i; ++j) s -= lu(i, j) * y[j];
    y[i] = s;
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= lu(ii, j) * y[j];
    y[ii] = s / lu(ii, ii);
  }
  return y;
}

inline Matrix inverse(const Matrix& x) {
  const std::size_t n = x.rows;
  Matrix inv(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    Vec e(n, 0.0);
    e[j] = 1.0;
    Vec col = solve(x, e);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return inv;
}

// Cholesky factor L (lower) of a symmetric positive definite matrix
inline Matrix cholesky(const Matrix& x) {
  const std::size_t n = x.rows;
  Matrix l(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = x(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      if (i == j) {
        if (s <= 0.0) throw std::runtime_error("cholesky: not positive definite");
        l(i, i) = std::sqrt(s);
      } else {
        l(i, j) = s / l(j, j);
      }
    }
  }
  return l;
}

// largest eigenvalue of a symmetric matrix by shifted power iteration;
// Gershgorin shift makes the target the dominant one
inline double top_eigenvalue_sym(const Matrix& m) {
  if (m.rows != m.cols) throw std::domain_error("top_eigenvalue_sym: not square");
  const std::size_t n = m.rows;
  if (max_abs(m) == 0.0) return 0.0;
  double shift = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += std::fabs(m(i, j));
    shift = std::max(shift, row);
  }
  Vec v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.01 * (i + 1);
  double nv = norm(v);
  for (double& x : v) x /= nv;
  double lambda = 0.0, prev = 1e300;
  for (int it = 0; it < 100000; ++it) {
    Vec w = matvec(m, v);
    for (std::size_t i = 0; i < n; ++i) w[i] += shift * v[i];
    double nw = norm(w);
    if (nw == 0.0) return -shift;
    for (double& x : w) x /= nw;
    Vec mw = matvec(m, w);
    lambda = dot(w, mw);
    v = w;
    if (std::fabs(lambda - prev) <= 1e-12 * std::max(1.0, std::fabs(lambda)))
      break;
    prev = lambda;
  }
  return lambda;
}

}  // namespace bivexit
