#pragma once

// Test-side reference computations, written without the library's numerics.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "rsc/numkit.hpp"

namespace ref {

using Matrix = std::vector<std::vector<long double>>;

inline Matrix to_ld(const rsc::DenseMatrix& a) {
  Matrix m(a.rows(), std::vector<long double>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m[i][j] = a(i, j);
  return m;
}

// Plain double loop in extended precision.
inline std::vector<long double> matvec(const Matrix& a, const std::vector<long double>& x) {
  std::vector<long double> y(a.size(), 0.0L);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
  return y;
}

inline Matrix gram_rows(const Matrix& a) {
  const std::size_t m = a.size();
  Matrix g(m, std::vector<long double>(m, 0.0L));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < a[i].size(); ++k) g[i][j] += a[i][k] * a[j][k];
  return g;
}

// Solves the square system m x = r by Gaussian elimination with partial pivoting.
inline std::vector<long double> solve(Matrix m, std::vector<long double> r) {
  const std::size_t n = m.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::fabs(m[i][k]) > std::fabs(m[piv][k])) piv = i;
    std::swap(m[k], m[piv]);
    std::swap(r[k], r[piv]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const long double f = m[i][k] / m[k][k];
      for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
      r[i] -= f * r[k];
    }
  }
  std::vector<long double> x(n);
  for (std::size_t k = n; k-- > 0;) {
    long double s = r[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= m[k][j] * x[j];
    x[k] = s / m[k][k];
  }
  return x;
}

// Number of eigenvalues of symmetric s below lambda, from the inertia of s - lambda I
// (Gaussian elimination without pivoting, zero pivots nudged).
inline std::size_t count_below(const Matrix& s, long double lambda) {
  const std::size_t n = s.size();
  Matrix m = s;
  for (std::size_t i = 0; i < n; ++i) m[i][i] -= lambda;
  std::size_t negatives = 0;
  for (std::size_t k = 0; k < n; ++k) {
    long double p = m[k][k];
    if (p == 0.0L) p = 1e-30L;
    if (p < 0.0L) ++negatives;
    for (std::size_t i = k + 1; i < n; ++i) {
      const long double f = m[i][k] / p;
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] -= f * m[k][j];
    }
  }
  return negatives;
}

// All eigenvalues of a symmetric matrix by bisection on the inertia count, ascending.
inline std::vector<long double> eigenvalues(const Matrix& s) {
  const std::size_t n = s.size();
  long double bound = 0.0L;
  for (const auto& row : s) {
    long double r = 0.0L;
    for (long double v : row) r += std::fabs(v);
    bound = std::max(bound, r);
  }
  std::vector<long double> out;
  for (std::size_t idx = 0; idx < n; ++idx) {
    long double lo = -bound - 1.0L;
    long double hi = bound + 1.0L;
    for (int it = 0; it < 200; ++it) {
      const long double mid = 0.5L * (lo + hi);
      if (count_below(s, mid) > idx) hi = mid;
      else lo = mid;
    }
    out.push_back(0.5L * (lo + hi));
  }
  return out;
}

struct QuadConstants {
  double norm_sq;     // lambda_max(A A^T) = ||A||^2
  double lambda_min;  // lambda_min(A A^T)
};

inline QuadConstants quad_constants(const rsc::DenseMatrix& a) {
  const auto ev = eigenvalues(gram_rows(to_ld(a)));
  return {static_cast<double>(ev.back()), static_cast<double>(ev.front())};
}

// Nesterov's theta recursion in quad precision.
inline std::vector<__float128> theta_sequence_q(std::size_t count) {
  std::vector<__float128> t{1};
  for (std::size_t k = 1; k < count; ++k) {
    const __float128 p = t.back();
    // Positive root of t^2 = (1 - t) p^2, i.e. t = (sqrt(p^4 + 4p^2) - p^2) / 2.
    const __float128 p2 = p * p;
    __float128 disc = p2 * p2 + 4 * p2;
    // Newton iterations for the square root, seeded in double precision.
    __float128 r = std::sqrt(static_cast<double>(disc));
    for (int i = 0; i < 6; ++i) r = (r + disc / r) / 2;
    t.push_back((r - p2) / 2);
  }
  return t;
}

}  // namespace ref
