#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rsc/numkit.hpp"

namespace rsc {

namespace {

void require_finite(std::span<const double> v, const char* what) {
  if (!all_finite(v)) {
    throw std::invalid_argument(std::string(what) + ": non-finite entry");
  }
}

std::string dims(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

}  // namespace

DenseVector::DenseVector(std::size_t n, double fill) : data_(n, fill) {
  require_finite(data_, "DenseVector");
}

DenseVector::DenseVector(std::initializer_list<double> values) : data_(values) {
  require_finite(data_, "DenseVector");
}

DenseVector::DenseVector(std::vector<double> values) : data_(std::move(values)) {
  require_finite(data_, "DenseVector");
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  require_finite(data_, "DenseMatrix");
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw std::invalid_argument("DenseMatrix: " + dims(rows, cols) + " needs " +
                                std::to_string(rows * cols) + " entries, got " +
                                std::to_string(data_.size()));
  }
  require_finite(data_, "DenseMatrix");
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("DenseMatrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
  require_finite(data_, "DenseMatrix");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> d) {
  DenseMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  require_finite(m.entries(), "DenseMatrix::diagonal");
  return m;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool DenseMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return v == 0.0; });
}

double DenseMatrix::frobenius_norm() const { return norm2(data_); }

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("dot: sizes " + std::to_string(a.size()) + " and " +
                                std::to_string(b.size()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) {
  // Scaled accumulation so tiny residuals near convergence do not underflow.
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (double v : a) {
    const double t = v / scale;
    s += t * t;
  }
  return scale * std::sqrt(s);
}

double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("axpy: size mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

DenseVector add(const DenseVector& a, const DenseVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("add: size mismatch");
  DenseVector out = a;
  axpy(1.0, b.span(), out.span());
  return out;
}

DenseVector subtract(const DenseVector& a, const DenseVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("subtract: size mismatch");
  DenseVector out = a;
  axpy(-1.0, b.span(), out.span());
  return out;
}

DenseVector scaled(const DenseVector& a, double s) {
  DenseVector out = a;
  for (double& v : out) v *= s;
  return out;
}

bool all_finite(std::span<const double> a) {
  return std::all_of(a.begin(), a.end(), [](double v) { return std::isfinite(v); });
}

DenseVector matvec(const DenseMatrix& a, const DenseVector& x) {
  if (a.cols() != x.size()) {
    throw std::invalid_argument("matvec: matrix is " + dims(a.rows(), a.cols()) +
                                " but vector has " + std::to_string(x.size()) + " entries");
  }
  DenseVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) out[i] = dot(a.row(i), x.span());
  return out;
}

DenseVector matvec_transposed(const DenseMatrix& a, const DenseVector& y) {
  if (a.rows() != y.size()) {
    throw std::invalid_argument("matvec_transposed: matrix is " + dims(a.rows(), a.cols()) +
                                " but vector has " + std::to_string(y.size()) + " entries");
  }
  DenseVector out(a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (y[i] != 0.0) axpy(y[i], a.row(i), out.span());
  }
  return out;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("matmul: " + dims(a.rows(), a.cols()) + " times " +
                                dims(b.rows(), b.cols()));
  }
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik != 0.0) axpy(aik, b.row(k), c.row(i));
    }
  return c;
}

DenseMatrix gram_rows(const DenseMatrix& a) {
  const std::size_t m = a.rows();
  DenseMatrix g(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      const double v = dot(a.row(i), a.row(j));
      g(i, j) = v;
      g(j, i) = v;
    }
  return g;
}

DenseMatrix gram_cols(const DenseMatrix& a) { return gram_rows(a.transposed()); }

SpectralNormEstimate spectral_norm_sq(const DenseMatrix& a, double rel_tol, std::size_t max_iters) {
  if (a.rows() == 0 || a.cols() == 0 || a.is_zero()) {
    throw std::invalid_argument("spectral_norm_sq: matrix must be nonzero");
  }
  SpectralNormEstimate est;
  DenseVector v = DenseVector::ones(a.cols());
  v = scaled(v, 1.0 / norm2(v.span()));
  double lambda = 0.0;
  for (std::size_t it = 1; it <= max_iters; ++it) {
    DenseVector w = matvec_transposed(a, matvec(a, v));
    const double next = dot(v.span(), w.span());  // Rayleigh quotient, ||v|| = 1
    const double wn = norm2(w.span());
    est.iterations = it;
    if (wn == 0.0) {
      // Start vector in the null space of A; restart from a deterministic perturbation.
      for (std::size_t j = 0; j < v.size(); ++j) v[j] = 1.0 + static_cast<double>(j);
      v = scaled(v, 1.0 / norm2(v.span()));
      continue;
    }
    const bool settled = std::abs(next - lambda) <= rel_tol * std::abs(next);
    lambda = std::max(lambda, next);
    v = scaled(w, 1.0 / wn);
    if (settled) {
      est.converged = true;
      break;
    }
  }
  est.value = lambda;
  return est;
}

Cholesky::Cholesky(const DenseMatrix& spd) : factor_(spd.rows(), spd.cols()) {
  const std::size_t n = spd.rows();
  if (spd.cols() != n) throw std::invalid_argument("Cholesky: matrix must be square");
  for (std::size_t j = 0; j < n; ++j) {
    double d = spd(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= factor_(j, k) * factor_(j, k);
    if (!(d > 0.0)) {
      throw std::domain_error("Cholesky: matrix not positive definite at pivot " +
                              std::to_string(j));
    }
    const double ljj = std::sqrt(d);
    factor_(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = spd(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= factor_(i, k) * factor_(j, k);
      factor_(i, j) = s / ljj;
    }
  }
}

DenseVector Cholesky::solve(const DenseVector& rhs) const {
  const std::size_t n = dim();
  if (rhs.size() != n) throw std::invalid_argument("Cholesky::solve: size mismatch");
  std::vector<double> z(rhs.begin(), rhs.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) z[i] -= factor_(i, k) * z[k];
    z[i] /= factor_(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) z[i] -= factor_(k, i) * z[k];
    z[i] /= factor_(i, i);
  }
  return DenseVector(std::move(z));
}

namespace {

SpectralSummary checked_row_spectrum(const DenseMatrix& a) {
  if (a.rows() == 0 || a.is_zero()) throw std::invalid_argument("matrix must be nonzero");
  SpectralSummary s = sym_eig_summary(gram_rows(a));
  if (!(s.lambda_min > 1e-12 * s.lambda_max)) {
    std::ostringstream msg;
    msg << "matrix " << dims(a.rows(), a.cols())
        << " is not of full row rank: lambda_min(A A^T) = " << s.lambda_min
        << ", lambda_max = " << s.lambda_max;
    throw std::domain_error(msg.str());
  }
  return s;
}

}  // namespace

MinNormSolver::MinNormSolver(DenseMatrix a)
    : a_(std::move(a)), spectrum_(checked_row_spectrum(a_)), chol_(gram_rows(a_)) {}

DenseVector MinNormSolver::solve(const DenseVector& t) const {
  if (t.size() != a_.rows()) {
    throw std::invalid_argument("least_squares_min_norm: matrix is " + dims(a_.rows(), a_.cols()) +
                                " but right-hand side has " + std::to_string(t.size()) +
                                " entries");
  }
  DenseVector x = matvec_transposed(a_, chol_.solve(t));
  // One refinement step; the correction stays in Range(A^T).
  const DenseVector residual = subtract(t, matvec(a_, x));
  axpy(1.0, matvec_transposed(a_, chol_.solve(residual)).span(), x.span());
  return x;
}

DenseVector least_squares_min_norm(const DenseMatrix& a, const DenseVector& t) {
  return MinNormSolver(a).solve(t);
}

}  // namespace rsc
