#pragma once

// Dense linear algebra, spectral quantities and counter-based random streams.
// Everything here is a pure function of its inputs.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rsc {

/// Real vector with finite entries.
class DenseVector {
 public:
  DenseVector() = default;
  explicit DenseVector(std::size_t n, double fill = 0.0);
  DenseVector(std::initializer_list<double> values);
  explicit DenseVector(std::vector<double> values);

  static DenseVector zeros(std::size_t n) { return DenseVector(n, 0.0); }
  static DenseVector ones(std::size_t n) { return DenseVector(n, 1.0); }

  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::span<double> span() { return data_; }
  std::span<const double> span() const { return data_; }
  const std::vector<double>& values() const { return data_; }

  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

  bool operator==(const DenseVector&) const = default;

 private:
  std::vector<double> data_;
};

/// Row-major real matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const double> d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(data_).subspan(i * cols_, cols_);
  }
  std::span<double> row(std::size_t i) { return std::span<double>(data_).subspan(i * cols_, cols_); }
  std::span<const double> entries() const { return data_; }

  DenseMatrix transposed() const;
  bool is_zero() const;
  double frobenius_norm() const;

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// ---- vector arithmetic -----------------------------------------------------

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm_inf(std::span<const double> a);
/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);
DenseVector add(const DenseVector& a, const DenseVector& b);
DenseVector subtract(const DenseVector& a, const DenseVector& b);
DenseVector scaled(const DenseVector& a, double s);
bool all_finite(std::span<const double> a);

/// sign(x) max(|x| - beta, 0)
inline double soft_threshold(double x, double beta) {
  return x > beta ? x - beta : (x < -beta ? x + beta : 0.0);
}

// ---- matrix products ---------------------------------------------------------

/// A x. Throws std::invalid_argument on dimension mismatch.
DenseVector matvec(const DenseMatrix& a, const DenseVector& x);
/// A^T y.
DenseVector matvec_transposed(const DenseMatrix& a, const DenseVector& y);
/// A B.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
/// A A^T, exactly symmetric.
DenseMatrix gram_rows(const DenseMatrix& a);
/// A^T A, exactly symmetric.
DenseMatrix gram_cols(const DenseMatrix& a);

// ---- spectral quantities -----------------------------------------------------

struct SpectralNormEstimate {
  double value = 0.0;  // lambda_max(A^T A) = ||A||^2
  bool converged = false;
  std::size_t iterations = 0;
};

/// ||A||_2^2 by power iteration on A^T A from the normalized all-ones vector.
SpectralNormEstimate spectral_norm_sq(const DenseMatrix& a, double rel_tol = 1e-10,
                                      std::size_t max_iters = 100000);

struct SymmetricEigen {
  std::vector<double> eigenvalues;  // ascending
  DenseMatrix eigenvectors;         // column i pairs with eigenvalues[i]
  std::size_t sweeps = 0;
};

/// Cyclic Jacobi. Rejects asymmetric input and dimension > 1024.
SymmetricEigen sym_eig(const DenseMatrix& s);

struct SpectralSummary {
  double lambda_max = 0.0;
  double lambda_min = 0.0;
  std::optional<double> lambda_min_pp;  // absent for the zero matrix
};

/// Eigenvalues below 1e-10 * lambda_max count as zero for lambda_min_pp.
SpectralSummary sym_eig_summary(const DenseMatrix& s);
SpectralSummary summarize(const std::vector<double>& ascending_eigenvalues);

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
class Cholesky {
 public:
  explicit Cholesky(const DenseMatrix& spd);
  DenseVector solve(const DenseVector& rhs) const;
  std::size_t dim() const { return factor_.rows(); }

 private:
  DenseMatrix factor_;
};

/// Minimum-norm solutions of A x = t for a fixed full-row-rank A.
class MinNormSolver {
 public:
  explicit MinNormSolver(DenseMatrix a);
  DenseVector solve(const DenseVector& t) const;
  const DenseMatrix& matrix() const { return a_; }
  const SpectralSummary& gram_spectrum() const { return spectrum_; }

 private:
  DenseMatrix a_;
  SpectralSummary spectrum_;
  Cholesky chol_;
};

/// Minimum-norm x with A x = t. Rejects rank-deficient A, reporting lambda_min(A A^T).
DenseVector least_squares_min_norm(const DenseMatrix& a, const DenseVector& t);

// ---- random streams ----------------------------------------------------------

/// Stateless 64-bit mix of (key, counter); the basis of every stream below.
std::uint64_t counter_hash(std::uint64_t key, std::uint64_t counter);

/// Per-trial stream derivation: stream i of `seed`.
constexpr std::uint64_t split_seed(std::uint64_t seed, std::uint64_t i) { return seed ^ i; }

/// Counter-based uniform stream. Substreams separate independent uses of one seed.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed, std::uint64_t substream = 0);
  std::uint64_t next_u64();
  /// Uniform in (0, 1].
  double next_open01();
  /// Uniform in [0, 1).
  double next();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Standard-normal stream via Box-Muller over a UniformStream.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed, std::uint64_t substream = 0);
  double next();

 private:
  UniformStream uniform_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

GaussianStream gaussian_stream(std::uint64_t seed);

DenseMatrix gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed);
DenseVector gaussian_vector(std::size_t n, std::uint64_t seed, std::uint64_t substream = 1);

// ---- CSV ---------------------------------------------------------------------

void write_csv(std::ostream& out, const DenseMatrix& a);
/// One entry per line.
void write_csv(std::ostream& out, const DenseVector& v);
DenseMatrix read_csv_matrix(std::istream& in);
DenseVector read_csv_vector(std::istream& in);

/// Shortest round-trip decimal for a double.
std::string format_double(double v);

}  // namespace rsc
