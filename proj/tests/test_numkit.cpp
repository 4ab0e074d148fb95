#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "rsc/numkit.hpp"
#include "support.hpp"

using namespace rsc;

TEST_CASE("matvec on small hand cases") {
  CHECK(matvec(DenseMatrix::identity(2), DenseVector{3, 4}) == DenseVector{3, 4});
  CHECK(matvec(DenseMatrix{{1, 1}}, DenseVector{2, 5}) == DenseVector{7});
  CHECK_THROWS_AS(matvec(DenseMatrix{{1, 1}}, DenseVector{1}), std::invalid_argument);
}

TEST_CASE("matvec agrees with extended-precision loop") {
  const DenseMatrix a = gaussian_matrix(5, 10, 42);
  const DenseVector y = matvec(a, DenseVector::ones(10));
  const auto ref_y = ref::matvec(ref::to_ld(a), std::vector<long double>(10, 1.0L));
  for (std::size_t i = 0; i < 5; ++i) CHECK(y[i] == doctest::Approx(static_cast<double>(ref_y[i])).epsilon(1e-14));
}

TEST_CASE("transposed product and Gram matrices") {
  const DenseMatrix a = gaussian_matrix(4, 7, 3);
  const DenseVector y = gaussian_vector(4, 3);
  const DenseVector t = matvec_transposed(a, y);
  const DenseVector t2 = matvec(a.transposed(), y);
  for (std::size_t j = 0; j < 7; ++j) CHECK(t[j] == doctest::Approx(t2[j]).epsilon(1e-14));
  const DenseMatrix g = gram_rows(a);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(g(i, j) == g(j, i));
  const DenseMatrix g2 = matmul(a, a.transposed());
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(g(i, j) == doctest::Approx(g2(i, j)).epsilon(1e-13));
}

TEST_CASE("non-finite entries are rejected at construction") {
  CHECK_THROWS_AS(DenseVector({1.0, NAN}), std::invalid_argument);
  CHECK_THROWS_AS(DenseMatrix(1, 1, INFINITY), std::invalid_argument);
}

TEST_CASE("spectral norm squared") {
  CHECK(spectral_norm_sq(DenseMatrix::identity(3)).value == doctest::Approx(1.0).epsilon(1e-14));
  const double d[] = {3.0, 4.0};
  CHECK(spectral_norm_sq(DenseMatrix::diagonal(d)).value == doctest::Approx(16.0).epsilon(1e-10));
  CHECK_THROWS_AS(spectral_norm_sq(DenseMatrix(2, 2)), std::invalid_argument);

  const DenseMatrix a = gaussian_matrix(20, 50, 9);
  const SpectralNormEstimate est = spectral_norm_sq(a);
  CHECK(est.converged);
  const double jacobi = sym_eig(gram_cols(a)).eigenvalues.back();
  CHECK(std::abs(est.value - jacobi) <= 1e-8 * jacobi);
  const double bisect = ref::quad_constants(a).norm_sq;
  CHECK(std::abs(est.value - bisect) <= 1e-8 * bisect);
}

TEST_CASE("Jacobi eigenvalues") {
  const double d[] = {0.0, 2.0, 5.0};
  const SpectralSummary s = sym_eig_summary(DenseMatrix::diagonal(d));
  CHECK(s.lambda_max == 5.0);
  CHECK(s.lambda_min == 0.0);
  REQUIRE(s.lambda_min_pp);
  CHECK(*s.lambda_min_pp == 2.0);

  const SpectralSummary id = sym_eig_summary(DenseMatrix::identity(4));
  CHECK(id.lambda_max == 1.0);
  CHECK(id.lambda_min == 1.0);
  CHECK(*id.lambda_min_pp == 1.0);

  CHECK_FALSE(sym_eig_summary(DenseMatrix(3, 3)).lambda_min_pp);
  CHECK_THROWS_AS(sym_eig(DenseMatrix{{1, 2}, {0, 1}}), std::invalid_argument);
}

TEST_CASE("Jacobi matches bisection on the characteristic polynomial") {
  const DenseMatrix a = gaussian_matrix(5, 10, 17);
  const SymmetricEigen e = sym_eig(gram_rows(a));
  const auto ref_ev = ref::eigenvalues(ref::gram_rows(ref::to_ld(a)));
  REQUIRE(e.eigenvalues.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(e.eigenvalues[i] == doctest::Approx(static_cast<double>(ref_ev[i])).epsilon(1e-10));
  }
}

TEST_CASE("Jacobi eigenvectors reconstruct the matrix") {
  const DenseMatrix s = gram_rows(gaussian_matrix(6, 6, 4));
  const SymmetricEigen e = sym_eig(s);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 6; ++j) {
      double v = 0.0;
      for (std::size_t k = 0; k < 6; ++k) v += e.eigenvectors(i, k) * e.eigenvalues[k] * e.eigenvectors(j, k);
      CHECK(v == doctest::Approx(s(i, j)).epsilon(1e-10).scale(s.frobenius_norm()));
    }
  }
}

TEST_CASE("minimum-norm solutions") {
  CHECK(least_squares_min_norm(DenseMatrix::identity(3), DenseVector{1, 2, 3}) == DenseVector{1, 2, 3});
  const DenseVector x = least_squares_min_norm(DenseMatrix{{1, 1}}, DenseVector{2});
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(1.0));

  const DenseMatrix a = gaussian_matrix(5, 10, 5);
  const DenseVector t = matvec(a, DenseVector::ones(10));
  const DenseVector sol = least_squares_min_norm(a, t);
  CHECK(norm2(subtract(matvec(a, sol), t).span()) < 1e-10);
  CHECK(norm2(sol.span()) <= norm2(DenseVector::ones(10).span()));

  CHECK_THROWS_AS(least_squares_min_norm(DenseMatrix{{1, 1}, {2, 2}}, DenseVector{1, 2}), std::domain_error);
}

TEST_CASE("Cholesky rejects indefinite input") {
  CHECK_THROWS_AS(Cholesky(DenseMatrix{{1, 2}, {2, 1}}), std::domain_error);
  const Cholesky c(DenseMatrix{{4, 2}, {2, 3}});
  const DenseVector x = c.solve(DenseVector{2, 1});
  CHECK(4 * x[0] + 2 * x[1] == doctest::Approx(2.0));
  CHECK(2 * x[0] + 3 * x[1] == doctest::Approx(1.0));
}

TEST_CASE("gaussian stream is deterministic") {
  GaussianStream a(123);
  GaussianStream b(123);
  for (int i = 0; i < 1000; ++i) CHECK(a.next() == b.next());
  CHECK(gaussian_matrix(3, 4, 8) == gaussian_matrix(3, 4, 8));
  CHECK_FALSE(gaussian_matrix(3, 4, 8) == gaussian_matrix(3, 4, 9));
}

TEST_CASE("gaussian stream moments") {
  GaussianStream g(2024);
  const int n = 1000000;
  double sum = 0.0;
  double sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = g.next();
    sum += v;
    sq += v * v;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.01);
  CHECK(var > 0.99);
  CHECK(var < 1.01);
}

TEST_CASE("uniform stream bounds") {
  UniformStream u(7);
  for (int i = 0; i < 10000; ++i) {
    const double v = u.next();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
    CHECK(u.below(5) < 5);
  }
}

TEST_CASE("CSV round trip is exact") {
  const DenseMatrix a = gaussian_matrix(3, 4, 11);
  std::stringstream s;
  write_csv(s, a);
  CHECK(read_csv_matrix(s) == a);
  const DenseVector v = gaussian_vector(6, 11);
  std::stringstream t;
  write_csv(t, v);
  CHECK(read_csv_vector(t) == v);
  std::stringstream bad("1,2\n3\n");
  CHECK_THROWS_AS(read_csv_matrix(bad), std::invalid_argument);
}
