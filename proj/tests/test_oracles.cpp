#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "rsc/oracles.hpp"
#include "support.hpp"

using namespace rsc;

namespace {

std::vector<DenseVector> line_points(double lo, double hi, int n) {
  std::vector<DenseVector> out;
  for (int i = 0; i < n; ++i) out.push_back(DenseVector{lo + (hi - lo) * (i + 0.5) / n});
  return out;
}

}  // namespace

TEST_CASE("f3 evaluation and projection") {
  const ObjectiveOracle f3 = make_example_1d(Example1d::f3, 1.0);
  const Evaluation e = f3.eval(DenseVector{3});
  CHECK(e.value == 2.0);
  CHECK(e.gradient[0] == 2.0);
  CHECK(f3.project(DenseVector{3})[0] == 1.0);
  CHECK(f3.project(DenseVector{-0.5})[0] == -0.5);
  CHECK(f3.constants().nu == 1.0);
  CHECK_THROWS_AS(make_example_1d(Example1d::f3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(f3.eval(DenseVector{1, 2}), std::invalid_argument);
}

TEST_CASE("f1 and f2 constants and values") {
  const ObjectiveOracle f1 = make_example_1d(Example1d::f1);
  CHECK(*f1.constants().nu == doctest::Approx(2.0 / (4.0 - std::numbers::sqrt2)).epsilon(1e-15));
  CHECK(*f1.constants().nu == doctest::Approx(0.7735).epsilon(1e-4));
  CHECK_FALSE(f1.convex());
  CHECK(f1.eval(DenseVector{-3}).value == 0.0);
  CHECK(f1.project(DenseVector{2})[0] == 0.0);

  const ObjectiveOracle f2 = make_example_1d(Example1d::f2);
  CHECK(*f2.constants().nu == doctest::Approx(std::sqrt((std::numbers::sqrt2 - 1.0) / 2.0)));
  // Values join continuously at the knots.
  for (double knot : {std::numbers::sqrt2 / 2.0, 1.0}) {
    CHECK(f2.eval(DenseVector{knot - 1e-9}).value == doctest::Approx(f2.eval(DenseVector{knot + 1e-9}).value).epsilon(1e-7));
  }
  for (double knot : {1.0, 2.0 - std::numbers::sqrt2 / 2.0}) {
    CHECK(f1.eval(DenseVector{knot - 1e-9}).value == doctest::Approx(f1.eval(DenseVector{knot + 1e-9}).value).epsilon(1e-4));
  }
}

TEST_CASE("quadratic composite") {
  const ObjectiveOracle id = make_quadratic_composite(DenseMatrix::identity(3), DenseVector::zeros(3));
  const DenseVector x{1, -2, 3};
  CHECK(id.eval(x).value == doctest::Approx(7.0));
  CHECK(id.eval(x).gradient == x);
  CHECK(norm2(id.project(x).span()) < 1e-15);

  const ObjectiveOracle line = make_quadratic_composite(DenseMatrix{{1, 1}}, DenseVector{2});
  const DenseVector p = line.project(DenseVector{0, 0});
  CHECK(p[0] == doctest::Approx(1.0));
  CHECK(p[1] == doctest::Approx(1.0));

  const DenseMatrix a = gaussian_matrix(20, 50, 7);
  const ObjectiveOracle q = make_quadratic_composite(a, gaussian_vector(20, 7));
  const ref::QuadConstants c = ref::quad_constants(a);
  CHECK(*q.constants().L == doctest::Approx(c.norm_sq).epsilon(1e-8));
  CHECK(*q.constants().R == doctest::Approx(c.norm_sq).epsilon(1e-8));
  CHECK(*q.constants().nu == doctest::Approx(c.lambda_min).epsilon(1e-8));

  CHECK_THROWS_AS(make_quadratic_composite(DenseMatrix{{1, 1}, {1, 1}}, DenseVector{1, 1}), std::domain_error);
  CHECK_THROWS_AS(make_quadratic_composite(DenseMatrix{{1, 1}}, DenseVector{1, 1}), std::invalid_argument);
}

TEST_CASE("quadratic composite projection lands on the solution set orthogonally") {
  const DenseMatrix a = gaussian_matrix(8, 15, 21);
  const DenseVector b = gaussian_vector(8, 21);
  const ObjectiveOracle q = make_quadratic_composite(a, b);
  const DenseVector x = gaussian_vector(15, 99);
  const DenseVector p = q.project(x);
  CHECK(norm2(subtract(matvec(a, p), b).span()) < 1e-10);
  // x - p lies in the row space: d = A^T w with (A A^T) w = A d.
  const DenseVector d = subtract(x, p);
  const ref::Matrix al = ref::to_ld(a);
  const std::vector<long double> dl(d.begin(), d.end());
  const auto w = ref::solve(ref::gram_rows(al), ref::matvec(al, dl));
  for (std::size_t j = 0; j < 15; ++j) {
    long double back = 0.0L;
    for (std::size_t i = 0; i < 8; ++i) back += al[i][j] * w[i];
    CHECK(static_cast<double>(back) == doctest::Approx(d[j]).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("augmented l1 dual") {
  const DenseMatrix a = gaussian_matrix(4, 6, 1);
  const DenseVector b = gaussian_vector(4, 1);
  const ObjectiveOracle f = make_augl1_dual(a, b, 2.0);
  const Evaluation at0 = f.eval(DenseVector::zeros(4));
  CHECK(at0.value == 0.0);
  CHECK(at0.gradient == scaled(b, -1.0));
  CHECK_FALSE(f.has_project());
  CHECK_FALSE(f.f_star());
  CHECK(*f.constants().L == doctest::Approx(2.0 * ref::quad_constants(a).norm_sq).epsilon(1e-8));

  const ObjectiveOracle tiny = make_augl1_dual(DenseMatrix{{2}}, DenseVector{2}, 1.0);
  const Evaluation e = tiny.eval(DenseVector{1});
  CHECK(e.value == doctest::Approx(-1.5));
  CHECK(e.gradient[0] == doctest::Approx(0.0));

  // Flat shrink region: ||A^T y||_inf <= 1 leaves only the linear term.
  const DenseVector y = scaled(gaussian_vector(4, 5), 1e-3);
  const Evaluation flat = f.eval(y);
  CHECK(norm_inf(matvec_transposed(a, y).span()) <= 1.0);
  CHECK(flat.value == doctest::Approx(-dot(b.span(), y.span())));
  CHECK(flat.gradient == scaled(b, -1.0));

  CHECK_THROWS_AS(make_augl1_dual(a, b, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_augl1_dual(a, DenseVector::zeros(4), 1.0), std::invalid_argument);
}

TEST_CASE("composition constants") {
  const KnownConstants g{.R = std::nullopt, .L = 1.0, .nu = 1.0, .mu = std::nullopt};
  const KnownConstants id = compose_constants(g, DenseMatrix::identity(3), CompositionMode::surjective);
  CHECK(*id.L == doctest::Approx(1.0));
  CHECK(*id.nu == doctest::Approx(1.0));

  const double d[] = {2.0, 3.0};
  const KnownConstants diag = compose_constants(g, DenseMatrix::diagonal(d), CompositionMode::surjective);
  CHECK(*diag.L == doctest::Approx(9.0));
  CHECK(*diag.nu == doctest::Approx(4.0));

  const KnownConstants sc{.R = std::nullopt, .L = 1.0, .nu = std::nullopt, .mu = 1.0};
  const KnownConstants rank1 = compose_constants(sc, DenseMatrix{{1, 1}}, CompositionMode::strictly_convex);
  CHECK(*rank1.L == doctest::Approx(2.0));
  CHECK(*rank1.nu == doctest::Approx(2.0));

  CHECK_THROWS_AS(compose_constants(g, DenseMatrix{{1, 1}, {1, 1}}, CompositionMode::surjective), std::domain_error);
  CHECK_THROWS_AS(compose_constants(sc, DenseMatrix::identity(2), CompositionMode::surjective), std::invalid_argument);
}

TEST_CASE("finite-difference gradient checks") {
  const DenseMatrix a = gaussian_matrix(20, 50, 3);
  const ObjectiveOracle q = make_quadratic_composite(a, gaussian_vector(20, 3));
  std::vector<DenseVector> pts;
  for (std::uint64_t s = 0; s < 50; ++s) pts.push_back(gaussian_vector(50, 100 + s));
  CHECK(finite_diff_check(q, pts) < 1e-6);

  const ObjectiveOracle f3 = make_example_1d(Example1d::f3, 1.0);
  CHECK(finite_diff_check(f3, {DenseVector{5}}) < 1e-7);
  CHECK(finite_diff_check(f3, {DenseVector{0}}) < 1e-10);
  CHECK_THROWS_AS(finite_diff_check(f3, {DenseVector{1.0}}), std::invalid_argument);

  for (Example1d id : {Example1d::f1, Example1d::f2}) {
    const ObjectiveOracle f = make_example_1d(id);
    const auto safe = kink_free(f, line_points(-2.0, 5.0, 700));
    CHECK(safe.size() > 600);
    CHECK(finite_diff_check(f, safe) < 1e-6);
  }
}

TEST_CASE("kink_free drops points next to kinks") {
  const ObjectiveOracle f3 = make_example_1d(Example1d::f3, 2.0);
  const auto kept = kink_free(f3, {DenseVector{2.0}, DenseVector{2.0005}, DenseVector{2.5}, DenseVector{-1.9999}});
  REQUIRE(kept.size() == 1);
  CHECK(kept[0][0] == 2.5);
}
