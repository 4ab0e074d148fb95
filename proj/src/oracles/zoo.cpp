#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "rsc/oracles.hpp"

namespace rsc {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

struct Piece1d {
  double value;
  double slope;
};

// f1: minimizers (-inf, 0]; gradient unbounded as x -> 1.
Piece1d eval_f1(double x) {
  const double knot = 2.0 - kSqrt2 / 2.0;
  if (x <= 0.0) return {0.0, 0.0};
  if (x <= 1.0) {
    const double s = std::sqrt(1.0 - x * x);
    return {1.0 - s, x / s};
  }
  if (x <= knot) {
    const double d = x - 2.0;
    const double s = std::sqrt(1.0 - d * d);
    return {1.0 + s, -d / s};
  }
  const double u = x - 1.0 + kSqrt2 / 2.0;
  return {0.5 * u * u + (1.0 + kSqrt2) / 2.0, u};
}

// f2: minimizers (-inf, 0]; globally Lipschitz gradient.
Piece1d eval_f2(double x) {
  if (x <= 0.0) return {0.0, 0.0};
  if (x <= kSqrt2 / 2.0) {
    const double s = std::sqrt(1.0 - x * x);
    return {1.0 - s, x / s};
  }
  if (x <= 1.0) {
    const double d = x - kSqrt2;
    const double s = std::sqrt(1.0 - d * d);
    return {s - kSqrt2 + 1.0, -d / s};
  }
  const double c = std::sqrt((kSqrt2 - 1.0) / 2.0);
  const double u = x - 1.0 + c;
  return {0.5 * u * u + std::sqrt(2.0 * kSqrt2 - 2.0) + (5.0 - 5.0 * kSqrt2) / 4.0, u};
}

double distance_to_knots(double x, std::initializer_list<double> knots) {
  double d = std::numeric_limits<double>::infinity();
  for (double k : knots) d = std::min(d, std::abs(x - k));
  return d;
}

ObjectiveOracle::EvalFn scalar_eval(Piece1d (*fn)(double)) {
  return [fn](const DenseVector& x) {
    const Piece1d p = fn(x[0]);
    // Assigned rather than constructed: solvers detect a non-finite slope themselves.
    DenseVector g(1);
    g[0] = p.slope;
    return Evaluation{p.value, std::move(g)};
  };
}

}  // namespace

ObjectiveOracle make_example_1d(Example1d id, double beta) {
  ObjectiveOracle::Parts parts;
  parts.dim = 1;
  parts.f_star = 0.0;
  const auto clamp_nonpositive = [](const DenseVector& x) { return DenseVector{std::min(x[0], 0.0)}; };

  switch (id) {
    case Example1d::f1:
      parts.name = "f1";
      parts.eval = scalar_eval(&eval_f1);
      parts.project = clamp_nonpositive;
      parts.constants.nu = 2.0 / (4.0 - kSqrt2);
      parts.kink_distance = [](const DenseVector& x) {
        return distance_to_knots(x[0], {0.0, 1.0, 2.0 - kSqrt2 / 2.0});
      };
      parts.convex = false;
      break;
    case Example1d::f2:
      parts.name = "f2";
      parts.eval = scalar_eval(&eval_f2);
      parts.project = clamp_nonpositive;
      parts.constants.nu = std::sqrt((kSqrt2 - 1.0) / 2.0);
      parts.kink_distance = [](const DenseVector& x) {
        return distance_to_knots(x[0], {0.0, kSqrt2 / 2.0, 1.0});
      };
      parts.convex = false;
      break;
    case Example1d::f3:
      if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw std::invalid_argument("f3: beta must be positive, got " + format_double(beta));
      }
      parts.name = "f3:beta=" + format_double(beta);
      parts.eval = [beta](const DenseVector& x) {
        const double s = soft_threshold(x[0], beta);
        return Evaluation{0.5 * s * s, DenseVector{s}};
      };
      parts.project = [beta](const DenseVector& x) {
        return DenseVector{std::clamp(x[0], -beta, beta)};
      };
      // The gradient shrink_beta is nonexpansive, so 1 bounds both Lipschitz constants.
      parts.constants = KnownConstants{.R = 1.0, .L = 1.0, .nu = 1.0, .mu = std::nullopt};
      parts.kink_distance = [beta](const DenseVector& x) {
        return distance_to_knots(x[0], {-beta, beta});
      };
      break;
  }
  return ObjectiveOracle(std::move(parts));
}

ObjectiveOracle make_quadratic_composite(const DenseMatrix& a, const DenseVector& b) {
  if (a.rows() != b.size()) {
    throw std::invalid_argument("quadratic composite: A has " + std::to_string(a.rows()) +
                                " rows but b has " + std::to_string(b.size()) + " entries");
  }
  if (a.rows() > a.cols()) {
    throw std::invalid_argument("quadratic composite: needs m <= n for full row rank");
  }
  auto solver = std::make_shared<const MinNormSolver>(a);  // throws on rank deficiency
  const double norm_sq = spectral_norm_sq(a).value;

  ObjectiveOracle::Parts parts;
  parts.name = "quad:" + std::to_string(a.rows()) + "x" + std::to_string(a.cols());
  parts.dim = a.cols();
  parts.eval = [solver, b](const DenseVector& x) {
    const DenseMatrix& m = solver->matrix();
    DenseVector r = matvec(m, x);
    axpy(-1.0, b.span(), r.span());
    return Evaluation{0.5 * dot(r.span(), r.span()), matvec_transposed(m, r)};
  };
  parts.project = [solver, b](const DenseVector& x) {
    DenseVector t = b;
    axpy(-1.0, matvec(solver->matrix(), x).span(), t.span());
    return add(x, solver->solve(t));
  };
  parts.constants.R = norm_sq;
  parts.constants.L = norm_sq;
  parts.constants.nu = std::min(solver->gram_spectrum().lambda_min, norm_sq);
  parts.f_star = 0.0;
  return ObjectiveOracle(std::move(parts));
}

ObjectiveOracle make_augl1_dual(const DenseMatrix& a, const DenseVector& b, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("augl1 dual: alpha must be positive, got " + format_double(alpha));
  }
  if (a.rows() != b.size()) {
    throw std::invalid_argument("augl1 dual: A has " + std::to_string(a.rows()) +
                                " rows but b has " + std::to_string(b.size()) + " entries");
  }
  if (a.is_zero() || norm2(b.span()) == 0.0) {
    throw std::invalid_argument("augl1 dual: A and b must be nonzero");
  }

  // A^T stored row-major so that both A^T y and A s walk contiguous memory.
  auto at = std::make_shared<const DenseMatrix>(a.transposed());
  const double norm_sq = spectral_norm_sq(a).value;

  ObjectiveOracle::Parts parts;
  parts.name = "augl1:" + std::to_string(a.rows()) + "x" + std::to_string(a.cols());
  parts.dim = a.rows();
  parts.eval = [at, b, alpha](const DenseVector& y) {
    const std::size_t n = at->rows();
    DenseVector grad = scaled(b, -1.0);
    double value = -dot(b.span(), y.span());
    double shrunk_sq = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double s = soft_threshold(dot(at->row(j), y.span()), 1.0);
      if (s == 0.0) continue;
      shrunk_sq += s * s;
      axpy(alpha * s, at->row(j), grad.span());
    }
    value += 0.5 * alpha * shrunk_sq;
    return Evaluation{value, std::move(grad)};
  };
  parts.constants.L = alpha * norm_sq;
  parts.kink_distance = [at](const DenseVector& y) {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < at->rows(); ++j) {
      d = std::min(d, std::abs(std::abs(dot(at->row(j), y.span())) - 1.0));
    }
    return d;
  };
  return ObjectiveOracle(std::move(parts));
}

KnownConstants compose_constants(const KnownConstants& g, const DenseMatrix& a,
                                 CompositionMode mode) {
  if (!g.L) throw std::invalid_argument("compose_constants: g is missing L");
  if (a.is_zero()) throw std::invalid_argument("compose_constants: A must be nonzero");
  const double lipschitz = *g.L * spectral_norm_sq(a).value;

  KnownConstants out;
  out.L = lipschitz;
  out.R = lipschitz;
  if (mode == CompositionMode::surjective) {
    if (!g.nu) throw std::invalid_argument("compose_constants: g is missing nu");
    const SpectralSummary s = sym_eig_summary(gram_rows(a));
    if (!(s.lambda_min > 1e-12 * s.lambda_max)) {
      throw std::domain_error("compose_constants: A is not surjective, lambda_min(A A^T) = " +
                              format_double(s.lambda_min));
    }
    out.nu = *g.nu * s.lambda_min;
  } else {
    if (!g.mu) throw std::invalid_argument("compose_constants: g is missing mu");
    // lambda_min^{++} is shared by A^T A and A A^T; use the smaller Gram matrix.
    const DenseMatrix gram = a.rows() <= a.cols() ? gram_rows(a) : gram_cols(a);
    out.nu = *g.mu * *sym_eig_summary(gram).lambda_min_pp;
  }
  return out;
}

}  // namespace rsc
