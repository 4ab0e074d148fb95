#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rsc/numkit.hpp"

namespace rsc {

/// Restricted/global constants an objective is known to satisfy.
struct KnownConstants {
  std::optional<double> R;   // restricted Lipschitz constant of the gradient
  std::optional<double> L;   // global Lipschitz constant of the gradient
  std::optional<double> nu;  // restricted secant inequality modulus
  std::optional<double> mu;  // strong convexity modulus (composition inputs only)

  /// Largest known gradient-Lipschitz bound usable as R: R if present, else L.
  std::optional<double> restricted_lipschitz() const { return R ? R : L; }
};

struct Evaluation {
  double value = 0.0;
  DenseVector gradient;
};

/// Differentiable objective with optional exact projection onto its minimizer set.
///
/// Oracles are immutable after construction and safe to evaluate concurrently.
class ObjectiveOracle {
 public:
  using EvalFn = std::function<Evaluation(const DenseVector&)>;
  using ProjectFn = std::function<DenseVector(const DenseVector&)>;
  /// Distance from x to the nearest point where the gradient is not differentiable.
  using KinkDistanceFn = std::function<double(const DenseVector&)>;

  struct Parts {
    std::string name;
    std::size_t dim = 0;
    EvalFn eval;
    ProjectFn project;  // empty when the minimizer set has no closed form
    KnownConstants constants;
    std::optional<double> f_star;
    KinkDistanceFn kink_distance;  // empty when the gradient is smooth everywhere
    bool convex = true;
  };

  explicit ObjectiveOracle(Parts parts);

  const std::string& name() const { return p_.name; }
  std::size_t dim() const { return p_.dim; }
  const KnownConstants& constants() const { return p_.constants; }
  const std::optional<double>& f_star() const { return p_.f_star; }
  bool convex() const { return p_.convex; }
  bool has_project() const { return static_cast<bool>(p_.project); }

  Evaluation eval(const DenseVector& x) const;
  /// Throws std::logic_error when the oracle has no projection.
  DenseVector project(const DenseVector& x) const;
  /// ||x - project(x)||, computed as the norm of the difference.
  double distance_to_solution(const DenseVector& x) const;
  double kink_distance(const DenseVector& x) const;

 private:
  void check_dim(const DenseVector& x, const char* what) const;
  Parts p_;
};

enum class Example1d { f1, f2, f3 };

/// The one-dimensional examples; beta is used only by f3 and must be positive.
ObjectiveOracle make_example_1d(Example1d id, double beta = 1.0);

/// f(x) = 1/2 ||A x - b||^2 for full-row-rank A.
ObjectiveOracle make_quadratic_composite(const DenseMatrix& a, const DenseVector& b);

/// Negated augmented-l1 dual, as a minimization oracle:
/// f(y) = -b^T y + (alpha/2) ||shrink_1(A^T y)||^2.
ObjectiveOracle make_augl1_dual(const DenseMatrix& a, const DenseVector& b, double alpha);

enum class CompositionMode { surjective, strictly_convex };

/// Constants of f(x) = g(A x) from those of g.
KnownConstants compose_constants(const KnownConstants& g, const DenseMatrix& a,
                                 CompositionMode mode);

/// Margin (in the oracle's kink metric) inside which finite differences are not trusted.
inline constexpr double kKinkMargin = 1e-3;

/// Worst relative error ||g_fd - g|| / max(||g||, 1e-12) over the points, with central
/// differences of step 1e-6 (1 + ||x||). Rejects points within kKinkMargin of a kink.
double finite_diff_check(const ObjectiveOracle& oracle, const std::vector<DenseVector>& points);

/// Points from `candidates` that keep kKinkMargin away from every kink.
std::vector<DenseVector> kink_free(const ObjectiveOracle& oracle,
                                   const std::vector<DenseVector>& candidates);

}  // namespace rsc
