#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "rsc/numkit.hpp"
#include "rsc/oracles.hpp"
#include "rsc/solvers.hpp"

namespace rsc {

/// Elementwise soft-threshold sign(x) max(|x| - beta, 0).
DenseVector shrink(const DenseVector& x, double beta);

struct SparseProblem {
  DenseMatrix A;
  DenseVector b;
  DenseVector x_true;
  double alpha = 1.0;
  std::uint64_t seed = 0;
};

enum class SignalKind { gaussian, pm_one };
SignalKind parse_signal_kind(const std::string& text);
std::string to_string(SignalKind s);

/// Gaussian sensing matrix, uniform k-subset support, b = A x_true, alpha = 10 ||x_true||_inf.
SparseProblem gen_sparse_problem(std::uint64_t seed, std::size_t m, std::size_t n, std::size_t k,
                                 SignalKind signal);

struct LbregStep {
  DenseVector x_next;
  DenseVector y_next;
};

/// x <- alpha shrink_1(A^T y), y <- y + h (b - A x).
LbregStep lbreg_step(const SparseProblem& problem, const DenseVector& y, double h);

/// The negated dual objective of the problem.
ObjectiveOracle augl1_oracle(const SparseProblem& problem);

struct RecoveryResult {
  DenseVector x_final;
  std::optional<std::vector<double>> rel_error_curve;  // absent when x_true = 0
  std::vector<double> primal_residual_curve;
  std::vector<double> dual_objective_curve;  // negated dual f(y_k)
  std::vector<ResetEvent> reset_events;
  std::size_t iters = 0;
  SolverVariant variant = GradientDescent{};
  TerminalStatus status = TerminalStatus::max_iters;
  double stepsize_h = 0.0;
};

/// Runs the solver on the negated dual from y = 0 and maps each dual iterate y_k to the
/// primal point alpha shrink_1(A^T y_k). Stops once ||A x - b|| <= 1e-14 ||b||.
RecoveryResult recover(const SparseProblem& problem, const SolverVariant& variant,
                       std::optional<double> h, std::size_t max_iters);

/// Columns k,rel_error,primal_residual,reset_event with k = 1..iters.
void write_recovery_csv(std::ostream& out, const RecoveryResult& result);

}  // namespace rsc
