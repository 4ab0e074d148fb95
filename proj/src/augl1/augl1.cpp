#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "rsc/augl1.hpp"

namespace rsc {

namespace {

constexpr double kResidualTol = 1e-14;
constexpr std::uint64_t kSupportStream = 2;
constexpr std::uint64_t kValueStream = 3;

DenseVector primal_of(const SparseProblem& p, const DenseVector& y) {
  DenseVector x = matvec_transposed(p.A, y);
  for (double& v : x) v = p.alpha * soft_threshold(v, 1.0);
  return x;
}

}  // namespace

DenseVector shrink(const DenseVector& x, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("shrink: beta must be positive");
  DenseVector out = x;
  for (double& v : out) v = soft_threshold(v, beta);
  return out;
}

SignalKind parse_signal_kind(const std::string& text) {
  if (text == "gaussian") return SignalKind::gaussian;
  if (text == "pm_one") return SignalKind::pm_one;
  throw std::invalid_argument("unknown signal '" + text + "' (expected gaussian or pm_one)");
}

std::string to_string(SignalKind s) { return s == SignalKind::gaussian ? "gaussian" : "pm_one"; }

SparseProblem gen_sparse_problem(std::uint64_t seed, std::size_t m, std::size_t n, std::size_t k,
                                 SignalKind signal) {
  if (m == 0 || m >= n) throw std::invalid_argument("gen_sparse_problem: needs 0 < m < n");
  if (k > n) throw std::invalid_argument("gen_sparse_problem: needs k <= n");

  SparseProblem p;
  p.seed = seed;
  p.A = gaussian_matrix(m, n, seed);

  // Partial Fisher-Yates: the first k entries form a uniform k-subset.
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  UniformStream pick(seed, kSupportStream);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(pick.below(n - i));
    std::swap(idx[i], idx[j]);
  }
  p.x_true = DenseVector::zeros(n);
  GaussianStream gauss(seed, kValueStream);
  UniformStream coin(seed, kValueStream);
  for (std::size_t i = 0; i < k; ++i) {
    p.x_true[idx[i]] = signal == SignalKind::gaussian ? gauss.next()
                                                      : (coin.next_u64() & 1u ? 1.0 : -1.0);
  }
  p.b = matvec(p.A, p.x_true);
  const double peak = norm_inf(p.x_true.span());
  p.alpha = peak > 0.0 ? 10.0 * peak : 1.0;
  return p;
}

LbregStep lbreg_step(const SparseProblem& problem, const DenseVector& y, double h) {
  if (y.size() != problem.A.rows()) {
    throw std::invalid_argument("lbreg_step: y has dimension " + std::to_string(y.size()) +
                                ", expected " + std::to_string(problem.A.rows()));
  }
  LbregStep s{primal_of(problem, y), y};
  DenseVector r = problem.b;
  axpy(-1.0, matvec(problem.A, s.x_next).span(), r.span());
  axpy(h, r.span(), s.y_next.span());
  return s;
}

ObjectiveOracle augl1_oracle(const SparseProblem& problem) {
  return make_augl1_dual(problem.A, problem.b, problem.alpha);
}

RecoveryResult recover(const SparseProblem& problem, const SolverVariant& variant,
                       std::optional<double> h, std::size_t max_iters) {
  if (std::holds_alternative<RestartFixed>(variant)) {
    throw std::invalid_argument("recover: variant must be gd, nesterov, restart or skip");
  }
  RecoveryResult res;
  res.variant = variant;
  const std::size_t n = problem.A.cols();
  const double b_norm = norm2(problem.b.span());
  if (b_norm == 0.0) {
    res.x_final = DenseVector::zeros(n);
    res.status = TerminalStatus::tol_reached;
    if (norm2(problem.x_true.span()) > 0.0) res.rel_error_curve.emplace();
    return res;
  }

  const ObjectiveOracle oracle = augl1_oracle(problem);
  SolverConfig cfg;
  cfg.variant = variant;
  cfg.stepsize_h = h ? *h : 1.0 / *oracle.constants().L;
  cfg.max_iters = max_iters;
  cfg.grad_tol = kResidualTol * b_norm;
  cfg.keep_iterates = false;
  res.stepsize_h = cfg.stepsize_h;

  const double x_true_norm = norm2(problem.x_true.span());
  if (x_true_norm > 0.0) res.rel_error_curve.emplace();
  const auto observe = [&](const TraceRecord& rec, const DenseVector& y) {
    DenseVector x = primal_of(problem, y);
    if (res.rel_error_curve) {
      res.rel_error_curve->push_back(norm2(subtract(x, problem.x_true).span()) / x_true_norm);
    }
    // The negated dual gradient at y_k is A x - b.
    res.primal_residual_curve.push_back(rec.grad_norm);
    res.dual_objective_curve.push_back(rec.f);
    res.reset_events.push_back(rec.reset_event);
    res.x_final = std::move(x);
  };
  const SolverTrace trace = solve(oracle, DenseVector::zeros(problem.A.rows()), cfg, observe);
  res.status = trace.status();
  res.iters = res.primal_residual_curve.size();
  return res;
}

void write_recovery_csv(std::ostream& out, const RecoveryResult& result) {
  out << "k,rel_error,primal_residual,reset_event\n";
  for (std::size_t i = 0; i < result.iters; ++i) {
    out << i + 1 << ',';
    if (result.rel_error_curve) out << format_double((*result.rel_error_curve)[i]);
    out << ',' << format_double(result.primal_residual_curve[i]) << ','
        << to_string(result.reset_events[i]) << '\n';
  }
}

}  // namespace rsc
