#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rsc/numkit.hpp"
#include "rsc/oracles.hpp"

namespace rsc {

// ---- configuration -----------------------------------------------------------

struct GradientDescent {};
struct Nesterov {};
/// Accelerated method restarted every K iterations (theta reset to 1, anchor reset).
struct RestartFixed {
  std::size_t K = 1;
};
enum class ResetPolicy { restart, skip };
/// Accelerated method with the gradient-scheme trigger.
struct Adaptive {
  ResetPolicy policy = ResetPolicy::restart;
};

using SolverVariant = std::variant<GradientDescent, Nesterov, RestartFixed, Adaptive>;

std::string variant_name(const SolverVariant& v);
/// Accepts gd, nesterov, restart:<K>, restart, skip (the last two are adaptive).
SolverVariant parse_variant(const std::string& text);
bool is_accelerated(const SolverVariant& v);

struct SolverConfig {
  double stepsize_h = 1.0;
  std::size_t max_iters = 1000;
  double grad_tol = 0.0;  // stop when ||grad f(x_k)|| <= grad_tol
  SolverVariant variant = GradientDescent{};
  bool keep_iterates = true;  // false drops x from stored records (observers still see it)
};

// ---- traces ------------------------------------------------------------------

enum class ResetEvent { none, restart, skip };
enum class TerminalStatus { tol_reached, max_iters, diverged };

std::string to_string(ResetEvent e);
std::string to_string(TerminalStatus s);
ResetEvent parse_reset_event(const std::string& text);

struct TraceRecord {
  std::size_t k = 0;
  DenseVector x;  // empty when iterates are not kept
  double f = 0.0;
  double grad_norm = 0.0;
  std::optional<double> dist_to_sol;
  ResetEvent reset_event = ResetEvent::none;
  std::optional<double> theta;  // accelerated variants: theta_k in effect after record k
};

/// Immutable sequence of iteration records.
class SolverTrace {
 public:
  SolverTrace() = default;
  SolverTrace(std::vector<TraceRecord> records, TerminalStatus status, std::optional<double> f_star);

  std::span<const TraceRecord> records() const { return records_; }
  const TraceRecord& operator[](std::size_t i) const { return records_[i]; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const TraceRecord& back() const { return records_.back(); }
  TerminalStatus status() const { return status_; }
  const std::optional<double>& f_star() const { return f_star_; }

 private:
  std::vector<TraceRecord> records_;
  TerminalStatus status_ = TerminalStatus::max_iters;
  std::optional<double> f_star_;
};

/// Called once per record, after it is final; `x` is always the full iterate.
using IterationObserver = std::function<void(const TraceRecord& record, const DenseVector& x)>;

// ---- theta recursion -----------------------------------------------------------

struct ThetaState {
  double theta = 1.0;
  double beta = 0.0;
};

/// theta_{k+1} = 2 theta_k / (sqrt(theta_k^2 + 4) + theta_k),
/// beta_{k+1} = (1 - theta_k) theta_{k+1} / theta_k.
ThetaState theta_step(double theta_k);

// ---- solvers -------------------------------------------------------------------

SolverTrace gradient_descent(const ObjectiveOracle& oracle, const DenseVector& x0,
                             const SolverConfig& cfg, const IterationObserver& observe = {});
SolverTrace nesterov(const ObjectiveOracle& oracle, const DenseVector& x0, const SolverConfig& cfg,
                     const IterationObserver& observe = {});
SolverTrace nesterov_restart_fixed(const ObjectiveOracle& oracle, const DenseVector& x0,
                                   const SolverConfig& cfg, const IterationObserver& observe = {});
SolverTrace nesterov_adaptive(const ObjectiveOracle& oracle, const DenseVector& x0,
                              const SolverConfig& cfg, const IterationObserver& observe = {});

/// Dispatches on cfg.variant.
SolverTrace solve(const ObjectiveOracle& oracle, const DenseVector& x0, const SolverConfig& cfg,
                  const IterationObserver& observe = {});

// ---- trace CSV -------------------------------------------------------------------

/// Header k,f,fgap,grad_norm,dist_to_sol,reset_event. Blank fgap without f*, blank
/// dist_to_sol without a projection.
void write_trace_csv(std::ostream& out, const SolverTrace& trace);
/// Reads the columns written above; iterates are not stored in the file.
SolverTrace read_trace_csv(std::istream& in);

}  // namespace rsc
