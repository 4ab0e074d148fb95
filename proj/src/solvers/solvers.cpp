#include <cmath>
#include <stdexcept>

#include "rsc/solvers.hpp"

namespace rsc {

namespace {

// Abort once f exceeds f(x0) by this multiple of the initial gap.
constexpr double kDivergenceFactor = 1e6;

void check_common(const ObjectiveOracle& oracle, const DenseVector& x0, const SolverConfig& cfg) {
  if (x0.size() != oracle.dim()) {
    throw std::invalid_argument("solver: x0 has dimension " + std::to_string(x0.size()) +
                                " but " + oracle.name() + " expects " +
                                std::to_string(oracle.dim()));
  }
  if (!(cfg.stepsize_h > 0.0) || !std::isfinite(cfg.stepsize_h)) {
    throw std::invalid_argument("solver: stepsize h must be positive, got " +
                                format_double(cfg.stepsize_h));
  }
  if (cfg.max_iters < 1) throw std::invalid_argument("solver: max_iters must be at least 1");
  if (!(cfg.grad_tol >= 0.0)) throw std::invalid_argument("solver: grad_tol must be >= 0");
}

enum class Push { proceed, tol_reached, diverged };

class TraceBuilder {
 public:
  TraceBuilder(const ObjectiveOracle& oracle, const SolverConfig& cfg,
               const IterationObserver& observe)
      : oracle_(oracle), cfg_(cfg), observe_(observe) {}

  Push push(std::size_t k, const DenseVector& x, const Evaluation& ev, ResetEvent event,
            std::optional<double> theta) {
    if (!std::isfinite(ev.value) || !all_finite(ev.gradient.span()) || !all_finite(x.span())) {
      return Push::diverged;
    }
    if (records_.empty()) {
      const double gap = oracle_.f_star() ? ev.value - *oracle_.f_star() : 0.0;
      const double scale = gap > 0.0 ? gap : std::max(std::abs(ev.value), 1.0);
      ceiling_ = ev.value + kDivergenceFactor * scale;
    } else if (ev.value > ceiling_) {
      return Push::diverged;
    }
    TraceRecord rec;
    rec.k = k;
    rec.f = ev.value;
    rec.grad_norm = norm2(ev.gradient.span());
    if (oracle_.has_project()) rec.dist_to_sol = oracle_.distance_to_solution(x);
    rec.reset_event = event;
    rec.theta = theta;
    if (cfg_.keep_iterates) rec.x = x;
    if (observe_) observe_(rec, x);
    const bool done = rec.grad_norm <= cfg_.grad_tol;
    records_.push_back(std::move(rec));
    return done ? Push::tol_reached : Push::proceed;
  }

  SolverTrace finish(TerminalStatus status) {
    return SolverTrace(std::move(records_), status, oracle_.f_star());
  }

 private:
  const ObjectiveOracle& oracle_;
  const SolverConfig& cfg_;
  const IterationObserver& observe_;
  std::vector<TraceRecord> records_;
  double ceiling_ = 0.0;
};

TerminalStatus status_of(Push p) {
  return p == Push::tol_reached ? TerminalStatus::tol_reached : TerminalStatus::diverged;
}

// x <- y - h g
DenseVector gradient_step(const DenseVector& y, const DenseVector& g, double h) {
  DenseVector x = y;
  axpy(-h, g.span(), x.span());
  return x;
}

struct AcceleratedMode {
  std::size_t restart_every = 0;  // 0: no fixed restarts
  std::optional<ResetPolicy> adaptive;
};

SolverTrace run_accelerated(const ObjectiveOracle& oracle, const DenseVector& x0,
                            const SolverConfig& cfg, const IterationObserver& observe,
                            AcceleratedMode mode) {
  check_common(oracle, x0, cfg);
  TraceBuilder trace(oracle, cfg, observe);
  const double h = cfg.stepsize_h;

  double theta = 1.0;
  Evaluation at_x = oracle.eval(x0);
  if (Push p = trace.push(0, x0, at_x, ResetEvent::none, theta); p != Push::proceed) {
    return trace.finish(status_of(p));
  }
  DenseVector x_prev = x0;
  DenseVector y = x0;
  Evaluation at_y = at_x;

  for (std::size_t k = 0; k < cfg.max_iters; ++k) {
    DenseVector x_next = gradient_step(y, at_y.gradient, h);

    ResetEvent event = ResetEvent::none;
    double theta_k = theta;
    bool zero_beta = false;
    if (mode.adaptive) {
      // Momentum pointing uphill: <grad f(y_k), x_{k+1} - x_k> > 0.
      double uphill = 0.0;
      for (std::size_t i = 0; i < x_next.size(); ++i) {
        uphill += at_y.gradient[i] * (x_next[i] - x_prev[i]);
      }
      if (uphill > 0.0) {
        zero_beta = true;
        if (*mode.adaptive == ResetPolicy::restart) {
          theta_k = 1.0;
          event = ResetEvent::restart;
        } else {
          event = ResetEvent::skip;
        }
      }
    }

    const ThetaState next = theta_step(theta_k);
    const double beta = zero_beta ? 0.0 : next.beta;
    theta = next.theta;

    bool y_is_x = beta == 0.0;
    if (y_is_x) {
      y = x_next;
    } else {
      y = x_next;
      for (std::size_t i = 0; i < y.size(); ++i) y[i] += beta * (x_next[i] - x_prev[i]);
    }

    at_x = oracle.eval(x_next);
    if (mode.restart_every != 0 && (k + 1) % mode.restart_every == 0 && k + 1 < cfg.max_iters) {
      theta = 1.0;
      y = x_next;
      y_is_x = true;
      event = ResetEvent::restart;
    }

    const Push p = trace.push(k + 1, x_next, at_x, event, theta);
    if (p != Push::proceed) return trace.finish(status_of(p));

    x_prev = std::move(x_next);
    at_y = y_is_x ? at_x : oracle.eval(y);
  }
  return trace.finish(TerminalStatus::max_iters);
}

template <class T>
void require_variant(const SolverConfig& cfg, const char* fn) {
  if (!std::holds_alternative<T>(cfg.variant)) {
    throw std::invalid_argument(std::string(fn) + ": config variant is " +
                                variant_name(cfg.variant));
  }
}

}  // namespace

SolverTrace::SolverTrace(std::vector<TraceRecord> records, TerminalStatus status,
                         std::optional<double> f_star)
    : records_(std::move(records)), status_(status), f_star_(f_star) {
  for (std::size_t i = 1; i < records_.size(); ++i) {
    if (records_[i].k <= records_[i - 1].k) {
      throw std::invalid_argument("SolverTrace: iteration counters must increase strictly");
    }
  }
}

SolverTrace gradient_descent(const ObjectiveOracle& oracle, const DenseVector& x0,
                             const SolverConfig& cfg, const IterationObserver& observe) {
  require_variant<GradientDescent>(cfg, "gradient_descent");
  check_common(oracle, x0, cfg);
  TraceBuilder trace(oracle, cfg, observe);

  DenseVector x = x0;
  Evaluation ev = oracle.eval(x);
  if (Push p = trace.push(0, x, ev, ResetEvent::none, std::nullopt); p != Push::proceed) {
    return trace.finish(status_of(p));
  }
  for (std::size_t k = 1; k <= cfg.max_iters; ++k) {
    x = gradient_step(x, ev.gradient, cfg.stepsize_h);
    ev = oracle.eval(x);
    if (Push p = trace.push(k, x, ev, ResetEvent::none, std::nullopt); p != Push::proceed) {
      return trace.finish(status_of(p));
    }
  }
  return trace.finish(TerminalStatus::max_iters);
}

SolverTrace nesterov(const ObjectiveOracle& oracle, const DenseVector& x0, const SolverConfig& cfg,
                     const IterationObserver& observe) {
  require_variant<Nesterov>(cfg, "nesterov");
  return run_accelerated(oracle, x0, cfg, observe, {});
}

SolverTrace nesterov_restart_fixed(const ObjectiveOracle& oracle, const DenseVector& x0,
                                   const SolverConfig& cfg, const IterationObserver& observe) {
  require_variant<RestartFixed>(cfg, "nesterov_restart_fixed");
  const std::size_t K = std::get<RestartFixed>(cfg.variant).K;
  if (K < 1) throw std::invalid_argument("nesterov_restart_fixed: K must be at least 1");
  return run_accelerated(oracle, x0, cfg, observe, AcceleratedMode{K, std::nullopt});
}

SolverTrace nesterov_adaptive(const ObjectiveOracle& oracle, const DenseVector& x0,
                              const SolverConfig& cfg, const IterationObserver& observe) {
  require_variant<Adaptive>(cfg, "nesterov_adaptive");
  return run_accelerated(oracle, x0, cfg, observe,
                         AcceleratedMode{0, std::get<Adaptive>(cfg.variant).policy});
}

SolverTrace solve(const ObjectiveOracle& oracle, const DenseVector& x0, const SolverConfig& cfg,
                  const IterationObserver& observe) {
  return std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GradientDescent>) {
          return gradient_descent(oracle, x0, cfg, observe);
        } else if constexpr (std::is_same_v<T, Nesterov>) {
          return nesterov(oracle, x0, cfg, observe);
        } else if constexpr (std::is_same_v<T, RestartFixed>) {
          return nesterov_restart_fixed(oracle, x0, cfg, observe);
        } else {
          return nesterov_adaptive(oracle, x0, cfg, observe);
        }
      },
      cfg.variant);
}

std::string variant_name(const SolverVariant& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, GradientDescent>) return "gd";
        else if constexpr (std::is_same_v<T, Nesterov>) return "nesterov";
        else if constexpr (std::is_same_v<T, RestartFixed>) return "restart:" + std::to_string(x.K);
        else return x.policy == ResetPolicy::restart ? "restart" : "skip";
      },
      v);
}

SolverVariant parse_variant(const std::string& text) {
  if (text == "gd") return GradientDescent{};
  if (text == "nesterov") return Nesterov{};
  if (text == "restart" || text == "adaptive-restart") return Adaptive{ResetPolicy::restart};
  if (text == "skip" || text == "adaptive-skip") return Adaptive{ResetPolicy::skip};
  if (text.rfind("restart:", 0) == 0) {
    const std::string k = text.substr(8);
    std::size_t used = 0;
    long long K = -1;
    try {
      K = std::stoll(k, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != k.size() || K < 1) {
      throw std::invalid_argument("variant '" + text + "': K must be a positive integer");
    }
    return RestartFixed{static_cast<std::size_t>(K)};
  }
  throw std::invalid_argument("unknown variant '" + text +
                              "' (expected gd, nesterov, restart:<K>, restart, skip)");
}

bool is_accelerated(const SolverVariant& v) { return !std::holds_alternative<GradientDescent>(v); }

std::string to_string(ResetEvent e) {
  switch (e) {
    case ResetEvent::none: return "none";
    case ResetEvent::restart: return "restart";
    case ResetEvent::skip: return "skip";
  }
  return "none";
}

std::string to_string(TerminalStatus s) {
  switch (s) {
    case TerminalStatus::tol_reached: return "tol_reached";
    case TerminalStatus::max_iters: return "max_iters";
    case TerminalStatus::diverged: return "diverged";
  }
  return "max_iters";
}

ResetEvent parse_reset_event(const std::string& text) {
  if (text == "none" || text.empty()) return ResetEvent::none;
  if (text == "restart") return ResetEvent::restart;
  if (text == "skip") return ResetEvent::skip;
  throw std::invalid_argument("unknown reset event '" + text + "'");
}

}  // namespace rsc
