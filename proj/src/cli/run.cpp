#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "rsc/augl1.hpp"
#include "rsc/certify.hpp"
#include "rsc/cli.hpp"

namespace rsc::cli {

namespace {

using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

// Solver divergence reported by a command.
class NumericAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string seed_tag(std::uint64_t seed) { return "seed" + std::to_string(seed); }

void echo_config(const RunConfig& cfg, const json& resolved) {
  json j = json::parse(config_json(cfg));
  for (const auto& [k, v] : resolved.items()) j[k] = v;
  write_file_atomic(cfg.output_dir / "config.json", j.dump(2) + "\n");
}

DenseVector start_point(const ObjectiveOracle& oracle, const RunConfig& cfg, std::uint64_t seed) {
  if (cfg.x0) return DenseVector(oracle.dim(), *cfg.x0);
  return gaussian_vector(oracle.dim(), seed, 11);
}

struct PreparedRun {
  SolverConfig solver;
  ObjectiveOracle oracle;
};

PreparedRun prepare(const RunConfig& cfg, const ObjectiveOracle& oracle) {
  SolverConfig s;
  s.variant = resolve_variant(cfg.variant, oracle);
  s.stepsize_h = resolve_stepsize(cfg.h, oracle, s.variant);
  s.max_iters = cfg.iters;
  s.grad_tol = cfg.grad_tol;
  return {s, oracle};
}

std::string trace_csv(const SolverTrace& trace) {
  std::ostringstream out;
  write_trace_csv(out, trace);
  return out.str();
}

void emit_trace_svg(const SolverTrace& trace, const std::string& title,
                    const std::filesystem::path& path) {
  ChartSeries s;
  const bool gap = trace.f_star().has_value();
  s.label = gap ? "f - f*" : "||grad f||";
  for (const auto& r : trace.records()) {
    s.x.push_back(static_cast<double>(r.k));
    s.y.push_back(gap ? r.f - *trace.f_star() : r.grad_norm);
  }
  write_file_atomic(path, render_log_chart(title, gap ? "objective gap" : "gradient norm", {s}));
}

json run_summary(std::uint64_t seed, const SolverTrace& trace, const SolverConfig& s) {
  const auto& last = trace.records().back();
  json j;
  j["record"] = "run";
  j["seed"] = seed;
  j["variant"] = variant_name(s.variant);
  j["h"] = s.stepsize_h;
  j["status"] = to_string(trace.status());
  j["iters"] = last.k;
  j["f_final"] = last.f;
  j["grad_norm_final"] = last.grad_norm;
  j["dist_final"] = last.dist_to_sol ? json(*last.dist_to_sol) : json(nullptr);
  return j;
}

SolverTrace run_seed(const RunConfig& cfg, const PreparedRun& p, std::uint64_t seed,
                     std::ostream& out, std::vector<std::string>* lines) {
  const SolverTrace trace = solve(p.oracle, start_point(p.oracle, cfg, seed), p.solver);
  const std::string tag = seed_tag(seed);
  write_file_atomic(cfg.output_dir / ("trace_" + tag + ".csv"), trace_csv(trace));
  if (cfg.emit_svg) {
    emit_trace_svg(trace, p.oracle.name() + " " + variant_name(p.solver.variant) + " " + tag,
                   cfg.output_dir / ("trace_" + tag + ".svg"));
  }
  const std::string line = run_summary(seed, trace, p.solver).dump();
  out << line << '\n';
  if (lines) lines->push_back(line);
  if (trace.status() == TerminalStatus::diverged) {
    throw NumericAbort("solver diverged on " + p.oracle.name() + " (" + tag + ") at k = " +
                       std::to_string(trace.records().back().k));
  }
  return trace;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string s;
  for (const auto& l : lines) s += l + '\n';
  return s;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  const PreparedRun p = prepare(cfg, make_oracle(cfg.oracle_id));
  echo_config(cfg, {{"h_resolved", p.solver.stepsize_h}, {"variant_resolved", variant_name(p.solver.variant)}});
  std::vector<std::string> lines;
  for (std::uint64_t seed : cfg.seeds) run_seed(cfg, p, seed, out, &lines);
  write_file_atomic(cfg.output_dir / "runs.jsonl", join_lines(lines));
  return kExitPass;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const TheoremId id = [&] {
    try {
      return parse_theorem_id(cfg.theorem);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }();
  const PreparedRun p = prepare(cfg, make_oracle(cfg.oracle_id));
  echo_config(cfg, {{"h_resolved", p.solver.stepsize_h}, {"variant_resolved", variant_name(p.solver.variant)}});
  std::vector<std::string> lines;
  bool all_pass = true;
  for (std::uint64_t seed : cfg.seeds) {
    const SolverTrace trace = run_seed(cfg, p, seed, out, nullptr);
    const BoundReport report = check_bounds(trace, p.oracle, id, p.solver);
    json j = json::parse(to_json_line(report));
    j["seed"] = seed;
    lines.push_back(j.dump());
    out << lines.back() << '\n';
    all_pass = all_pass && report.pass;
  }
  write_file_atomic(cfg.output_dir / "reports.jsonl", join_lines(lines));
  return all_pass ? kExitPass : kExitCheckFailed;
}

int cmd_certify(const RunConfig& cfg, std::ostream& out) {
  const ObjectiveOracle oracle = make_oracle(cfg.oracle_id);
  echo_config(cfg, json::object());
  const SamplingBox box = SamplingBox::cube(oracle.dim(), cfg.lo, cfg.hi,
                                            cfg.grid ? SamplingMode::grid : SamplingMode::uniform);
  std::vector<std::string> lines;
  for (std::uint64_t seed : cfg.seeds) {
    const auto emit = [&](const ConstantEstimate& e, const std::string& name) {
      json j = json::parse(to_json_line(e, name));
      j["seed"] = seed;
      j["oracle"] = oracle.name();
      lines.push_back(j.dump());
      out << lines.back() << '\n';
    };
    if (cfg.constant != "rlg") {
      if (oracle.has_project()) {
        emit(estimate_rsi(oracle, box, cfg.samples, seed), "nu");
      } else if (cfg.constant == "rsi") {
        throw UsageError("certify: " + oracle.name() + " has no projection, nu cannot be sampled");
      }
    }
    if (cfg.constant != "rsi") emit(estimate_rlg(oracle, box, cfg.samples, seed), "R");
  }
  write_file_atomic(cfg.output_dir / "estimates.jsonl", join_lines(lines));
  return kExitPass;
}

int cmd_rates(const RunConfig& cfg, std::ostream& out) {
  RateModel model;
  try {
    model = parse_rate_model(cfg.model);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::vector<std::pair<std::uint64_t, SolverTrace>> traces;
  if (cfg.trace_file) {
    std::ifstream in(*cfg.trace_file);
    if (!in) throw UsageError("--trace: cannot read '" + cfg.trace_file->string() + "'");
    echo_config(cfg, json::object());
    traces.emplace_back(0, read_trace_csv(in));
  } else {
    const PreparedRun p = prepare(cfg, make_oracle(cfg.oracle_id));
    echo_config(cfg, {{"h_resolved", p.solver.stepsize_h}, {"variant_resolved", variant_name(p.solver.variant)}});
    for (std::uint64_t seed : cfg.seeds) traces.emplace_back(seed, run_seed(cfg, p, seed, out, nullptr));
  }
  std::vector<std::string> lines;
  for (const auto& [seed, trace] : traces) {
    RateOptions opt;
    if (cfg.quantity == "dist_to_sol") opt.quantity = RateQuantity::dist_to_sol;
    else if (cfg.quantity == "grad_norm") opt.quantity = RateQuantity::grad_norm;
    else if (cfg.quantity.empty() && !trace.f_star()) opt.quantity = RateQuantity::grad_norm;
    const RateFit fit = fit_rate(trace, model, cfg.window, opt);
    json j = json::parse(to_json_line(fit));
    j["quantity"] = opt.quantity == RateQuantity::fgap ? "fgap"
                    : opt.quantity == RateQuantity::grad_norm ? "grad_norm" : "dist_to_sol";
    if (!cfg.trace_file) j["seed"] = seed;
    lines.push_back(j.dump());
    out << lines.back() << '\n';
  }
  write_file_atomic(cfg.output_dir / "rates.jsonl", join_lines(lines));
  return kExitPass;
}

int cmd_recover(const RunConfig& cfg, std::ostream& out) {
  SignalKind signal;
  try {
    signal = parse_signal_kind(cfg.signal);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  SolverVariant variant;
  try {
    variant = parse_variant(cfg.variant);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (std::holds_alternative<RestartFixed>(variant)) {
    throw UsageError("recover: --variant must be gd, nesterov, restart or skip");
  }
  if (!(cfg.m > 0 && cfg.m < cfg.n) || cfg.k > cfg.n) {
    throw UsageError("recover: needs 0 < m < n and k <= n");
  }
  std::optional<double> h;
  if (cfg.h != "auto") {
    const SparseProblem probe = gen_sparse_problem(cfg.seeds.front(), cfg.m, cfg.n, cfg.k, signal);
    h = resolve_stepsize(cfg.h, augl1_oracle(probe), variant);
  }
  echo_config(cfg, {{"variant_resolved", variant_name(variant)}});

  std::vector<std::string> lines;
  bool all_pass = true;
  for (std::uint64_t seed : cfg.seeds) {
    const SparseProblem problem = gen_sparse_problem(seed, cfg.m, cfg.n, cfg.k, signal);
    const RecoveryResult res = recover(problem, variant, h, cfg.iters);
    const std::string tag = seed_tag(seed) + "_" + variant_name(variant);
    std::ostringstream csv;
    write_recovery_csv(csv, res);
    write_file_atomic(cfg.output_dir / ("recovery_" + tag + ".csv"), csv.str());
    if (cfg.emit_svg) {
      ChartSeries s;
      s.label = res.rel_error_curve ? "relative error" : "primal residual";
      for (std::size_t i = 0; i < res.iters; ++i) {
        s.x.push_back(static_cast<double>(i + 1));
        s.y.push_back(res.rel_error_curve ? (*res.rel_error_curve)[i] : res.primal_residual_curve[i]);
      }
      write_file_atomic(cfg.output_dir / ("recovery_" + tag + ".svg"),
                        render_log_chart("linearized Bregman, " + tag, s.label, {s}));
    }
    json j;
    j["record"] = "recovery";
    j["seed"] = seed;
    j["variant"] = variant_name(variant);
    j["m"] = cfg.m;
    j["n"] = cfg.n;
    j["k"] = cfg.k;
    j["signal"] = to_string(signal);
    j["alpha"] = problem.alpha;
    j["h"] = res.stepsize_h;
    j["status"] = to_string(res.status);
    j["iters"] = res.iters;
    j["rel_error_final"] = res.rel_error_curve && !res.rel_error_curve->empty()
                               ? json(res.rel_error_curve->back())
                               : json(nullptr);
    j["primal_residual_final"] =
        res.primal_residual_curve.empty() ? json(nullptr) : json(res.primal_residual_curve.back());
    lines.push_back(j.dump());
    out << lines.back() << '\n';
    if (res.status == TerminalStatus::diverged) {
      write_file_atomic(cfg.output_dir / "recovery.jsonl", join_lines(lines));
      throw NumericAbort("recovery diverged for " + tag);
    }
    all_pass = all_pass && res.status == TerminalStatus::tol_reached;
  }
  write_file_atomic(cfg.output_dir / "recovery.jsonl", join_lines(lines));
  return all_pass ? kExitPass : kExitCheckFailed;
}

int cmd_appendix(const RunConfig& cfg, std::ostream& out) {
  echo_config(cfg, json::object());
  GridOptimum g;
  try {
    g = appendix_grid(cfg.R, cfg.nu, cfg.steps);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  json j = json::parse(to_json_line(g));
  const double closed_form = 1.0 - cfg.nu / (2.0 * cfg.R);
  j["closed_form"] = closed_form;
  const bool pass = std::abs(g.min_value - closed_form) <= 1e-6;
  j["pass"] = pass;
  out << j.dump() << '\n';
  write_file_atomic(cfg.output_dir / "appendix.json", j.dump() + "\n");
  return pass ? kExitPass : kExitCheckFailed;
}

void report_error(std::ostream& err, const char* kind, const std::string& message) {
  err << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    std::filesystem::create_directories(cfg.output_dir);
    switch (cfg.command) {
      case Command::solve: return cmd_solve(cfg, out);
      case Command::verify: return cmd_verify(cfg, out);
      case Command::certify: return cmd_certify(cfg, out);
      case Command::rates: return cmd_rates(cfg, out);
      case Command::recover: return cmd_recover(cfg, out);
      case Command::appendix: return cmd_appendix(cfg, out);
    }
  } catch (const UsageError& e) {
    report_error(err, "usage", e.what());
    return kExitUsage;
  } catch (const NumericAbort& e) {
    report_error(err, "numeric", e.what());
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    report_error(err, "invalid_argument", e.what());
    return kExitUsage;
  } catch (const std::domain_error& e) {
    report_error(err, "numeric", e.what());
    return kExitNumeric;
  } catch (const std::filesystem::filesystem_error& e) {
    report_error(err, "io", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    report_error(err, "numeric", e.what());
    return kExitNumeric;
  }
  return kExitUsage;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (args.size() == 1 && (args[0] == "--help" || args[0] == "-h" || args[0] == "help")) {
    out << usage();
    return kExitPass;
  }
  RunConfig cfg;
  try {
    cfg = parse_config(args);
  } catch (const UsageError& e) {
    report_error(err, "usage", e.what());
    return kExitUsage;
  }
  return run(cfg, out, err);
}

}  // namespace rsc::cli
