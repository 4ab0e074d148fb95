#include <fstream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rsc/cli.hpp"

namespace rsc::cli {

namespace {

using nlohmann::json;

struct CommandSpec {
  Command command;
  const char* name;
  const char* help;
  std::vector<const char*> keys;
};

const std::vector<CommandSpec>& command_specs() {
  static const std::vector<CommandSpec> specs{
      {Command::solve, "solve", "run a solver and write its trace",
       {"oracle", "variant", "h", "iters", "grad-tol", "x0"}},
      {Command::verify, "verify", "run a solver and check one bound along its trace",
       {"oracle", "variant", "h", "iters", "grad-tol", "x0", "theorem"}},
      {Command::certify, "certify", "estimate the restricted constants by sampling",
       {"oracle", "constant", "samples", "lo", "hi", "grid"}},
      {Command::rates, "rates", "fit a convergence rate to a trace file or a fresh run",
       {"trace", "oracle", "variant", "h", "iters", "grad-tol", "x0", "model", "quantity", "window"}},
      {Command::recover, "recover", "sparse recovery by linearized Bregman",
       {"m", "n", "k", "signal", "variant", "h", "iters"}},
      {Command::appendix, "appendix", "grid search of the contraction bound over (theta, h)",
       {"R", "nu", "steps"}},
  };
  return specs;
}

const std::vector<const char*> kCommonKeys{"seed", "out", "svg"};
bool is_flag(const std::string& key) { return key == "svg" || key == "grid"; }

std::size_t to_size(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  unsigned long long n = 0;
  try {
    n = std::stoull(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (v.empty() || used != v.size() || v[0] == '-') {
    throw UsageError("--" + key + ": expected a nonnegative integer, got '" + v + "'");
  }
  return static_cast<std::size_t>(n);
}

double to_real(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (v.empty() || used != v.size() || !std::isfinite(x)) {
    throw UsageError("--" + key + ": expected a number, got '" + v + "'");
  }
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw UsageError("--" + key + ": expected true or false, got '" + v + "'");
}

std::string json_to_text(const std::string& key, const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_unsigned() || v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_array() && key == "seed") {
    std::string out;
    for (const auto& e : v) out += (out.empty() ? "" : ",") + json_to_text(key, e);
    return out;
  }
  throw UsageError("config key '" + key + "': unsupported value " + v.dump());
}

void apply(RunConfig& cfg, const std::string& key, const std::string& v) {
  if (key == "oracle") cfg.oracle_id = v;
  else if (key == "variant") cfg.variant = v;
  else if (key == "h") cfg.h = v;
  else if (key == "iters") cfg.iters = to_size(key, v);
  else if (key == "grad-tol") cfg.grad_tol = to_real(key, v);
  else if (key == "x0") cfg.x0 = to_real(key, v);
  else if (key == "out") cfg.output_dir = v;
  else if (key == "svg") cfg.emit_svg = to_bool(key, v);
  else if (key == "theorem") cfg.theorem = v;
  else if (key == "constant") cfg.constant = v;
  else if (key == "samples") cfg.samples = to_size(key, v);
  else if (key == "lo") cfg.lo = to_real(key, v);
  else if (key == "hi") cfg.hi = to_real(key, v);
  else if (key == "grid") cfg.grid = to_bool(key, v);
  else if (key == "model") cfg.model = v;
  else if (key == "quantity") cfg.quantity = v;
  else if (key == "trace") cfg.trace_file = v;
  else if (key == "m") cfg.m = to_size(key, v);
  else if (key == "n") cfg.n = to_size(key, v);
  else if (key == "k") cfg.k = to_size(key, v);
  else if (key == "signal") cfg.signal = v;
  else if (key == "R") cfg.R = to_real(key, v);
  else if (key == "nu") cfg.nu = to_real(key, v);
  else if (key == "steps") cfg.steps = to_size(key, v);
  else if (key == "window") {
    const auto colon = v.find(':');
    if (colon == std::string::npos) throw UsageError("--window: expected <k_start>:<k_end>");
    cfg.window = std::pair{to_size(key, v.substr(0, colon)), to_size(key, v.substr(colon + 1))};
  } else if (key == "seed") {
    cfg.seeds.clear();
    std::istringstream in(v);
    std::string item;
    while (std::getline(in, item, ',')) cfg.seeds.push_back(to_size(key, item));
    if (cfg.seeds.empty()) throw UsageError("--seed: at least one seed is required");
  } else {
    throw UsageError("unknown key '" + key + "'");
  }
}

void validate(const RunConfig& cfg) {
  const bool needs_oracle = cfg.command == Command::solve || cfg.command == Command::verify ||
                            cfg.command == Command::certify ||
                            (cfg.command == Command::rates && !cfg.trace_file);
  if (needs_oracle && cfg.oracle_id.empty()) throw UsageError("missing required key 'oracle'");
  if (cfg.command == Command::verify && cfg.theorem.empty()) {
    throw UsageError("missing required key 'theorem'");
  }
  if (cfg.iters == 0) throw UsageError("--iters must be at least 1");
  if (cfg.command == Command::certify) {
    if (cfg.constant != "rsi" && cfg.constant != "rlg" && cfg.constant != "both") {
      throw UsageError("--constant must be rsi, rlg or both");
    }
    if (!(cfg.lo < cfg.hi)) throw UsageError("--lo must be below --hi");
  }
  if (!cfg.quantity.empty() && cfg.quantity != "fgap" && cfg.quantity != "dist_to_sol" &&
      cfg.quantity != "grad_norm") {
    throw UsageError("--quantity must be fgap, dist_to_sol or grad_norm");
  }
  if (cfg.window && cfg.window->first > cfg.window->second) {
    throw UsageError("--window: start exceeds end");
  }
}

}  // namespace

std::string to_string(Command c) {
  for (const auto& s : command_specs()) {
    if (s.command == c) return s.name;
  }
  return "solve";
}

std::string usage() {
  std::ostringstream out;
  out << "usage: rsc <command> [flags]\n\ncommands:\n";
  for (const auto& s : command_specs()) {
    out << "  " << s.name << std::string(10 - std::string(s.name).size(), ' ') << s.help << "\n    flags:";
    for (const char* k : s.keys) out << " --" << k;
    out << '\n';
  }
  out << "\ncommon flags: --seed <s[,s...]> --out <dir> --svg --config <file.json>\n"
         "exit codes: 0 pass, 1 check failure, 2 usage error, 3 numeric abort\n";
  return out.str();
}

RunConfig parse_config(const std::vector<std::string>& args) {
  if (args.empty()) throw UsageError("no command given\n" + usage());

  const CommandSpec* spec = nullptr;
  for (const auto& s : command_specs()) {
    if (args[0] == s.name) spec = &s;
  }
  if (!spec) throw UsageError("unknown command '" + args[0] + "'\n" + usage());

  CLI::App app{spec->help, std::string("rsc ") + spec->name};
  app.set_help_flag();
  std::map<std::string, std::string> values;
  std::map<std::string, bool> flags;
  std::map<std::string, CLI::Option*> options;
  std::string config_path;
  app.add_option("--config", config_path, "JSON file with default values");
  std::vector<std::string> keys(spec->keys.begin(), spec->keys.end());
  keys.insert(keys.end(), kCommonKeys.begin(), kCommonKeys.end());
  for (const auto& key : keys) {
    if (is_flag(key)) {
      options[key] = app.add_flag("--" + key, flags[key]);
    } else {
      options[key] = app.add_option("--" + key, values[key]);
    }
  }

  std::vector<std::string> rest(args.begin() + 1, args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    throw UsageError(std::string(spec->name) + ": " + e.what());
  }

  RunConfig cfg;
  cfg.command = spec->command;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw UsageError("--config: cannot read '" + config_path + "'");
    json file;
    try {
      file = json::parse(in);
    } catch (const json::parse_error& e) {
      throw UsageError("--config: " + std::string(e.what()));
    }
    if (!file.is_object()) throw UsageError("--config: expected a JSON object");
    for (const auto& [key, v] : file.items()) {
      if (v.is_null()) continue;
      if (key == "command") {
        if (v != spec->name) throw UsageError("config key 'command' conflicts with '" + args[0] + "'");
        continue;
      }
      if (!options.count(key)) {
        throw UsageError("config key '" + key + "' is not accepted by '" + spec->name + "'");
      }
      if (options[key]->count() == 0) apply(cfg, key, json_to_text(key, v));
    }
  }
  for (const auto& key : keys) {
    if (options[key]->count() == 0) continue;
    apply(cfg, key, is_flag(key) ? (flags[key] ? "true" : "false") : values[key]);
  }
  validate(cfg);
  return cfg;
}

std::string config_json(const RunConfig& cfg) {
  json j;
  j["command"] = to_string(cfg.command);
  j["seed"] = cfg.seeds;
  j["out"] = cfg.output_dir.string();
  j["svg"] = cfg.emit_svg;
  const auto* spec = &command_specs().front();
  for (const auto& s : command_specs()) {
    if (s.command == cfg.command) spec = &s;
  }
  for (const std::string key : spec->keys) {
    if (key == "oracle") j[key] = cfg.oracle_id;
    else if (key == "variant") j[key] = cfg.variant;
    else if (key == "h") j[key] = cfg.h;
    else if (key == "iters") j[key] = cfg.iters;
    else if (key == "grad-tol") j[key] = cfg.grad_tol;
    else if (key == "x0") j[key] = cfg.x0 ? json(*cfg.x0) : json(nullptr);
    else if (key == "theorem") j[key] = cfg.theorem;
    else if (key == "constant") j[key] = cfg.constant;
    else if (key == "samples") j[key] = cfg.samples;
    else if (key == "lo") j[key] = cfg.lo;
    else if (key == "hi") j[key] = cfg.hi;
    else if (key == "grid") j[key] = cfg.grid;
    else if (key == "model") j[key] = cfg.model;
    else if (key == "quantity") j[key] = cfg.quantity;
    else if (key == "trace") j[key] = cfg.trace_file ? json(cfg.trace_file->string()) : json(nullptr);
    else if (key == "window") {
      j[key] = cfg.window ? json(std::to_string(cfg.window->first) + ":" + std::to_string(cfg.window->second))
                          : json(nullptr);
    }
    else if (key == "m") j[key] = cfg.m;
    else if (key == "n") j[key] = cfg.n;
    else if (key == "k") j[key] = cfg.k;
    else if (key == "signal") j[key] = cfg.signal;
    else if (key == "R") j[key] = cfg.R;
    else if (key == "nu") j[key] = cfg.nu;
    else if (key == "steps") j[key] = cfg.steps;
  }
  return j.dump(2) + "\n";
}

}  // namespace rsc::cli
