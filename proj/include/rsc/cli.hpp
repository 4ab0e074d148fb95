#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsc/oracles.hpp"
#include "rsc/solvers.hpp"

namespace rsc::cli {

enum class Command { solve, certify, verify, rates, recover, appendix };
std::string to_string(Command c);

/// Bad flags, bad config keys, or values that cannot be resolved. Exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  Command command = Command::solve;
  std::string oracle_id;
  std::string variant = "gd";
  std::string h = "auto";
  std::size_t iters = 1000;
  double grad_tol = 0.0;
  std::vector<std::uint64_t> seeds{0};
  std::filesystem::path output_dir = "rsc_out";
  bool emit_svg = false;
  std::optional<double> x0;  // fills every coordinate of the start point

  // verify
  std::string theorem;
  // certify
  std::string constant = "both";
  std::size_t samples = 1000;
  double lo = -5.0;
  double hi = 5.0;
  bool grid = false;
  // rates
  std::string model = "linear_geometric";
  std::string quantity;  // fgap | dist_to_sol | grad_norm; empty picks fgap when f* is known
  std::optional<std::pair<std::size_t, std::size_t>> window;
  std::optional<std::filesystem::path> trace_file;
  // recover
  std::size_t m = 256;
  std::size_t n = 512;
  std::size_t k = 25;
  std::string signal = "gaussian";
  // appendix
  double R = 1.0;
  double nu = 0.5;
  std::size_t steps = 2000;
};

/// Parses `rsc <command> [flags]`; `--config file.json` supplies defaults that flags override.
RunConfig parse_config(const std::vector<std::string>& args);

/// Usage text for the whole tool.
std::string usage();

/// JSON echo of a resolved configuration.
std::string config_json(const RunConfig& cfg);

/// Executes a command. Returns 0 pass, 1 check failure, 2 usage error, 3 numeric abort.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses argv and runs; usage problems map to exit code 2.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// ---- oracle registry ---------------------------------------------------------

/// "f1", "f2", "f3:beta=<v>", "quad:m=<m>,n=<n>,seed=<s>",
/// "augl1:m=<m>,n=<n>,k=<k>,signal=<gaussian|pm_one>,seed=<s>".
ObjectiveOracle make_oracle(const std::string& id);

/// Resolves "auto" or a number against the oracle's constants and the variant.
double resolve_stepsize(const std::string& h, const ObjectiveOracle& oracle,
                        const SolverVariant& variant);

/// Parses a variant, accepting "restart:auto" for K = ceil(sqrt(8 e R / nu)).
SolverVariant resolve_variant(const std::string& text, const ObjectiveOracle& oracle);

// ---- artifacts -----------------------------------------------------------------

/// Writes via a temporary sibling and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

struct ChartSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;  // plotted as log10; nonpositive values are skipped
};

/// Standalone SVG line chart of log10(y) against x.
std::string render_log_chart(const std::string& title, const std::string& y_label,
                             const std::vector<ChartSeries>& series);

}  // namespace rsc::cli
