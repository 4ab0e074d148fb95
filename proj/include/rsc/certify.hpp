#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rsc/numkit.hpp"
#include "rsc/oracles.hpp"
#include "rsc/solvers.hpp"

namespace rsc {

// ---- constant estimation ---------------------------------------------------------

enum class SamplingMode { uniform, grid };

/// Axis-aligned box. `grid` is only meaningful in one dimension (inclusive endpoints).
struct SamplingBox {
  DenseVector lower;
  DenseVector upper;
  SamplingMode mode = SamplingMode::uniform;

  static SamplingBox cube(std::size_t dim, double lo, double hi,
                          SamplingMode mode = SamplingMode::uniform);
};

/// Sample i of the box; prefixes of the uniform sequence do not depend on n.
std::vector<DenseVector> sample_box(const SamplingBox& box, std::size_t n, std::uint64_t seed);

enum class EstimationMethod { segment_sampling, projection_ratio, contraction_converse };
std::string to_string(EstimationMethod m);

struct ConstantEstimate {
  double value = 0.0;
  DenseVector witness;
  std::optional<DenseVector> witness_pair;  // second point for pairwise ratios
  EstimationMethod method = EstimationMethod::projection_ratio;
  std::size_t samples_used = 0;
  bool lower_bound = false;  // true when the value under-estimates the true constant
};

/// min over samples of <grad f(x), x - x_prj> / ||x - x_prj||^2.
ConstantEstimate estimate_rsi(const ObjectiveOracle& oracle, const SamplingBox& box,
                              std::size_t n_samples, std::uint64_t seed);

/// Fixed-point sampler over the segments [z, z - grad f(z) / R]. A lower-bound witness.
ConstantEstimate estimate_rlg(const ObjectiveOracle& oracle, const SamplingBox& box,
                              std::size_t n_samples, std::uint64_t seed);

// ---- bound verification ------------------------------------------------------------

enum class TheoremId {
  thm1_sublinear,
  thm2_linear,
  thm2_converse,
  thm3_linear,
  thm4_accel,
  thm6_restart,
  thm8_augl1,
  lemma1_part2,
  lemma2_combined,
  lemma3_growth,
};
std::string to_string(TheoremId id);
TheoremId parse_theorem_id(const std::string& text);

/// Multiplicative slack on every inequality.
inline constexpr double kBoundSlack = 1e-9;

struct BoundReport {
  TheoremId theorem_id = TheoremId::thm2_linear;
  bool pass = false;
  /// Worst relative excess lhs / rhs - 1 over checked points (-1 when nothing exceeds 0).
  double max_violation = -1.0;
  double slack = kBoundSlack;
  std::optional<std::size_t> first_fail_k;
  std::size_t checked = 0;
  std::optional<double> R_used;
  std::optional<double> L_used;
  std::optional<double> nu_used;
  std::optional<double> f_star_used;
  std::string note;
};

struct BoundOptions {
  std::optional<KnownConstants> constants;  // replaces the oracle's constants
  std::optional<double> f_star;             // replaces the oracle's optimal value
};

BoundReport check_bounds(const SolverTrace& trace, const ObjectiveOracle& oracle, TheoremId id,
                         const SolverConfig& cfg, const BoundOptions& options = {});

struct ConverseSecant {
  ConstantEstimate estimate;  // nu = delta / (2h)
  double delta = 0.0;
  bool secant_holds = false;
  double max_violation = -1.0;
  std::optional<std::size_t> first_fail_k;
};

/// Certifies RSC from an observed gradient-descent contraction.
ConverseSecant converse_secant(const SolverTrace& trace, const ObjectiveOracle& oracle, double h);

// ---- rate fitting --------------------------------------------------------------------

enum class RateModel { linear_geometric, sublinear_1_over_k, sublinear_1_over_k2 };
std::string to_string(RateModel m);
RateModel parse_rate_model(const std::string& text);

struct RateFit {
  RateModel model = RateModel::linear_geometric;
  double fitted_factor = 0.0;  // rho = exp(slope) for geometric, log-log slope otherwise
  double slope = 0.0;
  double r_squared = 0.0;
  std::size_t k_start = 0;
  std::size_t k_end = 0;
  std::size_t points = 0;
  bool window_shrunk = false;
  bool insufficient_points = false;  // fewer than 10 usable points
};

/// Least-squares fit of log(values) against k (geometric) or log(k) (sublinear) over the
/// records whose k lies in [k_start, k_end]. A nonpositive value truncates the window.
RateFit fit_rate_series(std::span<const std::size_t> ks, std::span<const double> values,
                        RateModel model, std::size_t k_start, std::size_t k_end);

enum class RateQuantity { fgap, dist_to_sol, grad_norm };

struct RateOptions {
  RateQuantity quantity = RateQuantity::fgap;
  std::optional<double> f_star;  // overrides the trace's f*
};

RateFit fit_rate(const SolverTrace& trace, RateModel model,
                 std::optional<std::pair<std::size_t, std::size_t>> window = std::nullopt,
                 const RateOptions& options = {});

// ---- stepsize / averaging parameter grid ---------------------------------------------

struct GridOptimum {
  double theta_star = 0.0;
  double h_star = 0.0;
  double min_value = 0.0;
  double case_a_value = 0.0;  // min of nu^2 h^2 - 2((1-theta) nu + theta nu^2/(2R)) h + 1
  double case_b_value = 0.0;  // min of 4R^2 h^2 - 2(2 theta R + (1-theta) nu) h + 1
  double case_a_theta = 0.0, case_a_h = 0.0;
  double case_b_theta = 0.0, case_b_h = 0.0;
};

/// Grid search of the per-step contraction bound over (theta, h).
/// Case A: h in (0, theta/R]; case B: h in [theta/R, 4/R].
GridOptimum appendix_grid(double R, double nu, std::size_t grid_steps);

// ---- JSON records ---------------------------------------------------------------------

std::string to_json_line(const BoundReport& r);
std::string to_json_line(const RateFit& r);
std::string to_json_line(const ConstantEstimate& r, const std::string& constant);
std::string to_json_line(const GridOptimum& r);

}  // namespace rsc
