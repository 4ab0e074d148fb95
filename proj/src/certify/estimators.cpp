#include <cmath>
#include <limits>
#include <stdexcept>

#include "rsc/certify.hpp"

namespace rsc {

namespace {

constexpr double kDegenerateDistance = 1e-8;
constexpr std::size_t kSegmentPoints = 32;
constexpr std::size_t kMaxSweeps = 50;
constexpr double kSweepRelTol = 1e-6;

void check_box(const SamplingBox& box, std::size_t dim) {
  if (box.lower.size() != dim || box.upper.size() != dim) {
    throw std::invalid_argument("sampling box has dimension " + std::to_string(box.lower.size()) +
                                ", oracle expects " + std::to_string(dim));
  }
}

struct PairRatio {
  double value = 0.0;
  bool finite = true;
};

PairRatio gradient_ratio(const DenseVector& x, const DenseVector& gx, const DenseVector& y,
                         const DenseVector& gy) {
  const double dx = norm2(subtract(x, y).span());
  if (dx == 0.0) return {0.0, true};
  const double dg = norm2(subtract(gx, gy).span());
  const double r = dg / dx;
  return {std::isfinite(r) ? r : 0.0, std::isfinite(r)};
}

}  // namespace

SamplingBox SamplingBox::cube(std::size_t dim, double lo, double hi, SamplingMode mode) {
  if (!(lo < hi)) throw std::invalid_argument("sampling box: lower bound must be below upper");
  return SamplingBox{DenseVector(dim, lo), DenseVector(dim, hi), mode};
}

std::vector<DenseVector> sample_box(const SamplingBox& box, std::size_t n, std::uint64_t seed) {
  const std::size_t dim = box.lower.size();
  if (box.upper.size() != dim || dim == 0) throw std::invalid_argument("sampling box: bad bounds");
  std::vector<DenseVector> out;
  out.reserve(n);
  if (box.mode == SamplingMode::grid) {
    if (dim != 1) throw std::invalid_argument("grid sampling is one-dimensional");
    const double lo = box.lower[0];
    const double hi = box.upper[0];
    for (std::size_t i = 0; i < n; ++i) {
      const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
      out.push_back(DenseVector{lo + t * (hi - lo)});
    }
    return out;
  }
  UniformStream u(seed, 0x5a);
  for (std::size_t i = 0; i < n; ++i) {
    DenseVector x(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      x[j] = box.lower[j] + u.next() * (box.upper[j] - box.lower[j]);
    }
    out.push_back(std::move(x));
  }
  return out;
}

std::string to_string(EstimationMethod m) {
  switch (m) {
    case EstimationMethod::segment_sampling: return "segment_sampling";
    case EstimationMethod::projection_ratio: return "projection_ratio";
    case EstimationMethod::contraction_converse: return "contraction_converse";
  }
  return "projection_ratio";
}

ConstantEstimate estimate_rsi(const ObjectiveOracle& oracle, const SamplingBox& box,
                              std::size_t n_samples, std::uint64_t seed) {
  if (!oracle.has_project()) {
    throw std::invalid_argument("estimate_rsi: " + oracle.name() + " has no projection");
  }
  if (n_samples < 100) throw std::invalid_argument("estimate_rsi: needs at least 100 samples");
  check_box(box, oracle.dim());

  ConstantEstimate est;
  est.method = EstimationMethod::projection_ratio;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& x : sample_box(box, n_samples, seed)) {
    const DenseVector d = subtract(x, oracle.project(x));
    const double dist = norm2(d.span());
    if (dist <= kDegenerateDistance) continue;
    ++est.samples_used;
    const double ratio = dot(oracle.eval(x).gradient.span(), d.span()) / dot(d.span(), d.span());
    if (ratio < best) {
      best = ratio;
      est.witness = x;
    }
  }
  if (est.samples_used == 0) {
    throw std::domain_error("estimate_rsi: no sample of " + oracle.name() +
                            " lies outside the solution set");
  }
  if (!(best > 0.0) || !std::isfinite(best)) {
    throw std::domain_error("estimate_rsi: " + oracle.name() +
                            " violates the secant inequality, ratio " + format_double(best));
  }
  est.value = best;
  return est;
}

ConstantEstimate estimate_rlg(const ObjectiveOracle& oracle, const SamplingBox& box,
                              std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 100) throw std::invalid_argument("estimate_rlg: needs at least 100 samples");
  check_box(box, oracle.dim());

  const auto cloud = sample_box(box, n_samples, seed);
  std::vector<DenseVector> grads;
  grads.reserve(cloud.size());
  for (const auto& z : cloud) {
    DenseVector g = oracle.eval(z).gradient;
    if (!all_finite(g.span())) {
      throw std::domain_error("estimate_rlg: gradient of " + oracle.name() +
                              " is not finite at a sample point");
    }
    grads.push_back(std::move(g));
  }

  ConstantEstimate est;
  est.method = EstimationMethod::segment_sampling;
  est.lower_bound = true;
  est.samples_used = cloud.size();
  double R = 0.0;
  const auto consider = [&](const DenseVector& x, const DenseVector& gx, const DenseVector& y,
                            const DenseVector& gy) {
    const PairRatio r = gradient_ratio(x, gx, y, gy);
    if (r.value > R) {
      R = r.value;
      est.witness = x;
      est.witness_pair = y;
    }
  };

  // Initial value from neighbouring pairs of the cloud.
  for (std::size_t i = 0; i + 1 < cloud.size(); ++i) consider(cloud[i], grads[i], cloud[i + 1], grads[i + 1]);
  if (R == 0.0) {
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const DenseVector w = subtract(cloud[i], grads[i]);
      consider(cloud[i], grads[i], w, oracle.eval(w).gradient);
    }
  }
  if (R == 0.0) {
    throw std::domain_error("estimate_rlg: gradient of " + oracle.name() +
                            " is constant over the samples");
  }

  for (std::size_t sweep = 0; sweep < kMaxSweeps; ++sweep) {
    const double before = R;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const DenseVector& z = cloud[i];
      const DenseVector& gz = grads[i];
      if (norm2(gz.span()) == 0.0) continue;
      std::vector<DenseVector> pts{z};
      std::vector<DenseVector> pg{gz};
      for (std::size_t j = 1; j < kSegmentPoints; ++j) {
        const double t = static_cast<double>(j) / static_cast<double>(kSegmentPoints - 1);
        DenseVector p = z;
        axpy(-t / before, gz.span(), p.span());
        DenseVector g = oracle.eval(p).gradient;
        if (!all_finite(g.span())) {
          std::string where;
          for (std::size_t c = 0; c < z.size() && c < 4; ++c) where += (c ? "," : "") + format_double(z[c]);
          throw std::domain_error("estimate_rlg: gradient blow-up on the segment from z = (" + where +
                                  (z.size() > 4 ? ",...)" : ")"));
        }
        pts.push_back(std::move(p));
        pg.push_back(std::move(g));
      }
      for (std::size_t j = 0; j + 1 < pts.size(); ++j) consider(pts[j], pg[j], pts[j + 1], pg[j + 1]);
      consider(pts.front(), pg.front(), pts.back(), pg.back());
    }
    if (R - before <= kSweepRelTol * before) break;
  }
  est.value = R;
  return est;
}

ConverseSecant converse_secant(const SolverTrace& trace, const ObjectiveOracle& oracle, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("converse_secant: stepsize must be positive");
  if (!oracle.has_project()) {
    throw std::invalid_argument("converse_secant: " + oracle.name() + " has no projection");
  }
  const auto recs = trace.records();
  if (recs.empty() || !recs.front().dist_to_sol) {
    throw std::invalid_argument("converse_secant: trace carries no distance to the solution");
  }
  const double r0 = *recs.front().dist_to_sol;
  // Ratios from iterates far above roundoff only.
  const double floor = std::max(1e-6 * r0, 1e-300);

  ConverseSecant out;
  double worst_ratio = -1.0;
  std::size_t worst_at = 0;
  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i + 1 < recs.size(); ++i) {
    const double rk = recs[i].dist_to_sol.value_or(0.0);
    if (rk <= floor) continue;
    usable.push_back(i);
    const double ratio = recs[i + 1].dist_to_sol.value_or(0.0) / rk;
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      worst_at = i;
    }
  }
  if (usable.empty()) {
    throw std::invalid_argument("converse_secant: no contraction measurable from this trace");
  }
  out.delta = 1.0 - worst_ratio * worst_ratio;
  if (!(out.delta > 0.0)) {
    throw std::domain_error("converse_secant: trace does not contract (max ratio " +
                            format_double(worst_ratio) + ")");
  }
  out.estimate.value = out.delta / (2.0 * h);
  out.estimate.method = EstimationMethod::contraction_converse;
  out.estimate.samples_used = usable.size();
  out.estimate.witness = recs[worst_at].x;

  const double nu = out.estimate.value;
  out.secant_holds = true;
  for (std::size_t i : usable) {
    if (recs[i].x.empty()) {
      throw std::invalid_argument("converse_secant: trace was recorded without iterates");
    }
    const DenseVector& x = recs[i].x;
    const DenseVector d = subtract(x, oracle.project(x));
    const double lhs = nu * dot(d.span(), d.span());
    const double rhs = dot(oracle.eval(x).gradient.span(), d.span());
    const double v = rhs > 0.0 ? lhs / rhs - 1.0 : (lhs <= rhs ? -1.0 : std::numeric_limits<double>::infinity());
    out.max_violation = std::max(out.max_violation, v);
    if (v > kBoundSlack && !out.first_fail_k) {
      out.first_fail_k = recs[i].k;
      out.secant_holds = false;
    }
  }
  return out;
}

}  // namespace rsc
