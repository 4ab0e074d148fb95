#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rsc/certify.hpp"

namespace rsc {

std::string to_string(RateModel m) {
  switch (m) {
    case RateModel::linear_geometric: return "linear_geometric";
    case RateModel::sublinear_1_over_k: return "sublinear_1_over_k";
    case RateModel::sublinear_1_over_k2: return "sublinear_1_over_k2";
  }
  return "linear_geometric";
}

RateModel parse_rate_model(const std::string& text) {
  if (text == "linear_geometric" || text == "linear") return RateModel::linear_geometric;
  if (text == "sublinear_1_over_k" || text == "1/k") return RateModel::sublinear_1_over_k;
  if (text == "sublinear_1_over_k2" || text == "1/k2") return RateModel::sublinear_1_over_k2;
  throw std::invalid_argument("unknown rate model '" + text + "'");
}

RateFit fit_rate_series(std::span<const std::size_t> ks, std::span<const double> values,
                        RateModel model, std::size_t k_start, std::size_t k_end) {
  if (ks.size() != values.size()) throw std::invalid_argument("fit_rate: length mismatch");
  if (k_start > k_end) throw std::invalid_argument("fit_rate: empty window");

  RateFit fit;
  fit.model = model;
  const bool geometric = model == RateModel::linear_geometric;
  std::vector<double> xs;
  std::vector<double> ys;
  std::size_t first = 0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (ks[i] < k_start || ks[i] > k_end) continue;
    if (!geometric && ks[i] == 0) {
      fit.window_shrunk = true;
      continue;
    }
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
      fit.window_shrunk = true;
      break;
    }
    if (xs.empty()) first = ks[i];
    last = ks[i];
    const double k = static_cast<double>(ks[i]);
    xs.push_back(geometric ? k : std::log(k));
    ys.push_back(std::log(values[i]));
  }
  if (xs.size() < 2) throw std::invalid_argument("fit_rate: fewer than two positive points in window");

  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_rate: degenerate window");
  fit.slope = sxy / sxx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (my + fit.slope * (xs[i] - mx));
    ss_res += e * e;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  fit.fitted_factor = geometric ? std::exp(fit.slope) : fit.slope;
  fit.k_start = first;
  fit.k_end = last;
  fit.points = xs.size();
  fit.insufficient_points = xs.size() < 10;
  return fit;
}

RateFit fit_rate(const SolverTrace& trace, RateModel model,
                 std::optional<std::pair<std::size_t, std::size_t>> window,
                 const RateOptions& options) {
  const auto recs = trace.records();
  if (recs.empty()) throw std::invalid_argument("fit_rate: empty trace");
  std::vector<std::size_t> ks;
  std::vector<double> vals;
  const std::optional<double> f_star = options.f_star ? options.f_star : trace.f_star();
  if (options.quantity == RateQuantity::fgap && !f_star) {
    throw std::invalid_argument("fit_rate: the gap needs f*, which is unknown");
  }
  for (const auto& r : recs) {
    ks.push_back(r.k);
    switch (options.quantity) {
      case RateQuantity::fgap: vals.push_back(r.f - *f_star); break;
      case RateQuantity::grad_norm: vals.push_back(r.grad_norm); break;
      case RateQuantity::dist_to_sol:
        if (!r.dist_to_sol) throw std::invalid_argument("fit_rate: trace carries no distance");
        vals.push_back(*r.dist_to_sol);
        break;
    }
  }
  const auto [lo, hi] = window.value_or(std::pair{recs.front().k, recs.back().k});
  return fit_rate_series(ks, vals, model, lo, hi);
}

}  // namespace rsc
