#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rsc/certify.hpp"

namespace rsc {

namespace {

constexpr double kDistanceFloor = 1e-12;

// Accumulates lhs <= rhs checks as relative excess.
class Checker {
 public:
  explicit Checker(BoundReport& report) : report_(report) {}

  void check(std::size_t k, double lhs, double rhs) {
    double v;
    if (lhs <= rhs) {
      v = rhs > 0.0 ? std::max(lhs / rhs - 1.0, -1.0) : -1.0;
    } else {
      v = rhs > 0.0 ? lhs / rhs - 1.0 : std::numeric_limits<double>::infinity();
    }
    record(k, v);
  }

  void record(std::size_t k, double v) {
    ++report_.checked;
    report_.max_violation = std::max(report_.max_violation, v);
    if (v > report_.slack && !report_.first_fail_k) report_.first_fail_k = k;
  }

 private:
  BoundReport& report_;
};

double require(const std::optional<double>& v, const char* what, TheoremId id) {
  if (!v) {
    throw std::invalid_argument(to_string(id) + ": requires " + what + ", which is unknown");
  }
  return *v;
}

double dist_of(const TraceRecord& r, TheoremId id) {
  if (!r.dist_to_sol) {
    throw std::invalid_argument(to_string(id) + ": trace carries no distance to the solution");
  }
  return *r.dist_to_sol;
}

const DenseVector& iterate_of(const TraceRecord& r, TheoremId id) {
  if (r.x.empty()) throw std::invalid_argument(to_string(id) + ": trace was recorded without iterates");
  return r.x;
}

void linear_rate(std::span<const TraceRecord> recs, double lip, double f_star,
                 double factor, BoundReport& report, TheoremId id) {
  // factor = 1 - nu/(2R) for the RLG rate, 1 - nu/L for the RSC rate.
  const double q = std::sqrt(factor);
  const double r0 = dist_of(recs.front(), id);
  Checker c(report);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const double rk = dist_of(recs[i], id);
    if (rk < kDistanceFloor && i > 0) break;
    const double gap = recs[i].f - f_star;
    c.check(recs[i].k, gap, 0.5 * lip * r0 * r0 * std::pow(factor, static_cast<double>(recs[i].k)));
    if (rk < kDistanceFloor) break;
    if (i + 1 < recs.size()) c.check(recs[i + 1].k, dist_of(recs[i + 1], id), q * rk);
  }
}

}  // namespace

std::string to_string(TheoremId id) {
  switch (id) {
    case TheoremId::thm1_sublinear: return "thm1_sublinear";
    case TheoremId::thm2_linear: return "thm2_linear";
    case TheoremId::thm2_converse: return "thm2_converse";
    case TheoremId::thm3_linear: return "thm3_linear";
    case TheoremId::thm4_accel: return "thm4_accel";
    case TheoremId::thm6_restart: return "thm6_restart";
    case TheoremId::thm8_augl1: return "thm8_augl1";
    case TheoremId::lemma1_part2: return "lemma1_part2";
    case TheoremId::lemma2_combined: return "lemma2_combined";
    case TheoremId::lemma3_growth: return "lemma3_growth";
  }
  return "thm2_linear";
}

TheoremId parse_theorem_id(const std::string& text) {
  for (TheoremId id : {TheoremId::thm1_sublinear, TheoremId::thm2_linear, TheoremId::thm2_converse,
                       TheoremId::thm3_linear, TheoremId::thm4_accel, TheoremId::thm6_restart,
                       TheoremId::thm8_augl1, TheoremId::lemma1_part2, TheoremId::lemma2_combined,
                       TheoremId::lemma3_growth}) {
    if (to_string(id) == text) return id;
  }
  throw std::invalid_argument("unknown theorem id '" + text + "'");
}

BoundReport check_bounds(const SolverTrace& trace, const ObjectiveOracle& oracle, TheoremId id,
                         const SolverConfig& cfg, const BoundOptions& options) {
  const auto recs = trace.records();
  if (recs.empty()) throw std::invalid_argument(to_string(id) + ": empty trace");
  const KnownConstants& kc = options.constants ? *options.constants : oracle.constants();
  std::optional<double> f_star = options.f_star;
  if (!f_star) f_star = oracle.f_star();
  if (!f_star) f_star = trace.f_star();

  BoundReport report;
  report.theorem_id = id;
  Checker c(report);

  switch (id) {
    case TheoremId::thm2_linear: {
      const double R = require(kc.R, "R", id);
      const double nu = require(kc.nu, "nu", id);
      const double fs = require(f_star, "f*", id);
      report.R_used = R;
      report.nu_used = nu;
      report.f_star_used = fs;
      linear_rate(recs, R, fs, 1.0 - nu / (2.0 * R), report, id);
      break;
    }
    case TheoremId::thm3_linear: {
      const double L = require(kc.L, "L", id);
      const double nu = require(kc.nu, "nu", id);
      const double fs = require(f_star, "f*", id);
      report.L_used = L;
      report.nu_used = nu;
      report.f_star_used = fs;
      linear_rate(recs, L, fs, 1.0 - nu / L, report, id);
      break;
    }
    case TheoremId::thm1_sublinear: {
      const double R = require(kc.restricted_lipschitz(), "R", id);
      const double fs = require(f_star, "f*", id);
      const double alpha = cfg.stepsize_h * R;
      if (alpha > 1.0 + 1e-12) {
        throw std::invalid_argument("thm1_sublinear: stepsize h R = " + format_double(alpha) +
                                    " exceeds 1");
      }
      report.R_used = R;
      report.f_star_used = fs;
      const double r0 = dist_of(recs.front(), id);
      const double gap0 = recs.front().f - fs;
      const double rate = alpha * (2.0 - alpha) / (2.0 * R * r0 * r0);
      // Distance roundoff grows with the scale of the start point.
      const double floor = kDistanceFloor * std::max(1.0, r0);
      for (std::size_t i = 0; i < recs.size(); ++i) {
        const double gap = recs[i].f - fs;
        const double rhs = gap0 > 0.0 ? 1.0 / (1.0 / gap0 + static_cast<double>(recs[i].k) * rate) : 0.0;
        c.check(recs[i].k, gap, rhs);
        if (i + 1 < recs.size() && dist_of(recs[i], id) >= floor) {
          c.check(recs[i + 1].k, dist_of(recs[i + 1], id), dist_of(recs[i], id));
        }
      }
      break;
    }
    case TheoremId::thm4_accel: {
      const double R = require(kc.restricted_lipschitz(), "R", id);
      const double fs = require(f_star, "f*", id);
      report.R_used = R;
      report.f_star_used = fs;
      if (recs.size() < 2 || recs[1].k != 1) {
        throw std::invalid_argument("thm4_accel: trace lacks the first iterate");
      }
      const double r1 = dist_of(recs[1], id);
      for (std::size_t i = 1; i < recs.size(); ++i) {
        const double k1 = static_cast<double>(recs[i].k) + 1.0;
        c.check(recs[i].k, recs[i].f - fs, 4.0 * R * r1 * r1 / (k1 * k1));
      }
      break;
    }
    case TheoremId::thm6_restart: {
      const auto* fixed = std::get_if<RestartFixed>(&cfg.variant);
      if (!fixed) throw std::invalid_argument("thm6_restart: requires a fixed-restart configuration");
      const double fs = require(f_star, "f*", id);
      report.f_star_used = fs;
      report.R_used = kc.restricted_lipschitz();
      report.nu_used = kc.nu;
      const double gap0 = recs.front().f - fs;
      for (const auto& r : recs) {
        if (r.k == 0 || r.k % fixed->K != 0) continue;
        const double j = static_cast<double>(r.k / fixed->K);
        c.check(r.k, r.f - fs, std::exp(-j) * gap0);
      }
      break;
    }
    case TheoremId::thm8_augl1: {
      const double L = require(kc.L, "L", id);
      report.L_used = L;
      double fs = std::numeric_limits<double>::infinity();
      if (options.f_star) {
        fs = *options.f_star;
      } else {
        for (const auto& r : recs) fs = std::min(fs, r.f);
      }
      report.f_star_used = fs;
      const DenseVector& y0 = iterate_of(recs.front(), id);
      const DenseVector& ylast = iterate_of(recs.back(), id);
      const DenseVector d = subtract(y0, ylast);
      const double C = 0.5 * L * dot(d.span(), d.span());
      const double floor = 1e3 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(fs));
      c.check(0, recs.front().f - fs, C);
      if (kc.nu) {
        const double q = 1.0 - *kc.nu / L;
        report.nu_used = kc.nu;
        for (const auto& r : recs) {
          c.check(r.k, r.f - fs, C * std::pow(q, static_cast<double>(r.k)));
        }
        report.note = "envelope with known nu";
      } else {
        // Smallest geometric factor q with gap_k <= C q^k above the noise floor.
        report.slack = -1e-12;
        double q_hat = 0.0;
        for (const auto& r : recs) {
          const double gap = r.f - fs;
          if (r.k == 0 || gap <= floor) continue;
          const double q = std::pow(gap / C, 1.0 / static_cast<double>(r.k));
          q_hat = std::max(q_hat, q);
          c.record(r.k, q - 1.0);
        }
        if (report.checked <= 1) {
          throw std::invalid_argument("thm8_augl1: no gap above the noise floor");
        }
        report.nu_used = L * (1.0 - q_hat);
        report.note = "certified geometric factor " + format_double(q_hat);
      }
      break;
    }
    case TheoremId::lemma1_part2:
    case TheoremId::lemma2_combined: {
      const double R = require(kc.R, "R", id);
      report.R_used = R;
      double nu = 0.0;
      if (id == TheoremId::lemma2_combined) {
        nu = require(kc.nu, "nu", id);
        report.nu_used = nu;
      }
      if (!oracle.has_project()) {
        throw std::invalid_argument(to_string(id) + ": " + oracle.name() + " has no projection");
      }
      for (const auto& r : recs) {
        const DenseVector& x = iterate_of(r, id);
        const DenseVector g = oracle.eval(x).gradient;
        const DenseVector d = subtract(x, oracle.project(x));
        const double gg = dot(g.span(), g.span());
        const double lhs = id == TheoremId::lemma1_part2
                               ? gg / (2.0 * R)
                               : gg / (4.0 * R) + 0.5 * nu * dot(d.span(), d.span());
        c.check(r.k, lhs, dot(g.span(), d.span()));
      }
      break;
    }
    case TheoremId::lemma3_growth: {
      const double nu = require(kc.nu, "nu", id);
      const double fs = require(f_star, "f*", id);
      report.nu_used = nu;
      report.f_star_used = fs;
      for (const auto& r : recs) {
        const double rk = dist_of(r, id);
        if (rk < kDistanceFloor && r.k != recs.front().k) continue;
        c.check(r.k, 0.5 * nu * rk * rk, r.f - fs);
      }
      break;
    }
    case TheoremId::thm2_converse: {
      const ConverseSecant cs = converse_secant(trace, oracle, cfg.stepsize_h);
      report.nu_used = cs.estimate.value;
      report.checked = cs.estimate.samples_used;
      report.max_violation = cs.max_violation;
      report.first_fail_k = cs.first_fail_k;
      report.note = "delta " + format_double(cs.delta);
      break;
    }
  }
  report.pass = report.checked > 0 && report.max_violation <= report.slack;
  if (report.checked == 0 && report.note.empty()) report.note = "no checkable records";
  return report;
}

}  // namespace rsc
