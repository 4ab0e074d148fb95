#include <cmath>
#include <map>
#include <sstream>

#include "rsc/augl1.hpp"
#include "rsc/cli.hpp"

namespace rsc::cli {

namespace {

std::map<std::string, std::string> parse_params(const std::string& id, const std::string& text,
                                                std::initializer_list<const char*> allowed) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("oracle '" + id + "': expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw UsageError("oracle '" + id + "': unknown parameter '" + key + "'");
    out[key] = item.substr(eq + 1);
  }
  for (const char* a : allowed) {
    if (!out.count(a)) throw UsageError("oracle '" + id + "': missing parameter '" + a + "'");
  }
  return out;
}

std::uint64_t to_count(const std::string& id, const std::string& key, const std::string& v) {
  std::size_t used = 0;
  unsigned long long n = 0;
  try {
    n = std::stoull(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty() || v[0] == '-') {
    throw UsageError("oracle '" + id + "': " + key + " must be a nonnegative integer");
  }
  return n;
}

double to_real(const std::string& id, const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) throw UsageError("oracle '" + id + "': " + key + " must be a number");
  return x;
}

}  // namespace

ObjectiveOracle make_oracle(const std::string& id) {
  const auto colon = id.find(':');
  const std::string kind = id.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : id.substr(colon + 1);
  if (kind == "f1" || kind == "f2") {
    if (!rest.empty()) throw UsageError("oracle '" + id + "' takes no parameters");
    return make_example_1d(kind == "f1" ? Example1d::f1 : Example1d::f2);
  }
  if (kind == "f3") {
    const double beta = rest.empty() ? 1.0 : to_real(id, "beta", parse_params(id, rest, {"beta"})["beta"]);
    return make_example_1d(Example1d::f3, beta);
  }
  if (kind == "quad") {
    auto p = parse_params(id, rest, {"m", "n", "seed"});
    const auto m = to_count(id, "m", p["m"]);
    const auto n = to_count(id, "n", p["n"]);
    const auto seed = to_count(id, "seed", p["seed"]);
    if (m == 0 || m > n) throw UsageError("oracle '" + id + "': needs 0 < m <= n");
    const DenseMatrix a = gaussian_matrix(m, n, seed);
    const DenseVector b = gaussian_vector(m, seed);
    return make_quadratic_composite(a, b);
  }
  if (kind == "augl1") {
    auto p = parse_params(id, rest, {"m", "n", "k", "signal", "seed"});
    const SparseProblem sp =
        gen_sparse_problem(to_count(id, "seed", p["seed"]), to_count(id, "m", p["m"]),
                           to_count(id, "n", p["n"]), to_count(id, "k", p["k"]),
                           parse_signal_kind(p["signal"]));
    return augl1_oracle(sp);
  }
  throw UsageError("unknown oracle '" + id + "' (expected f1, f2, f3:beta=, quad:, augl1:)");
}

double resolve_stepsize(const std::string& h, const ObjectiveOracle& oracle,
                        const SolverVariant& variant) {
  if (h != "auto") {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(h, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != h.size() || !(v > 0.0) || !std::isfinite(v)) {
      throw UsageError("--h must be 'auto' or a positive number, got '" + h + "'");
    }
    return v;
  }
  const KnownConstants& c = oracle.constants();
  if (is_accelerated(variant)) {
    if (const auto r = c.restricted_lipschitz()) return 1.0 / *r;
  } else {
    if (c.R && c.nu) return 1.0 / (2.0 * *c.R);
    if (c.L) return 1.0 / *c.L;
    if (c.R) return 1.0 / *c.R;
  }
  throw UsageError("--h auto: " + oracle.name() + " has no known Lipschitz constant; pass --h");
}

SolverVariant resolve_variant(const std::string& text, const ObjectiveOracle& oracle) {
  if (text == "restart:auto") {
    const KnownConstants& c = oracle.constants();
    const auto r = c.restricted_lipschitz();
    if (!r || !c.nu) {
      throw UsageError("--variant restart:auto: " + oracle.name() + " lacks R or nu");
    }
    const double K = std::ceil(std::sqrt(8.0 * std::exp(1.0) * *r / *c.nu));
    return RestartFixed{static_cast<std::size_t>(K)};
  }
  try {
    return parse_variant(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

}  // namespace rsc::cli
