#include <cmath>
#include <stdexcept>

#include "rsc/oracles.hpp"

namespace rsc {

ObjectiveOracle::ObjectiveOracle(Parts parts) : p_(std::move(parts)) {
  if (p_.dim == 0) throw std::invalid_argument("ObjectiveOracle: dimension must be positive");
  if (!p_.eval) throw std::invalid_argument("ObjectiveOracle: missing evaluation function");
  const auto& c = p_.constants;
  for (const auto* v : {&c.R, &c.L, &c.nu, &c.mu}) {
    if (*v && !(**v > 0.0 && std::isfinite(**v))) {
      throw std::invalid_argument("ObjectiveOracle " + p_.name + ": constants must be positive");
    }
  }
  if (c.nu && c.L && *c.nu > *c.L * (1.0 + 1e-12)) {
    throw std::invalid_argument("ObjectiveOracle " + p_.name + ": nu exceeds L");
  }
}

void ObjectiveOracle::check_dim(const DenseVector& x, const char* what) const {
  if (x.size() != p_.dim) {
    throw std::invalid_argument(std::string(what) + " on " + p_.name + ": expected dimension " +
                                std::to_string(p_.dim) + ", got " + std::to_string(x.size()));
  }
}

Evaluation ObjectiveOracle::eval(const DenseVector& x) const {
  check_dim(x, "eval");
  return p_.eval(x);
}

DenseVector ObjectiveOracle::project(const DenseVector& x) const {
  if (!p_.project) throw std::logic_error(p_.name + " has no solution-set projection");
  check_dim(x, "project");
  return p_.project(x);
}

double ObjectiveOracle::distance_to_solution(const DenseVector& x) const {
  return norm2(subtract(x, project(x)).span());
}

double ObjectiveOracle::kink_distance(const DenseVector& x) const {
  check_dim(x, "kink_distance");
  return p_.kink_distance ? p_.kink_distance(x) : std::numeric_limits<double>::infinity();
}

std::vector<DenseVector> kink_free(const ObjectiveOracle& oracle,
                                   const std::vector<DenseVector>& candidates) {
  std::vector<DenseVector> out;
  for (const auto& x : candidates)
    if (oracle.kink_distance(x) >= kKinkMargin) out.push_back(x);
  return out;
}

double finite_diff_check(const ObjectiveOracle& oracle, const std::vector<DenseVector>& points) {
  double worst = 0.0;
  for (const auto& x : points) {
    if (oracle.kink_distance(x) < kKinkMargin) {
      throw std::invalid_argument("finite_diff_check: point within " + format_double(kKinkMargin) +
                                  " of a kink of " + oracle.name());
    }
    const DenseVector g = oracle.eval(x).gradient;
    const double step = 1e-6 * (1.0 + norm2(x.span()));
    DenseVector fd(x.size());
    DenseVector probe = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
      probe[i] = x[i] + step;
      const double up = oracle.eval(probe).value;
      probe[i] = x[i] - step;
      const double down = oracle.eval(probe).value;
      probe[i] = x[i];
      fd[i] = (up - down) / (2.0 * step);
    }
    const double err = norm2(subtract(fd, g).span()) / std::max(norm2(g.span()), 1e-12);
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace rsc
