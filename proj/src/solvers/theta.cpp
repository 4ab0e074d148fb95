#include <cmath>
#include <stdexcept>

#include "rsc/solvers.hpp"

namespace rsc {

ThetaState theta_step(double theta_k) {
  if (!(theta_k > 0.0 && theta_k <= 1.0)) {
    throw std::invalid_argument("theta_step: theta must lie in (0, 1], got " +
                                format_double(theta_k));
  }
  // Same value as theta (sqrt(theta^2 + 4) - theta) / 2 without the subtraction.
  const double next = 2.0 * theta_k / (std::sqrt(theta_k * theta_k + 4.0) + theta_k);
  return ThetaState{next, (1.0 - theta_k) * next / theta_k};
}

}  // namespace rsc
