#include <limits>
#include <stdexcept>

#include "rsc/certify.hpp"

namespace rsc {

GridOptimum appendix_grid(double R, double nu, std::size_t grid_steps) {
  if (!(R > 0.0) || !(nu > 0.0) || !(nu < 2.0 * R)) {
    throw std::invalid_argument("appendix_grid: needs R > 0 and 0 < nu < 2R");
  }
  if (grid_steps < 1000) throw std::invalid_argument("appendix_grid: needs at least 1000 grid steps");

  const double steps = static_cast<double>(grid_steps);
  GridOptimum out;
  out.case_a_value = std::numeric_limits<double>::infinity();
  out.case_b_value = std::numeric_limits<double>::infinity();

  for (std::size_t i = 0; i <= grid_steps; ++i) {
    const double theta = static_cast<double>(i) / steps;
    if (i > 0) {
      const double lin = (1.0 - theta) * nu + theta * nu * nu / (2.0 * R);
      for (std::size_t j = 1; j <= grid_steps; ++j) {
        const double h = (static_cast<double>(j) / steps) * theta / R;
        const double v = nu * nu * h * h - 2.0 * lin * h + 1.0;
        if (v < out.case_a_value) {
          out.case_a_value = v;
          out.case_a_theta = theta;
          out.case_a_h = h;
        }
      }
    }
    const double lin = 2.0 * theta * R + (1.0 - theta) * nu;
    const double h0 = theta / R;
    const double h1 = 4.0 / R;
    for (std::size_t j = 0; j <= grid_steps; ++j) {
      const double h = h0 + (static_cast<double>(j) / steps) * (h1 - h0);
      const double v = 4.0 * R * R * h * h - 2.0 * lin * h + 1.0;
      if (v < out.case_b_value) {
        out.case_b_value = v;
        out.case_b_theta = theta;
        out.case_b_h = h;
      }
    }
  }

  if (out.case_a_value <= out.case_b_value) {
    out.min_value = out.case_a_value;
    out.theta_star = out.case_a_theta;
    out.h_star = out.case_a_h;
  } else {
    out.min_value = out.case_b_value;
    out.theta_star = out.case_b_theta;
    out.h_star = out.case_b_h;
  }
  return out;
}

}  // namespace rsc
