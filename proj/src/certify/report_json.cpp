#include <cmath>

#include "rsc/certify.hpp"
#include "json.hpp"

namespace rsc {

namespace {

using nlohmann::json;

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

template <class T>
json optional(const std::optional<T>& v) {
  if (!v) return nullptr;
  if constexpr (std::is_floating_point_v<T>) {
    return number(*v);
  } else {
    return *v;
  }
}

json vector_json(const DenseVector& v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

}  // namespace

std::string to_json_line(const BoundReport& r) {
  json j;
  j["record"] = "bound";
  j["theorem_id"] = to_string(r.theorem_id);
  j["pass"] = r.pass;
  j["max_violation"] = number(r.max_violation);
  j["slack"] = r.slack;
  j["first_fail_k"] = optional(r.first_fail_k);
  j["checked"] = r.checked;
  j["R_used"] = optional(r.R_used);
  j["L_used"] = optional(r.L_used);
  j["nu_used"] = optional(r.nu_used);
  j["f_star_used"] = optional(r.f_star_used);
  j["note"] = r.note;
  return j.dump();
}

std::string to_json_line(const RateFit& r) {
  json j;
  j["record"] = "rate";
  j["model"] = to_string(r.model);
  j["fitted_factor"] = number(r.fitted_factor);
  j["slope"] = number(r.slope);
  j["r_squared"] = number(r.r_squared);
  j["k_start"] = r.k_start;
  j["k_end"] = r.k_end;
  j["points"] = r.points;
  j["window_shrunk"] = r.window_shrunk;
  j["insufficient_points"] = r.insufficient_points;
  return j.dump();
}

std::string to_json_line(const ConstantEstimate& r, const std::string& constant) {
  json j;
  j["record"] = "estimate";
  j["constant"] = constant;
  j["value"] = number(r.value);
  j["method"] = to_string(r.method);
  j["samples_used"] = r.samples_used;
  j["lower_bound"] = r.lower_bound;
  j["witness"] = vector_json(r.witness);
  j["witness_pair"] = r.witness_pair ? vector_json(*r.witness_pair) : json(nullptr);
  return j.dump();
}

std::string to_json_line(const GridOptimum& r) {
  json j;
  j["record"] = "appendix";
  j["theta_star"] = r.theta_star;
  j["h_star"] = r.h_star;
  j["min_value"] = r.min_value;
  j["case_a"] = {{"value", r.case_a_value}, {"theta", r.case_a_theta}, {"h", r.case_a_h}};
  j["case_b"] = {{"value", r.case_b_value}, {"theta", r.case_b_theta}, {"h", r.case_b_h}};
  return j.dump();
}

}  // namespace rsc
