#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "rsc/solvers.hpp"

namespace rsc {

namespace {

constexpr const char* kHeader = "k,f,fgap,grad_norm,dist_to_sol,reset_event";

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double to_double(const std::string& s, std::size_t lineno) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("trace csv line " + std::to_string(lineno) + ": bad number '" +
                                s + "'");
  }
  return v;
}

}  // namespace

void write_trace_csv(std::ostream& out, const SolverTrace& trace) {
  out << kHeader << '\n';
  for (const auto& r : trace.records()) {
    out << r.k << ',' << format_double(r.f) << ',';
    if (trace.f_star()) out << format_double(r.f - *trace.f_star());
    out << ',' << format_double(r.grad_norm) << ',';
    if (r.dist_to_sol) out << format_double(*r.dist_to_sol);
    out << ',' << to_string(r.reset_event) << '\n';
  }
}

SolverTrace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("trace csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) throw std::invalid_argument("trace csv: unexpected header '" + line + "'");

  std::vector<TraceRecord> records;
  std::optional<double> f_star;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 6) {
      throw std::invalid_argument("trace csv line " + std::to_string(lineno) + ": expected 6 fields");
    }
    TraceRecord r;
    r.k = static_cast<std::size_t>(to_double(fields[0], lineno));
    r.f = to_double(fields[1], lineno);
    if (!fields[2].empty()) {
      // f* is recovered from the first row carrying a gap.
      const double gap = to_double(fields[2], lineno);
      if (!f_star) f_star = r.f - gap;
    }
    r.grad_norm = to_double(fields[3], lineno);
    if (!fields[4].empty()) r.dist_to_sol = to_double(fields[4], lineno);
    r.reset_event = parse_reset_event(fields[5]);
    records.push_back(std::move(r));
  }
  return SolverTrace(std::move(records), TerminalStatus::max_iters, f_star);
}

}  // namespace rsc
