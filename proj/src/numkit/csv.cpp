#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "rsc/numkit.hpp"

namespace rsc {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(std::string_view field, std::size_t line) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
    field.remove_suffix(1);
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw std::invalid_argument("csv line " + std::to_string(line) + ": cannot parse '" +
                                std::string(field) + "'");
  }
  return v;
}

std::vector<std::vector<double>> read_rows(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::vector<double> row;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      row.push_back(parse_double(rest.substr(0, comma), lineno));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

void write_csv(std::ostream& out, const DenseMatrix& a) {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j) out << ',';
      out << format_double(a(i, j));
    }
    out << '\n';
  }
}

void write_csv(std::ostream& out, const DenseVector& v) {
  for (double x : v) out << format_double(x) << '\n';
}

DenseMatrix read_csv_matrix(std::istream& in) {
  const auto rows = read_rows(in);
  if (rows.empty()) return DenseMatrix();
  const std::size_t cols = rows.front().size();
  std::vector<double> entries;
  entries.reserve(rows.size() * cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      throw std::invalid_argument("csv: row " + std::to_string(i + 1) + " has " +
                                  std::to_string(rows[i].size()) + " fields, expected " +
                                  std::to_string(cols));
    }
    entries.insert(entries.end(), rows[i].begin(), rows[i].end());
  }
  return DenseMatrix(rows.size(), cols, std::move(entries));
}

DenseVector read_csv_vector(std::istream& in) {
  const DenseMatrix m = read_csv_matrix(in);
  if (m.rows() > 1 && m.cols() != 1) throw std::invalid_argument("csv: expected a single column");
  return DenseVector(std::vector<double>(m.entries().begin(), m.entries().end()));
}

}  // namespace rsc
