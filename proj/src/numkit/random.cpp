#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rsc/numkit.hpp"

namespace rsc {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t counter_hash(std::uint64_t key, std::uint64_t counter) {
  // Two rounds of the splitmix finalizer over a Weyl sequence keyed by `key`.
  return mix64(mix64(key) ^ (counter * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL));
}

UniformStream::UniformStream(std::uint64_t seed, std::uint64_t substream)
    : key_(mix64(seed + 0x9e3779b97f4a7c15ULL) ^ mix64(~substream)) {}

std::uint64_t UniformStream::next_u64() { return counter_hash(key_, counter_++); }

double UniformStream::next_open01() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double UniformStream::next() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

std::uint64_t UniformStream::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("UniformStream::below: n must be positive");
  // Rejection on the top of the range keeps the draw exactly uniform.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

GaussianStream::GaussianStream(std::uint64_t seed, std::uint64_t substream)
    : uniform_(seed, substream) {}

double GaussianStream::next() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = uniform_.next_open01();
  const double u2 = uniform_.next();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

GaussianStream gaussian_stream(std::uint64_t seed) { return GaussianStream(seed); }

DenseMatrix gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  GaussianStream g(seed);
  std::vector<double> entries(rows * cols);
  for (double& e : entries) e = g.next();
  return DenseMatrix(rows, cols, std::move(entries));
}

DenseVector gaussian_vector(std::size_t n, std::uint64_t seed, std::uint64_t substream) {
  GaussianStream g(seed, substream);
  std::vector<double> v(n);
  for (double& e : v) e = g.next();
  return DenseVector(std::move(v));
}

}  // namespace rsc
