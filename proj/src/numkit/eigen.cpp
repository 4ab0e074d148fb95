#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rsc/numkit.hpp"

namespace rsc {

namespace {

constexpr std::size_t kMaxDim = 1024;
constexpr std::size_t kMaxSweeps = 100;
constexpr double kOffDiagonalTol = 1e-12;
constexpr double kZeroEigenRel = 1e-10;

double off_diagonal_norm(const DenseMatrix& s) {
  double sum = 0.0;
  for (std::size_t i = 0; i < s.rows(); ++i)
    for (std::size_t j = 0; j < s.cols(); ++j)
      if (i != j) sum += s(i, j) * s(i, j);
  return std::sqrt(sum);
}

}  // namespace

SymmetricEigen sym_eig(const DenseMatrix& input) {
  const std::size_t n = input.rows();
  if (input.cols() != n) throw std::invalid_argument("sym_eig: matrix must be square");
  if (n > kMaxDim) {
    throw std::invalid_argument("sym_eig: dimension " + std::to_string(n) + " exceeds 1024");
  }
  double max_abs = 0.0;
  for (double v : input.entries()) max_abs = std::max(max_abs, std::abs(v));
  const double sym_tol = 1e-12 * std::max(1.0, max_abs);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(input(i, j) - input(j, i)) > sym_tol) {
        throw std::invalid_argument("sym_eig: asymmetric input at (" + std::to_string(i) + "," +
                                    std::to_string(j) + ")");
      }

  DenseMatrix s = input;
  DenseMatrix v = DenseMatrix::identity(n);
  const double stop = kOffDiagonalTol * std::max(1.0, input.frobenius_norm());

  std::size_t sweep = 0;
  for (; sweep < kMaxSweeps && off_diagonal_norm(s) >= stop; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = s(p, q);
        if (apq == 0.0) continue;
        const double app = s(p, p);
        const double aqq = s(q, q);
        // Rotation angle that zeroes s(p,q); the smaller root keeps it stable.
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const double skp = s(k, p);
          const double skq = s(k, q);
          s(k, p) = c * skp - sn * skq;
          s(k, q) = sn * skp + c * skq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double spk = s(p, k);
          const double sqk = s(q, k);
          s(p, k) = c * spk - sn * sqk;
          s(q, k) = sn * spk + c * sqk;
        }
        s(p, q) = 0.0;
        s(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s(a, a) < s(b, b); });

  SymmetricEigen out;
  out.sweeps = sweep;
  out.eigenvalues.resize(n);
  out.eigenvectors = DenseMatrix(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    out.eigenvalues[c] = s(order[c], order[c]);
    for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, c) = v(r, order[c]);
  }
  return out;
}

SpectralSummary summarize(const std::vector<double>& eig) {
  if (eig.empty()) throw std::invalid_argument("summarize: no eigenvalues");
  SpectralSummary s;
  s.lambda_min = eig.front();
  s.lambda_max = eig.back();
  const double zero_tol = kZeroEigenRel * std::abs(s.lambda_max);
  for (double l : eig) {
    if (l > zero_tol && l > 0.0) {
      s.lambda_min_pp = l;
      break;
    }
  }
  return s;
}

SpectralSummary sym_eig_summary(const DenseMatrix& s) { return summarize(sym_eig(s).eigenvalues); }

}  // namespace rsc
