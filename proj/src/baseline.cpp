#include "mcond/baseline.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "mcond/errors.hpp"
#include "mcond/kernel.hpp"

namespace mcond {

LogDet logdet_lu(DenseMatrix a, std::uint64_t& scalar_updates) {
  if (!a.square()) throw std::invalid_argument("log-determinant needs a square matrix");
  const std::size_t n = a.rows();
  std::vector<std::size_t> live(n);
  std::iota(live.begin(), live.end(), std::size_t{0});
  scalar_updates = 0;

  LogDet out{1, 0.0};
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t best = live.size();
    double best_abs = 0.0;
    for (std::size_t q = 0; q < live.size(); ++q) {
      const double v = std::abs(a(live[q], j));
      if (v > best_abs) {
        best_abs = v;
        best = q;
      }
    }
    if (best == live.size()) return LogDet::singular();

    const std::size_t prow = live[best];
    const double pivot = a(prow, j);
    // Moving the pivot row in front of the `best` live rows above it.
    if (best % 2 == 1) out.sign = -out.sign;
    out.sign *= kernel::sign_of(pivot);
    out.log_abs += std::log(std::abs(pivot));
    live.erase(live.begin() + static_cast<std::ptrdiff_t>(best));

    const double* p = &a(prow, 0);
    for (std::size_t r : live) {
      double* row = &a(r, 0);
      const double m = row[j] / pivot;
      for (std::size_t c = j + 1; c < n; ++c) row[c] -= m * p[c];
    }
    const std::uint64_t w = n - 1 - j;
    scalar_updates += w * w;
  }
  return out;
}

LogDet logdet_lu(DenseMatrix a) {
  std::uint64_t ignored = 0;
  return logdet_lu(std::move(a), ignored);
}

namespace {

double cofactor_expand(const DenseMatrix& a, std::vector<std::size_t>& cols,
                       std::size_t row) {
  const std::size_t n = cols.size();
  if (n == 1) return a(row, cols[0]);
  if (n == 2) {
    return a(row, cols[0]) * a(row + 1, cols[1]) - a(row, cols[1]) * a(row + 1, cols[0]);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = a(row, cols[i]);
    if (v == 0.0) continue;
    std::vector<std::size_t> minor;
    minor.reserve(n - 1);
    for (std::size_t c = 0; c < n; ++c) {
      if (c != i) minor.push_back(cols[c]);
    }
    const double sub = cofactor_expand(a, minor, row + 1);
    sum += (i % 2 == 0 ? v : -v) * sub;
  }
  return sum;
}

}  // namespace

double det_cofactor(const DenseMatrix& a) {
  if (!a.square()) throw std::invalid_argument("determinant needs a square matrix");
  if (a.rows() > kCofactorMaxSize) {
    throw SizeLimitError("cofactor expansion limited to N <= 10");
  }
  std::vector<std::size_t> cols(a.cols());
  std::iota(cols.begin(), cols.end(), std::size_t{0});
  return cofactor_expand(a, cols, 0);
}

}  // namespace mcond
