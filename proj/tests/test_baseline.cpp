#include <cmath>
#include <random>

#include "doctest.h"
#include "mcond/baseline.hpp"
#include "mcond/condense.hpp"
#include "mcond/errors.hpp"
#include "support.hpp"

using namespace mcond;
using testing::rel_diff;

// Frozen reference values: 60-digit determinants of the generated matrices
// (exported as shortest round-trip CSV and evaluated with mpmath).
namespace frozen {
constexpr double kDetU6s3 = -0.45180109573937529734;
constexpr double kLogU6s3 = -0.79451324967588673695;
}  // namespace frozen

TEST_CASE("logdet_lu: identity") {
  const LogDet d = logdet_lu(DenseMatrix::identity(10));
  CHECK(d.sign == 1);
  CHECK(d.log_abs == 0.0);
}

TEST_CASE("logdet_lu: permutation matrix") {
  const LogDet d = logdet_lu(DenseMatrix::from_rows({{0, 1}, {1, 0}}));
  CHECK(d.sign == -1);
  CHECK(d.log_abs == 0.0);
}

TEST_CASE("logdet_lu: random 6x6 seed 3 against the cofactor oracle") {
  const DenseMatrix a = generate({6, MatrixKind::uniform_random, 3});
  const double det = det_cofactor(a);
  CHECK(rel_diff(det, frozen::kDetU6s3) < 1e-13);
  const LogDet d = logdet_lu(a);
  CHECK(d.sign == -1);
  CHECK(rel_diff(testing::to_det(d), det) < 1e-10);
  CHECK(std::abs(d.log_abs - frozen::kLogU6s3) < 1e-13);
}

TEST_CASE("logdet_lu: singular inputs") {
  CHECK(logdet_lu(DenseMatrix(3, 3)).is_singular());
  CHECK(logdet_lu(DenseMatrix::from_rows({{1, 2}, {2, 4}})).is_singular());
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const LogDet d = logdet_lu(generate({2 + seed, MatrixKind::singular_planted, seed}));
    CHECK(d.sign == 0);
    CHECK(std::isinf(d.log_abs));
  }
}

TEST_CASE("logdet_lu: counts (n-1)^2 + ... + 1 multiply-subtracts") {
  std::uint64_t updates = 0;
  logdet_lu(generate({7, MatrixKind::diagonally_dominant, 1}), updates);
  CHECK(updates == 36 + 25 + 16 + 9 + 4 + 1);
}

TEST_CASE("logdet_lu: tie rule picks the lowest row") {
  // Column 0 ties between rows 0 and 1; choosing row 0 needs no swap.
  const LogDet d = logdet_lu(DenseMatrix::from_rows({{2, 1}, {-2, 3}}));
  CHECK(d.sign == 1);
  CHECK(d.log_abs == doctest::Approx(std::log(8.0)));
}

TEST_CASE("det_cofactor: small cases") {
  CHECK(det_cofactor(DenseMatrix::from_rows({{1, 2}, {3, 4}})) == -2.0);
  CHECK(det_cofactor(DenseMatrix::from_rows({{1, 2, 3}, {4, 5, 6}, {7, 8, 10}})) == -3.0);
  CHECK(det_cofactor(DenseMatrix::from_rows({{7.5}})) == 7.5);
}

TEST_CASE("det_cofactor: upper-triangular is the diagonal product") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    DenseMatrix a = testing::random_matrix(5, rng);
    double prod = 1.0;
    for (std::size_t i = 0; i < 5; ++i) {
      for (std::size_t j = 0; j < i; ++j) a(i, j) = 0.0;
      prod *= a(i, i);
    }
    CHECK(rel_diff(det_cofactor(a), prod) < 1e-12);
  }
}

TEST_CASE("det_cofactor: swapping two rows negates it") {
  std::mt19937_64 rng(8);
  // Small integers keep every product exact, so the negation is exact too.
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rng() % 5;
    DenseMatrix a(n, n);
    for (double& v : a.data()) v = static_cast<double>(static_cast<int>(rng() % 19) - 9);
    const double before = det_cofactor(a);
    const std::size_t r1 = rng() % n;
    const std::size_t r2 = (r1 + 1 + rng() % (n - 1)) % n;
    for (std::size_t c = 0; c < n; ++c) std::swap(a(r1, c), a(r2, c));
    CHECK(det_cofactor(a) == -before);
  }
  for (int trial = 0; trial < 30; ++trial) {
    DenseMatrix a = testing::random_matrix(6, rng);
    const double before = det_cofactor(a);
    for (std::size_t c = 0; c < 6; ++c) std::swap(a(0, c), a(4, c));
    CHECK(rel_diff(det_cofactor(a), -before) < 1e-12);
  }
}

TEST_CASE("det_cofactor: size limit") {
  CHECK_NOTHROW(det_cofactor(DenseMatrix::identity(10)));
  CHECK_THROWS_AS(det_cofactor(DenseMatrix::identity(11)), SizeLimitError);
}

TEST_CASE("logdet_lu agrees with condensation across kinds and sizes") {
  const double tol = significant_digits_tolerance(10);
  const MatrixKind kinds[] = {MatrixKind::uniform_random, MatrixKind::diagonally_dominant,
                              MatrixKind::scaled_correlation, MatrixKind::identity,
                              MatrixKind::singular_planted};
  for (std::uint64_t i = 0; i < 200; ++i) {
    const MatrixSpec spec{2 + i % 49, kinds[i % 5], 1000 + i};
    const DenseMatrix a = generate(spec);
    const LogDet lu = logdet_lu(a);
    const LogDet mc = logdet_condensation(a);
    CAPTURE(spec.size);
    CAPTURE(to_string(spec.kind));
    CHECK(logdet_agrees(lu, mc, tol));
  }
}
