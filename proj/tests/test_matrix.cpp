#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

#include "doctest.h"
#include "mcond/baseline.hpp"
#include "mcond/errors.hpp"
#include "mcond/matrix.hpp"
#include "support.hpp"

using namespace mcond;

namespace {
constexpr MatrixKind kKinds[] = {MatrixKind::uniform_random, MatrixKind::diagonally_dominant,
                                 MatrixKind::scaled_correlation, MatrixKind::identity,
                                 MatrixKind::singular_planted};
}

TEST_CASE("DenseMatrix rejects non-finite values and bad shapes") {
  CHECK_THROWS_AS(DenseMatrix(2, 2, {1.0, NAN, 0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(DenseMatrix(1, 2, {1.0, INFINITY}), std::invalid_argument);
  CHECK_THROWS_AS(DenseMatrix(2, 2, {1.0, 2.0, 3.0}), std::invalid_argument);
  CHECK_THROWS_AS(DenseMatrix(0, 3), std::invalid_argument);
  const DenseMatrix m = DenseMatrix::from_rows({{1, 2, 3}, {4, 5, 6}});
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 3);
  CHECK(m(1, 0) == 4.0);
  CHECK_THROWS_AS(m.at(2, 0), std::out_of_range);
}

TEST_CASE("generate: identity") {
  for (std::uint64_t seed : {0ull, 99ull}) {
    CHECK(generate({3, MatrixKind::identity, seed}) == DenseMatrix::identity(3));
  }
}

TEST_CASE("generate: singular-planted has two equal rows and zero determinant") {
  const DenseMatrix m = generate({4, MatrixKind::singular_planted, 7});
  int equal_pairs = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      if (std::memcmp(m.row(i).data(), m.row(j).data(), 4 * sizeof(double)) == 0) ++equal_pairs;
    }
  }
  CHECK(equal_pairs == 1);
  // Elimination cancels the duplicate exactly; expansion only up to rounding.
  CHECK(logdet_lu(m).sign == 0);
  CHECK(std::abs(det_cofactor(m)) < 1e-15);
}

TEST_CASE("generate: deterministic for every kind") {
  for (MatrixKind kind : kKinds) {
    CAPTURE(to_string(kind));
    const DenseMatrix a = generate({5, kind, 42});
    const DenseMatrix b = generate({5, kind, 42});
    CHECK(bit_identical(a, b));
  }
  CHECK_FALSE(bit_identical(generate({5, MatrixKind::uniform_random, 42}),
                            generate({5, MatrixKind::uniform_random, 43})));
}

TEST_CASE("generate: value ranges per kind") {
  const DenseMatrix u = generate({40, MatrixKind::uniform_random, 3});
  for (double v : u.data()) CHECK((v >= -1.0 && v < 1.0));

  const DenseMatrix d = generate({40, MatrixKind::diagonally_dominant, 3});
  for (std::size_t i = 0; i < 40; ++i) {
    double off = 0.0;
    for (std::size_t j = 0; j < 40; ++j) {
      if (j != i) off += std::abs(d(i, j));
    }
    CHECK(std::abs(d(i, i)) > off);
  }
}

TEST_CASE("generate: scaled-correlation is symmetric with mixed magnitudes") {
  const std::size_t n = 30;
  const DenseMatrix c = generate({n, MatrixKind::scaled_correlation, 11});
  double lo = INFINITY, hi = 0.0;
  bool tiny_row = false, big_row = false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(c(i, j) == c(j, i));
      lo = std::min(lo, std::abs(c(i, j)));
      hi = std::max(hi, std::abs(c(i, j)));
    }
    CHECK(c(i, i) > 0.0);
    if (c(i, i) < 1e-9) tiny_row = true;
    if (c(i, i) > 2.0) big_row = true;
  }
  CHECK(tiny_row);
  CHECK(big_row);
  CHECK(lo < 2e-10);
  CHECK(hi <= 2.5);
  CHECK(hi > 2.0);
}

TEST_CASE("generate: size 0 is an invalid spec") {
  CHECK_THROWS_AS(generate({0, MatrixKind::identity, 1}), InvalidSpec);
}

TEST_CASE("swap_columns") {
  DenseMatrix m = DenseMatrix::from_rows({{1, 2}, {3, 4}});
  const DenseMatrix original = m;

  CHECK(swap_columns(m, 1, 1) == 1);
  CHECK(m == original);

  CHECK(swap_columns(m, 0, 1) == -1);
  CHECK(m == DenseMatrix::from_rows({{2, 1}, {4, 3}}));

  CHECK(swap_columns(m, 0, 1) == -1);
  CHECK(bit_identical(m, original));

  CHECK_THROWS_AS(swap_columns(m, 0, 2), std::out_of_range);
}

TEST_CASE("swap_columns negates the determinant (cofactor oracle, 4x4)") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    DenseMatrix m = testing::random_matrix(4, rng);
    const double before = det_cofactor(m);
    const std::size_t j1 = rng() % 4;
    const std::size_t j2 = (j1 + 1 + rng() % 3) % 4;
    const int parity = swap_columns(m, j1, j2);
    CHECK(parity == -1);
    CHECK(det_cofactor(m) == doctest::Approx(-before).epsilon(1e-12));
  }
}

TEST_CASE("swap_columns is an involution") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 9;
    DenseMatrix m = testing::random_matrix(n, rng);
    const DenseMatrix before = m;
    const std::size_t j1 = rng() % n, j2 = rng() % n;
    swap_columns(m, j1, j2);
    swap_columns(m, j1, j2);
    CHECK(bit_identical(m, before));
  }
}

TEST_CASE("binary format: 1x1 layout") {
  std::stringstream ss;
  write_matrix(DenseMatrix::from_rows({{2.5}}), ss);
  const std::string bytes = ss.str();
  REQUIRE(bytes.size() == 4 + 2 + 8 + 8 + 8);
  CHECK(bytes.substr(0, 4) == "MCND");
  CHECK(bytes[4] == 1);
  CHECK(bytes[5] == 0);
  CHECK(bytes[6] == 1);   // rows, little-endian
  CHECK(bytes[14] == 1);  // cols
  double v = 0.0;
  std::memcpy(&v, bytes.data() + 22, 8);
  CHECK(v == 2.5);
  CHECK(read_matrix(ss) == DenseMatrix::from_rows({{2.5}}));
}

TEST_CASE("binary format: round trip is bit-exact for every kind") {
  for (MatrixKind kind : kKinds) {
    for (std::size_t n : {1u, 2u, 17u}) {
      const DenseMatrix m = generate({n, kind, n * 31});
      std::stringstream ss;
      write_matrix(m, ss);
      CHECK(bit_identical(read_matrix(ss), m));
    }
  }
  // Signed zeros and extreme magnitudes survive too.
  const DenseMatrix odd = DenseMatrix::from_rows({{-0.0, 5e-324}, {1.7976931348623157e308, -1e-300}});
  std::stringstream ss;
  write_matrix(odd, ss);
  CHECK(bit_identical(read_matrix(ss), odd));
}

TEST_CASE("binary format: errors") {
  std::string good;
  {
    std::stringstream ss;
    write_matrix(DenseMatrix::from_rows({{1, 2}, {3, 4}}), ss);
    good = ss.str();
  }
  SUBCASE("bad magic") {
    std::string bad = good;
    bad[0] = 'X';
    std::stringstream ss(bad);
    CHECK_THROWS_AS(read_matrix(ss), FormatError);
  }
  SUBCASE("truncated payload") {
    std::stringstream ss(good.substr(0, good.size() - 3));
    CHECK_THROWS_WITH_AS(read_matrix(ss), doctest::Contains("truncated"), FormatError);
  }
  SUBCASE("truncated header") {
    std::stringstream ss(good.substr(0, 10));
    CHECK_THROWS_AS(read_matrix(ss), FormatError);
  }
  SUBCASE("dimension overflow") {
    std::string bad = good;
    for (int i = 6; i < 22; ++i) bad[i] = static_cast<char>(0xff);
    std::stringstream ss(bad);
    CHECK_THROWS_WITH_AS(read_matrix(ss), doctest::Contains("overflow"), FormatError);
  }
  SUBCASE("wrong version") {
    std::string bad = good;
    bad[4] = 2;
    std::stringstream ss(bad);
    CHECK_THROWS_AS(read_matrix(ss), FormatError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(read_matrix(std::filesystem::path("/nonexistent/m.mcnd")), FormatError);
  }
}

TEST_CASE("CSV import and export") {
  CHECK(parse_csv("1,2\n3,4") == DenseMatrix::from_rows({{1, 2}, {3, 4}}));
  CHECK(parse_csv("1.5, -2e-3\r\n3,4\n\n") == DenseMatrix::from_rows({{1.5, -2e-3}, {3, 4}}));
  CHECK_THROWS_WITH_AS(parse_csv("1,2\n3\n"), doctest::Contains("line 2"), FormatError);
  CHECK_THROWS_AS(parse_csv("1,x\n"), FormatError);
  CHECK_THROWS_AS(parse_csv("1,,2\n"), FormatError);
  CHECK_THROWS_AS(parse_csv(""), FormatError);
  CHECK_THROWS_AS(parse_csv("nan,1\n1,1\n"), FormatError);

  const DenseMatrix m = generate({6, MatrixKind::scaled_correlation, 4});
  CHECK(bit_identical(parse_csv(to_csv(m)), m));
}

TEST_CASE("matrix kind names") {
  for (MatrixKind kind : kKinds) CHECK(parse_matrix_kind(to_string(kind)) == kind);
  CHECK(parse_matrix_kind("uniform") == MatrixKind::uniform_random);
  CHECK(parse_matrix_kind("singular") == MatrixKind::singular_planted);
  CHECK_THROWS_AS(parse_matrix_kind("hilbert"), InvalidSpec);
}
