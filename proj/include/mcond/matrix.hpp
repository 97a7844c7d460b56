#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mcond {

/// Row-major dense matrix of doubles.
///
/// Every value admitted through the constructors is finite. Element access
/// through operator() is unchecked; kernels that mutate in place are expected
/// to keep values finite themselves.
class DenseMatrix {
 public:
  /// Zero-filled rows x cols matrix. Both dimensions must be positive.
  DenseMatrix(std::size_t rows, std::size_t cols);
  /// Takes ownership of row-major `values`; throws on size mismatch or
  /// non-finite entries.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  static DenseMatrix identity(std::size_t n);
  /// Builds from nested rows, e.g. {{1, 2}, {3, 4}}.
  static DenseMatrix from_rows(
      std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t r, std::size_t c) noexcept {
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const noexcept {
    return data_[r * cols_ + c];
  }

  /// Bounds-checked access.
  double at(std::size_t r, std::size_t c) const;

  std::span<double> row(std::size_t r) noexcept {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

/// Bitwise comparison of two matrices (distinguishes -0.0 from 0.0).
bool bit_identical(const DenseMatrix& a, const DenseMatrix& b);

enum class MatrixKind {
  uniform_random,
  diagonally_dominant,
  scaled_correlation,
  identity,
  singular_planted,
};

std::string_view to_string(MatrixKind kind);
/// Accepts the canonical names plus the short CLI aliases
/// (uniform, diag-dominant, correlation, singular).
MatrixKind parse_matrix_kind(std::string_view name);

struct MatrixSpec {
  std::size_t size = 0;
  MatrixKind kind = MatrixKind::uniform_random;
  std::uint64_t seed = 0;
};

/// Deterministic generator: equal specs give bit-identical matrices.
DenseMatrix generate(const MatrixSpec& spec);

/// Exchanges columns j1 and j2 in place. Returns the determinant sign
/// effect: -1 for a real exchange, +1 when j1 == j2.
int swap_columns(DenseMatrix& m, std::size_t j1, std::size_t j2);

// Binary format: "MCND", u16 version, u64 rows, u64 cols, then row-major
// f64 payload. All little-endian.
inline constexpr std::uint16_t kFormatVersion = 1;

void write_matrix(const DenseMatrix& m, std::ostream& out);
DenseMatrix read_matrix(std::istream& in);
void write_matrix(const DenseMatrix& m, const std::filesystem::path& path);
DenseMatrix read_matrix(const std::filesystem::path& path);

/// One row per line, comma-separated, no header.
DenseMatrix parse_csv(std::string_view text);
std::string to_csv(const DenseMatrix& m);
DenseMatrix read_csv(const std::filesystem::path& path);

/// Picks the format from the extension: ".csv" is CSV, anything else binary.
DenseMatrix load_matrix(const std::filesystem::path& path);

}  // namespace mcond
