#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mcond/logdet.hpp"
#include "mcond/matrix.hpp"

namespace mcond {

struct PivotChoice {
  std::size_t row = 0;  ///< matrix row index of the pivot row
  std::size_t col = 0;  ///< storage column of the pivot before the exchange
  double value = 0.0;
};

/// In-place condensation of a square matrix.
///
/// The live submatrix is the rows listed in active_rows() restricted to the
/// first active_cols() storage columns. Each step exchanges the pivot column
/// with the last live column, so live columns stay a contiguous prefix of
/// every row. column_order() maps storage positions back to the columns of
/// the input.
class CondenseState {
 public:
  explicit CondenseState(DenseMatrix a);

  const DenseMatrix& matrix() const noexcept { return mat_; }
  std::size_t active_cols() const noexcept { return n_cols_; }
  std::span<const std::size_t> active_rows() const noexcept { return rows_; }
  std::span<const std::size_t> column_order() const noexcept { return col_order_; }
  double log_acc() const noexcept { return log_acc_; }
  int sign_acc() const noexcept { return sign_acc_; }
  bool singular() const noexcept { return singular_; }

  /// Copy of the live submatrix in active-row / storage-column order.
  DenseMatrix active_submatrix() const;

  /// Combines the accumulators with the remaining 1x1 entry. Requires a
  /// single live row unless the state is already singular.
  LogDet finish() const;

 private:
  friend std::optional<PivotChoice> condense_step(CondenseState&, std::size_t);

  DenseMatrix mat_;
  std::size_t n_cols_;
  std::vector<std::size_t> rows_;
  std::vector<std::size_t> col_order_;
  double log_acc_ = 0.0;
  int sign_acc_ = 1;
  bool singular_ = false;
};

/// Max-magnitude pivot among the live columns of `pivot_row`, ties to the
/// lowest column. nullopt when the live row is exactly zero (det = 0).
std::optional<PivotChoice> select_pivot(const CondenseState& state,
                                        std::size_t pivot_row);

/// One condensation step anchored on `pivot_row` (a live row, with at least
/// two live columns). Returns the pivot used, or nullopt after marking the
/// state singular.
std::optional<PivotChoice> condense_step(CondenseState& state,
                                         std::size_t pivot_row);

/// Literal four-quadrant construction of the (N-1)x(N-1) matrix B whose
/// determinant is det(A) * a[k,l]^(N-2). Testing reference only: no column
/// exchange, no in-place update. Requires N > 2 and a[k,l] != 0.
DenseMatrix condense_once_reference(const DenseMatrix& a, std::size_t k,
                                    std::size_t l);

enum class Factoring { row, column };

/// A* : `a` with a[k,l] divided out of row k or of column l, so that
/// det(A) = a[k,l] * det(A*) and A*[k,l] = 1.
DenseMatrix factor_pivot(const DenseMatrix& a, std::size_t k, std::size_t l,
                         Factoring how);

enum class RowOrder { top_down, bottom_up };

/// Serial log-determinant by repeated condensation down to 1x1.
LogDet logdet_condensation(DenseMatrix a, RowOrder order = RowOrder::top_down);

/// Same, also reporting the number of scalar multiply-subtract updates.
LogDet logdet_condensation(DenseMatrix a, RowOrder order,
                           std::uint64_t& scalar_updates);

}  // namespace mcond
