#include "mcond/condense.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mcond/errors.hpp"
#include "mcond/kernel.hpp"

namespace mcond {

CondenseState::CondenseState(DenseMatrix a)
    : mat_(std::move(a)), n_cols_(mat_.cols()), rows_(mat_.rows()),
      col_order_(mat_.cols()) {
  if (!mat_.square()) throw std::invalid_argument("condensation needs a square matrix");
  std::iota(rows_.begin(), rows_.end(), std::size_t{0});
  std::iota(col_order_.begin(), col_order_.end(), std::size_t{0});
}

DenseMatrix CondenseState::active_submatrix() const {
  DenseMatrix out(rows_.size(), n_cols_);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto src = mat_.row(rows_[i]).first(n_cols_);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

LogDet CondenseState::finish() const {
  if (singular_) return LogDet::singular();
  if (rows_.size() != 1) {
    throw std::logic_error("finish() needs exactly one live row");
  }
  const double last = mat_(rows_.front(), 0);
  if (last == 0.0) return LogDet::singular();
  return {sign_acc_ * kernel::sign_of(last), log_acc_ + std::log(std::abs(last))};
}

std::optional<PivotChoice> select_pivot(const CondenseState& state,
                                        std::size_t pivot_row) {
  const auto live = state.active_rows();
  if (std::find(live.begin(), live.end(), pivot_row) == live.end()) {
    throw std::out_of_range("select_pivot: row is not active");
  }
  const auto values = state.matrix().row(pivot_row).first(state.active_cols());
  const std::size_t col = kernel::argmax_abs(values);
  if (col == values.size()) return std::nullopt;
  return PivotChoice{pivot_row, col, values[col]};
}

std::optional<PivotChoice> condense_step(CondenseState& s, std::size_t pivot_row) {
  if (s.singular_) return std::nullopt;
  if (s.n_cols_ < 2) throw std::logic_error("condense_step needs >= 2 live columns");
  const auto choice = select_pivot(s, pivot_row);
  if (!choice) {
    s.singular_ = true;
    return std::nullopt;
  }

  const std::size_t n = s.n_cols_;
  const std::size_t last = n - 1;
  const int swap_parity = choice->col == last ? 1 : -1;
  if (choice->col != last) {
    for (std::size_t r : s.rows_) std::swap(s.mat_(r, choice->col), s.mat_(r, last));
    std::swap(s.col_order_[choice->col], s.col_order_[last]);
  }

  const auto pos = std::find(s.rows_.begin(), s.rows_.end(), pivot_row);
  const std::size_t k_pos = static_cast<std::size_t>(pos - s.rows_.begin()) + 1;
  s.rows_.erase(pos);

  const auto prow = std::span<const double>(s.mat_.row(pivot_row)).first(n);
  for (std::size_t r : s.rows_) kernel::eliminate(s.mat_.row(r), prow);

  s.n_cols_ = last;
  s.log_acc_ += std::log(std::abs(choice->value));
  s.sign_acc_ *= kernel::step_sign(choice->value, k_pos, n, swap_parity);
  return choice;
}

DenseMatrix condense_once_reference(const DenseMatrix& a, std::size_t k,
                                    std::size_t l) {
  const std::size_t n = a.rows();
  if (!a.square() || n <= 2) {
    throw std::invalid_argument("reference condensation needs a square matrix with N > 2");
  }
  if (k >= n || l >= n) throw std::out_of_range("pivot index out of range");
  const double akl = a(k, l);
  if (akl == 0.0) throw ZeroPivotError("pivot a[k,l] is zero");

  auto det2 = [](double p, double q, double r, double s) { return p * s - q * r; };
  DenseMatrix b(n - 1, n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = 0; j + 1 < n; ++j) {
      if (i < k && j < l) {
        b(i, j) = det2(a(i, j), a(i, l), a(k, j), akl);
      } else if (i < k) {
        b(i, j) = det2(akl, a(k, j + 1), a(i, l), a(i, j + 1));
      } else if (j < l) {
        b(i, j) = det2(akl, a(k, j), a(i + 1, l), a(i + 1, j));
      } else {
        b(i, j) = det2(akl, a(k, j + 1), a(i + 1, l), a(i + 1, j + 1));
      }
    }
  }
  return b;
}

DenseMatrix factor_pivot(const DenseMatrix& a, std::size_t k, std::size_t l,
                         Factoring how) {
  if (k >= a.rows() || l >= a.cols()) throw std::out_of_range("pivot index out of range");
  const double akl = a(k, l);
  if (akl == 0.0) throw ZeroPivotError("pivot a[k,l] is zero");
  DenseMatrix out = a;
  if (how == Factoring::row) {
    for (double& v : out.row(k)) v /= akl;
  } else {
    for (std::size_t r = 0; r < out.rows(); ++r) out(r, l) /= akl;
  }
  out(k, l) = 1.0;
  return out;
}

LogDet logdet_condensation(DenseMatrix a, RowOrder order,
                           std::uint64_t& scalar_updates) {
  if (!a.square()) throw std::invalid_argument("log-determinant needs a square matrix");
  CondenseState state(std::move(a));
  scalar_updates = 0;
  while (state.active_rows().size() > 1) {
    const auto live = state.active_rows();
    const std::size_t pivot_row = order == RowOrder::top_down ? live.front() : live.back();
    const std::uint64_t m = live.size() - 1;
    if (!condense_step(state, pivot_row)) return LogDet::singular();
    scalar_updates += m * m;
  }
  return state.finish();
}

LogDet logdet_condensation(DenseMatrix a, RowOrder order) {
  std::uint64_t ignored = 0;
  return logdet_condensation(std::move(a), order, ignored);
}

}  // namespace mcond
