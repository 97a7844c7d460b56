#pragma once

// Inner loops shared by the serial condensation kernel and the parallel
// workers. Both paths must call these so a single-worker run reproduces the
// serial result bit for bit.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>

namespace mcond::kernel {

/// Index of the entry with the largest magnitude; ties go to the lowest
/// index. Returns values.size() when every entry is exactly zero.
inline std::size_t argmax_abs(std::span<const double> values) {
  std::size_t best = values.size();
  double best_abs = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double a = std::abs(values[i]);
    if (a > best_abs) {
      best_abs = a;
      best = i;
    }
  }
  return best;
}

/// One outer-product row update. `pivot_row` holds the active columns with
/// the pivot in its last slot; `row` is updated over the leading
/// pivot_row.size() - 1 entries:
///   row[c] -= (row[last] / pivot) * pivot_row[c]
/// The multiplier is the pivot column entry with the pivot factored out.
inline void eliminate(std::span<double> row, std::span<const double> pivot_row) {
  const std::size_t last = pivot_row.size() - 1;
  const double m = row[last] / pivot_row[last];
  for (std::size_t c = 0; c < last; ++c) row[c] -= m * pivot_row[c];
}

inline int sign_of(double v) { return v > 0.0 ? 1 : v < 0.0 ? -1 : 0; }

/// Sign contributed by one condensation step: pivot sign, cofactor position
/// (-1)^(k_pos + n) with 1-based row position k_pos among n active rows, and
/// the column exchange parity.
inline int step_sign(double pivot, std::size_t k_pos, std::size_t n,
                     int swap_parity) {
  const int cofactor = ((k_pos + n) % 2 == 0) ? 1 : -1;
  return sign_of(pivot) * cofactor * swap_parity;
}

}  // namespace mcond::kernel
