#include "support.hpp"

#include <algorithm>
#include <cmath>

namespace mcond::testing {

DenseMatrix random_matrix(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  DenseMatrix m(n, n);
  for (double& v : m.data()) v = dist(rng);
  return m;
}

double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

double to_det(const LogDet& d) {
  return d.sign == 0 ? 0.0 : d.sign * std::exp(d.log_abs);
}

std::optional<PivotChoice> select_pivot_closest_to_one(const CondenseState& state,
                                                       std::size_t pivot_row) {
  const auto values = state.matrix().row(pivot_row).first(state.active_cols());
  std::optional<PivotChoice> best;
  double best_gap = 0.0;
  for (std::size_t c = 0; c < values.size(); ++c) {
    if (values[c] == 0.0) continue;
    const double gap = std::abs(std::abs(values[c]) - 1.0);
    if (!best || gap < best_gap) {
      best = PivotChoice{pivot_row, c, values[c]};
      best_gap = gap;
    }
  }
  return best;
}

}  // namespace mcond::testing
