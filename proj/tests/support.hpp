#pragma once

// Shared helpers for the test suites.

#include <cstdint>
#include <optional>
#include <random>

#include "mcond/condense.hpp"
#include "mcond/matrix.hpp"

namespace mcond::testing {

/// Uniform [-1, 1) n x n matrix from a test-local RNG.
DenseMatrix random_matrix(std::size_t n, std::mt19937_64& rng);

/// Relative difference |a - b| / max(|a|, |b|), 0 when both are zero.
double rel_diff(double a, double b);

/// Determinant from a LogDet, for comparison with the cofactor oracle.
double to_det(const LogDet& d);

/// The pivot rule of earlier condensation variants: the nonzero live entry
/// closest to 1 in magnitude. Kept as a foil; the engine never uses it.
std::optional<PivotChoice> select_pivot_closest_to_one(const CondenseState& state,
                                                       std::size_t pivot_row);

}  // namespace mcond::testing
