#pragma once

#include <cstdint>

#include "mcond/logdet.hpp"
#include "mcond/matrix.hpp"

namespace mcond {

/// Gaussian elimination with partial pivoting. The pivot of each column is
/// the live row of largest magnitude, ties to the lowest original row index.
/// Rows are never moved; the pivot sequence's permutation parity gives the
/// sign. An all-zero live column yields LogDet::singular().
LogDet logdet_lu(DenseMatrix a);
LogDet logdet_lu(DenseMatrix a, std::uint64_t& scalar_updates);

inline constexpr std::size_t kCofactorMaxSize = 10;

/// Laplace expansion along the first row. Factorial cost; refuses N > 10.
double det_cofactor(const DenseMatrix& a);

}  // namespace mcond
