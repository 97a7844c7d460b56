#pragma once

#include <stdexcept>

namespace mcond {

/// A MatrixSpec that cannot be generated (size 0).
struct InvalidSpec : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Malformed matrix file, CSV, or benchmark CSV.
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Reference condensation asked to divide by a zero pivot.
struct ZeroPivotError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Cofactor expansion refused for matrices beyond its factorial budget.
struct SizeLimitError : std::length_error {
  using std::length_error::length_error;
};

/// Worker count incompatible with the matrix size.
struct InvalidPlan : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A worker left a parallel run early; no partial result is produced.
struct WorkerFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mcond
