#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mcond/logdet.hpp"
#include "mcond/matrix.hpp"
#include "mcond/runtime.hpp"

namespace mcond {

struct RowRange {
  std::size_t start = 0;
  std::size_t length = 0;

  friend bool operator==(const RowRange&, const RowRange&) = default;
};

/// Contiguous block distribution of n rows over p workers, in worker order.
struct WorkerPlan {
  std::size_t n_rows = 0;
  std::vector<RowRange> assignments;

  std::size_t n_workers() const noexcept { return assignments.size(); }
};

/// The first n mod p workers get ceil(n/p) rows, the rest floor(n/p).
WorkerPlan plan_blocks(std::size_t n, std::size_t p);

/// Owner rank of each condensation step. Workers take turns in rank order,
/// round after round; a worker drops out of the rotation once it holds a
/// single row, so every worker keeps exactly one row for the final gather.
/// Length n - p.
std::vector<std::size_t> pivot_schedule(const WorkerPlan& plan);

struct WorkerLoad {
  std::uint64_t row_updates = 0;     ///< rows touched by outer-product updates
  std::uint64_t scalar_updates = 0;  ///< multiply-subtract operations
};

struct RunResult {
  LogDet logdet;
  CommStats stats;
  std::size_t n_workers = 0;
  std::vector<WorkerLoad> loads;
  /// Multiply-subtracts of the master's final elimination.
  std::uint64_t remainder_updates = 0;
};

/// Parallel matrix condensation over a block row distribution. Each owner
/// picks its pivot locally, so no pivot-search messages are exchanged. After
/// n - p steps the workers' last rows are gathered into a p x p matrix that
/// the master finishes with Gaussian elimination.
RunResult mc_parallel(const DenseMatrix& a, std::size_t p,
                      const ParallelOptions& options = ParallelOptions::from_env());

/// Parallel Gaussian elimination with partial pivoting over a cyclic row
/// distribution. Every column needs a global max-magnitude search.
RunResult ge_parallel(const DenseMatrix& a, std::size_t p,
                      const ParallelOptions& options = ParallelOptions::from_env());

}  // namespace mcond
