#pragma once

// In-process message-passing runtime: P shared-nothing workers, one thread
// each, exchanging data only through counted collectives.
//
// Phase timings are kept on per-worker virtual clocks. Compute advances a
// worker's clock by its own thread CPU time; a collective completes at the
// latest arrival plus the measured synchronization latency and payload copy
// cost. The timings therefore model one core per worker even when the host
// has fewer cores than workers. Wall time is reported alongside.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace mcond {

struct CommStats {
  std::uint64_t broadcasts = 0;
  std::uint64_t broadcast_bytes = 0;
  std::uint64_t pivot_search_msgs = 0;
  std::uint64_t gathers = 0;
  std::uint64_t gather_bytes = 0;
  std::uint64_t reductions = 0;
  std::uint64_t scatter_bytes = 0;
  /// Values carried by each broadcast, in order (pivot index excluded).
  std::vector<std::size_t> broadcast_lengths;

  // Master-side timings; the run clock starts when data distribution ends.
  double scatter_seconds = 0.0;
  double comm_seconds = 0.0;
  double compute_seconds = 0.0;
  double total_seconds = 0.0;
  double wall_seconds = 0.0;
  /// Calibrated cost of one empty collective.
  double sync_latency_seconds = 0.0;
};

struct ParallelOptions {
  /// Upper bound on worker threads computing at the same time; 0 = no cap.
  unsigned max_threads = 0;

  /// Reads MCND_THREADS; unset, empty or invalid means no cap.
  static ParallelOptions from_env();
};

/// Payload of a broadcast. `abort` marks a one-byte abort token.
struct BroadcastMessage {
  std::vector<double> values;
  std::int64_t index = 0;
  bool abort = false;

  std::size_t wire_bytes() const {
    return abort ? 1 : values.size() * sizeof(double) + sizeof(std::int64_t);
  }
};

/// Pivot-search candidate: magnitude and global row index.
struct MaxLoc {
  double magnitude = 0.0;
  std::size_t index = 0;
  double value = 0.0;
};

/// CPU time consumed by the calling thread, in seconds.
double thread_cpu_seconds();

namespace detail {
struct Team;
}

/// Per-worker endpoint. Every worker must enter each collective exactly
/// once and in the same order.
class Communicator {
 public:
  std::size_t rank() const noexcept { return rank_; }
  std::size_t size() const noexcept;
  bool is_master() const noexcept { return rank_ == 0; }

  /// Master calls pack(w) for every worker w; each worker receives its part.
  /// Ends the distribution phase and starts the run clock.
  std::vector<double> scatter(
      const std::function<std::vector<double>(std::size_t)>& pack);

  /// `msg` is sent by `root` and overwritten everywhere else.
  void broadcast(BroadcastMessage& msg, std::size_t root);

  /// Collects one row per worker, in rank order, on the master. Other
  /// workers receive an empty result.
  std::vector<std::vector<double>> gather(std::span<const double> row);

  /// Element-wise sum over workers, accumulated in rank order; result on the
  /// master only.
  std::vector<double> reduce_sum(std::span<const double> values);

  /// Global max-magnitude candidate, ties to the lowest index; every worker
  /// gets the winner. Counted as pivot-search traffic.
  MaxLoc allreduce_maxloc(const MaxLoc& local);

  /// Attributes collective-free time so far to compute. Called implicitly by
  /// every collective.
  void tick();

 private:
  friend CommStats run_team(std::size_t, const ParallelOptions&,
                            const std::function<void(Communicator&)>&);
  Communicator(detail::Team& team, std::size_t rank);

  template <typename Exchange>
  void collective(Exchange&& exchange);

  detail::Team* team_;
  std::size_t rank_;
  std::uint64_t sequence_ = 0;
  double clock_ = 0.0;
  double cpu_mark_ = 0.0;
  double comm_ = 0.0;
};

/// Runs `worker` on p threads. Returns the master's statistics. If any
/// worker throws, every worker is released at its next collective and a
/// WorkerFailure naming the first failing rank is thrown; no result escapes.
CommStats run_team(std::size_t p, const ParallelOptions& options,
                   const std::function<void(Communicator&)>& worker);

}  // namespace mcond
