#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mcond/logdet.hpp"
#include "mcond/matrix.hpp"
#include "mcond/runtime.hpp"

namespace mcond {

enum class Algorithm { mc_serial, mc_parallel, ge_serial, ge_parallel };

inline constexpr std::array<Algorithm, 4> kAllAlgorithms = {
    Algorithm::mc_serial, Algorithm::mc_parallel, Algorithm::ge_serial,
    Algorithm::ge_parallel};

std::string_view to_string(Algorithm a);
/// Throws std::invalid_argument on an unknown name.
Algorithm parse_algorithm(std::string_view name);
bool is_serial(Algorithm a);

struct Execution {
  LogDet logdet;
  CommStats stats;  ///< counters stay zero for the serial algorithms
};

/// Runs one algorithm. Serial algorithms ignore `p` and are timed on the
/// calling thread's CPU clock, the same clock the parallel runtime uses for
/// compute.
Execution execute(Algorithm algorithm, const DenseMatrix& a, std::size_t p,
                  const ParallelOptions& options);

struct BenchRecord {
  Algorithm algorithm = Algorithm::mc_serial;
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t run = 0;
  double total_s = 0.0;    ///< excludes data distribution
  double scatter_s = 0.0;
  double comm_s = 0.0;
  int sign = 0;
  double logabs = 0.0;
};

inline constexpr std::string_view kBenchCsvHeader =
    "algorithm,n,p,run,total_s,scatter_s,comm_s,sign,logabs";

struct BenchConfig {
  std::vector<std::size_t> sizes = {256, 512, 1024, 2048};
  std::vector<std::size_t> workers = {1, 2, 4, 8};
  std::size_t repeats = 5;
  MatrixKind kind = MatrixKind::uniform_random;
  std::uint64_t seed = 1;
  std::vector<Algorithm> algorithms{kAllAlgorithms.begin(), kAllAlgorithms.end()};
  ParallelOptions options;
};

struct BenchOutput {
  std::vector<BenchRecord> records;
  /// One note per (n, p) combination skipped because p > n.
  std::vector<std::string> warnings;
};

/// Strictly sequential sweep: one record per (algorithm, n, p, run).
BenchOutput run_bench(const BenchConfig& config);

std::string format_bench_row(const BenchRecord& r);
/// Header, then records; warnings become '#'-prefixed comment rows.
void write_bench_csv(std::ostream& out, const BenchOutput& bench);
/// Parses bench CSV. Skips blank and '#' lines. Throws FormatError naming
/// the offending line.
std::vector<BenchRecord> parse_bench_csv(std::string_view text);

struct SpeedupRow {
  Algorithm algorithm;
  std::size_t n;
  std::size_t p;
  std::size_t runs;
  double mean_total_s;
  double speedup;  ///< NaN when size n has no single-worker timing
};

struct AverageSpeedupRow {
  Algorithm algorithm;
  std::size_t p;
  double mean_speedup;
};

struct CommSummaryRow {
  Algorithm algorithm;
  std::size_t p;
  double mean_scatter_s;
  double mean_comm_s;
};

/// Speedup T_s / T_p, where T_s is the fastest mean single-worker time of
/// any algorithm at that size and T_p the mean time of the row's algorithm.
struct Report {
  std::vector<SpeedupRow> per_size;
  std::vector<AverageSpeedupRow> average;
  std::vector<CommSummaryRow> comm;
};

Report build_report(const std::vector<BenchRecord>& records);
std::string render_report(const Report& report);

}  // namespace mcond
