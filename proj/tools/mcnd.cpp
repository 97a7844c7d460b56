// mcnd: generate matrices, compute log-determinants, run and summarize
// benchmark sweeps.
//
// Exit codes: 0 success, 1 usage error, 2 I/O or format error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mcond/bench.hpp"
#include "mcond/errors.hpp"
#include "mcond/matrix.hpp"

namespace {

constexpr int kUsageError = 1;
constexpr int kIoError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int cmd_gen(std::size_t size, const std::string& kind, std::uint64_t seed,
            const std::string& out) {
  if (size == 0) throw UsageError("invalid size: --size must be >= 1");
  mcond::MatrixKind k;
  try {
    k = mcond::parse_matrix_kind(kind);
  } catch (const mcond::InvalidSpec& e) {
    throw UsageError(e.what());
  }
  const mcond::DenseMatrix m = mcond::generate({size, k, seed});
  const std::filesystem::path path(out);
  if (path.extension() == ".csv") {
    std::ofstream f(path);
    if (!f) throw mcond::FormatError("cannot open " + out + " for writing");
    f << mcond::to_csv(m);
  } else {
    mcond::write_matrix(m, path);
  }
  return 0;
}

int cmd_logdet(const std::string& in, const std::string& algorithm, std::size_t workers) {
  mcond::Algorithm alg;
  try {
    alg = mcond::parse_algorithm(algorithm);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string(e.what()) +
                     " (expected mc-serial, mc-parallel, ge-serial or ge-parallel)");
  }
  if (workers == 0) throw UsageError("--workers must be >= 1");
  const mcond::DenseMatrix a = mcond::load_matrix(in);
  if (!a.square()) throw mcond::FormatError(in + ": matrix is not square");
  if (!mcond::is_serial(alg) && workers > a.rows()) {
    throw UsageError("--workers must not exceed the matrix size");
  }

  const auto e = mcond::execute(alg, a, workers, mcond::ParallelOptions::from_env());
  const auto& s = e.stats;
  std::cout << "algorithm=" << mcond::to_string(alg) << " n=" << a.rows()
            << " p=" << (mcond::is_serial(alg) ? 1 : workers) << '\n';
  std::cout << mcond::format_logdet(e.logdet) << '\n';
  std::cout << "status=" << (e.logdet.is_singular() ? "singular" : "ok") << '\n';
  char timing[256];
  std::snprintf(timing, sizeof timing,
                "scatter_s=%.6g comm_s=%.6g compute_s=%.6g total_s=%.6g wall_s=%.6g",
                s.scatter_seconds, s.comm_seconds, s.compute_seconds, s.total_seconds,
                s.wall_seconds);
  std::cout << "broadcasts=" << s.broadcasts << " broadcast_bytes=" << s.broadcast_bytes
            << " pivot_search_msgs=" << s.pivot_search_msgs << '\n'
            << timing << '\n';
  return 0;
}

int cmd_bench(mcond::BenchConfig config, const std::string& kind, const std::string& out) {
  if (config.repeats == 0) throw UsageError("--repeats must be >= 1");
  try {
    config.kind = mcond::parse_matrix_kind(kind);
  } catch (const mcond::InvalidSpec& e) {
    throw UsageError(e.what());
  }
  for (std::size_t n : config.sizes) {
    if (n == 0) throw UsageError("invalid size: sizes must be >= 1");
  }
  config.options = mcond::ParallelOptions::from_env();
  const mcond::BenchOutput result = mcond::run_bench(config);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  if (out.empty() || out == "-") {
    mcond::write_bench_csv(std::cout, result);
  } else {
    std::ofstream f(out);
    if (!f) throw mcond::FormatError("cannot open " + out + " for writing");
    mcond::write_bench_csv(f, result);
  }
  return 0;
}

int cmd_report(const std::string& in, const std::string& out) {
  std::ifstream f(in);
  if (!f) throw mcond::FormatError("cannot open " + in);
  std::ostringstream text;
  text << f.rdbuf();
  const auto records = mcond::parse_bench_csv(text.str());
  const std::string rendered = mcond::render_report(mcond::build_report(records));
  if (out.empty() || out == "-") {
    std::cout << rendered;
  } else {
    std::ofstream o(out);
    if (!o) throw mcond::FormatError("cannot open " + out + " for writing");
    o << rendered;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Log-determinants of dense matrices by parallel matrix condensation"};
  app.require_subcommand(1);

  std::size_t gen_size = 0;
  std::string gen_kind = "uniform";
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Generate a matrix file");
  gen->add_option("--size", gen_size, "Matrix size N")->required();
  gen->add_option("--kind", gen_kind,
                  "uniform | diag-dominant | scaled-correlation | identity | singular");
  gen->add_option("--seed", gen_seed, "Generator seed");
  gen->add_option("--out", gen_out, "Output path (.csv for CSV, otherwise binary)")->required();

  std::string ld_in;
  std::string ld_alg = "mc-serial";
  std::size_t ld_workers = 1;
  auto* logdet = app.add_subcommand("logdet", "Compute the log-determinant of a matrix file");
  logdet->add_option("--in", ld_in, "Matrix file (.csv or binary)")->required();
  logdet->add_option("--algorithm", ld_alg,
                     "mc-serial | mc-parallel | ge-serial | ge-parallel");
  logdet->add_option("--workers", ld_workers, "Worker count for parallel algorithms");

  mcond::BenchConfig bench_cfg;
  std::string bench_kind = "uniform";
  std::string bench_out;
  auto* bench = app.add_subcommand("bench", "Run a benchmark sweep and write CSV");
  bench->add_option("--sizes", bench_cfg.sizes, "Matrix sizes")->delimiter(',');
  bench->add_option("--workers", bench_cfg.workers, "Worker counts")->delimiter(',');
  bench->add_option("--repeats", bench_cfg.repeats, "Runs per configuration");
  bench->add_option("--kind", bench_kind, "Matrix kind");
  bench->add_option("--seed", bench_cfg.seed, "Generator seed");
  bench->add_option("--out", bench_out, "Output CSV (default stdout)");

  std::string rep_in;
  std::string rep_out;
  auto* report = app.add_subcommand("report", "Summarize a benchmark CSV");
  report->add_option("--in", rep_in, "Benchmark CSV")->required();
  report->add_option("--out", rep_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*gen) return cmd_gen(gen_size, gen_kind, gen_seed, gen_out);
    if (*logdet) return cmd_logdet(ld_in, ld_alg, ld_workers);
    if (*bench) return cmd_bench(bench_cfg, bench_kind, bench_out);
    if (*report) return cmd_report(rep_in, rep_out);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const mcond::FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoError;
  }
  return kUsageError;
}
