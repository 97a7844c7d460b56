#include "mcond/bench.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include "mcond/baseline.hpp"
#include "mcond/condense.hpp"
#include "mcond/errors.hpp"
#include "mcond/parallel.hpp"

namespace mcond {

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::mc_serial: return "mc-serial";
    case Algorithm::mc_parallel: return "mc-parallel";
    case Algorithm::ge_serial: return "ge-serial";
    case Algorithm::ge_parallel: return "ge-parallel";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  for (Algorithm a : kAllAlgorithms) {
    if (to_string(a) == name) return a;
  }
  throw std::invalid_argument("unknown algorithm: " + std::string(name));
}

bool is_serial(Algorithm a) {
  return a == Algorithm::mc_serial || a == Algorithm::ge_serial;
}

Execution execute(Algorithm algorithm, const DenseMatrix& a, std::size_t p,
                  const ParallelOptions& options) {
  Execution out;
  if (is_serial(algorithm)) {
    DenseMatrix copy = a;
    const double t0 = thread_cpu_seconds();
    out.logdet = algorithm == Algorithm::mc_serial ? logdet_condensation(std::move(copy))
                                                   : logdet_lu(std::move(copy));
    out.stats.total_seconds = thread_cpu_seconds() - t0;
    out.stats.compute_seconds = out.stats.total_seconds;
    return out;
  }
  RunResult run = algorithm == Algorithm::mc_parallel ? mc_parallel(a, p, options)
                                                      : ge_parallel(a, p, options);
  out.logdet = run.logdet;
  out.stats = std::move(run.stats);
  return out;
}

BenchOutput run_bench(const BenchConfig& config) {
  if (config.repeats == 0) throw std::invalid_argument("repeats must be >= 1");
  BenchOutput out;
  for (std::size_t n : config.sizes) {
    const DenseMatrix a = generate({n, config.kind, config.seed});
    for (std::size_t p : config.workers) {
      if (p == 0 || p > n) {
        out.warnings.push_back("skipped n=" + std::to_string(n) + " p=" + std::to_string(p) +
                               ": worker count must be in [1, n]");
        continue;
      }
      for (Algorithm alg : config.algorithms) {
        for (std::size_t run = 0; run < config.repeats; ++run) {
          const Execution e = execute(alg, a, p, config.options);
          out.records.push_back({alg, n, p, run, e.stats.total_seconds,
                                 e.stats.scatter_seconds, e.stats.comm_seconds,
                                 e.logdet.sign, e.logdet.log_abs});
        }
      }
    }
  }
  return out;
}

namespace {

std::string fmt_double(double v, int digits) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw FormatError("line " + std::to_string(line) + ": " + what);
}

template <typename T>
T parse_unsigned(std::string_view s, std::size_t line, const char* field) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    fail(line, std::string("bad ") + field + " '" + std::string(s) + "'");
  }
  return v;
}

double parse_real(std::string_view s, std::size_t line, const char* field) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || std::isnan(v)) {
    fail(line, std::string("bad ") + field + " '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::string format_bench_row(const BenchRecord& r) {
  std::string row(to_string(r.algorithm));
  row += ',' + std::to_string(r.n) + ',' + std::to_string(r.p) + ',' + std::to_string(r.run);
  row += ',' + fmt_double(r.total_s, 9) + ',' + fmt_double(r.scatter_s, 9) + ',' +
         fmt_double(r.comm_s, 9);
  row += ',' + std::to_string(r.sign) + ',' + fmt_double(r.logabs, 17);
  return row;
}

void write_bench_csv(std::ostream& out, const BenchOutput& bench) {
  out << kBenchCsvHeader << '\n';
  for (const auto& w : bench.warnings) out << "# warning: " << w << '\n';
  for (const auto& r : bench.records) out << format_bench_row(r) << '\n';
}

std::vector<BenchRecord> parse_bench_csv(std::string_view text) {
  std::vector<BenchRecord> records;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != kBenchCsvHeader) {
        fail(line_no, "expected header '" + std::string(kBenchCsvHeader) + "'");
      }
      header_seen = true;
      continue;
    }

    std::vector<std::string_view> f;
    while (true) {
      const auto comma = line.find(',');
      f.push_back(line.substr(0, comma));
      if (comma == std::string_view::npos) break;
      line = line.substr(comma + 1);
    }
    if (f.size() != 9) {
      fail(line_no, "expected 9 fields, got " + std::to_string(f.size()));
    }
    BenchRecord r;
    try {
      r.algorithm = parse_algorithm(f[0]);
    } catch (const std::invalid_argument&) {
      fail(line_no, "unknown algorithm '" + std::string(f[0]) + "'");
    }
    r.n = parse_unsigned<std::size_t>(f[1], line_no, "n");
    r.p = parse_unsigned<std::size_t>(f[2], line_no, "p");
    r.run = parse_unsigned<std::size_t>(f[3], line_no, "run");
    r.total_s = parse_real(f[4], line_no, "total_s");
    r.scatter_s = parse_real(f[5], line_no, "scatter_s");
    r.comm_s = parse_real(f[6], line_no, "comm_s");
    std::string_view sign = f[7];
    if (!sign.empty() && sign.front() == '+') sign.remove_prefix(1);
    if (sign == "1") {
      r.sign = 1;
    } else if (sign == "-1") {
      r.sign = -1;
    } else if (sign == "0") {
      r.sign = 0;
    } else {
      fail(line_no, "bad sign '" + std::string(f[7]) + "'");
    }
    r.logabs = parse_real(f[8], line_no, "logabs");
    if (r.n == 0 || r.p == 0) fail(line_no, "n and p must be positive");
    if (r.total_s < 0 || r.scatter_s < 0 || r.comm_s < 0) {
      fail(line_no, "timings must be non-negative");
    }
    records.push_back(r);
  }
  if (!header_seen) throw FormatError("line 1: missing header");
  return records;
}

Report build_report(const std::vector<BenchRecord>& records) {
  struct Acc {
    double total = 0.0, scatter = 0.0, comm = 0.0;
    std::size_t runs = 0;
  };
  // Key order: algorithm, n, p. std::map keeps the output deterministic.
  std::map<std::tuple<int, std::size_t, std::size_t>, Acc> groups;
  for (const auto& r : records) {
    Acc& g = groups[{static_cast<int>(r.algorithm), r.n, r.p}];
    g.total += r.total_s;
    g.scatter += r.scatter_s;
    g.comm += r.comm_s;
    ++g.runs;
  }

  std::map<std::size_t, double> fastest_serial;
  for (const auto& [key, g] : groups) {
    const auto& [alg, n, p] = key;
    if (p != 1) continue;
    const double mean = g.total / static_cast<double>(g.runs);
    auto [it, inserted] = fastest_serial.emplace(n, mean);
    if (!inserted && mean < it->second) it->second = mean;
  }

  Report report;
  struct Avg {
    double speedup = 0.0;
    std::size_t speedup_count = 0;
    double scatter = 0.0, comm = 0.0;
    std::size_t sizes = 0;
  };
  std::map<std::pair<int, std::size_t>, Avg> per_alg_p;
  for (const auto& [key, g] : groups) {
    const auto& [alg, n, p] = key;
    const double runs = static_cast<double>(g.runs);
    const double mean = g.total / runs;
    const auto ts = fastest_serial.find(n);
    const double speedup = ts == fastest_serial.end() ? std::nan("") : ts->second / mean;
    report.per_size.push_back({static_cast<Algorithm>(alg), n, p, g.runs, mean, speedup});

    Avg& a = per_alg_p[{alg, p}];
    if (!std::isnan(speedup)) {
      a.speedup += speedup;
      ++a.speedup_count;
    }
    a.scatter += g.scatter / runs;
    a.comm += g.comm / runs;
    ++a.sizes;
  }
  for (const auto& [key, a] : per_alg_p) {
    const auto alg = static_cast<Algorithm>(key.first);
    const double s = a.speedup_count ? a.speedup / static_cast<double>(a.speedup_count)
                                     : std::nan("");
    report.average.push_back({alg, key.second, s});
    const double sizes = static_cast<double>(a.sizes);
    report.comm.push_back({alg, key.second, a.scatter / sizes, a.comm / sizes});
  }
  return report;
}

std::string render_report(const Report& report) {
  auto num = [](double v) { return std::isnan(v) ? std::string("n/a") : fmt_double(v, 6); };
  std::string out;
  out += "# speedup per size (T_s / T_p)\n";
  out += "algorithm,n,p,runs,mean_total_s,speedup\n";
  for (const auto& r : report.per_size) {
    out += std::string(to_string(r.algorithm)) + ',' + std::to_string(r.n) + ',' +
           std::to_string(r.p) + ',' + std::to_string(r.runs) + ',' + num(r.mean_total_s) +
           ',' + num(r.speedup) + '\n';
  }
  out += "\n# average speedup across sizes\n";
  out += "algorithm,p,mean_speedup\n";
  for (const auto& r : report.average) {
    out += std::string(to_string(r.algorithm)) + ',' + std::to_string(r.p) + ',' +
           num(r.mean_speedup) + '\n';
  }
  out += "\n# average data distribution and communication time across sizes\n";
  out += "algorithm,p,mean_scatter_s,mean_comm_s\n";
  for (const auto& r : report.comm) {
    out += std::string(to_string(r.algorithm)) + ',' + std::to_string(r.p) + ',' +
           num(r.mean_scatter_s) + ',' + num(r.mean_comm_s) + '\n';
  }
  return out;
}

}  // namespace mcond
