#include "mcond/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "mcond/baseline.hpp"
#include "mcond/errors.hpp"
#include "mcond/kernel.hpp"

namespace mcond {

namespace {

void check_run(const DenseMatrix& a, std::size_t p) {
  if (!a.square()) throw std::invalid_argument("log-determinant needs a square matrix");
  if (p == 0 || p > a.rows()) {
    throw InvalidPlan("worker count must be in [1, N]; got p=" + std::to_string(p) +
                      " for N=" + std::to_string(a.rows()));
  }
}

void swap_live_columns(DenseMatrix& local, std::size_t first_live, std::size_t j1,
                       std::size_t j2) {
  if (j1 == j2) return;
  for (std::size_t r = first_live; r < local.rows(); ++r) std::swap(local(r, j1), local(r, j2));
}

LogDet combine(double log_sum, double negatives, const LogDet& remainder) {
  if (remainder.is_singular()) return LogDet::singular();
  const auto neg = static_cast<std::uint64_t>(negatives);
  const int sign = (neg % 2 == 0 ? 1 : -1) * remainder.sign;
  return {sign, log_sum + remainder.log_abs};
}

}  // namespace

WorkerPlan plan_blocks(std::size_t n, std::size_t p) {
  if (p == 0 || p > n) {
    throw InvalidPlan("invalid plan: need 1 <= p <= n (n=" + std::to_string(n) +
                      ", p=" + std::to_string(p) + ")");
  }
  WorkerPlan plan{n, {}};
  plan.assignments.reserve(p);
  const std::size_t base = n / p;
  const std::size_t extra = n % p;
  std::size_t start = 0;
  for (std::size_t w = 0; w < p; ++w) {
    const std::size_t len = base + (w < extra ? 1 : 0);
    plan.assignments.push_back({start, len});
    start += len;
  }
  return plan;
}

std::vector<std::size_t> pivot_schedule(const WorkerPlan& plan) {
  std::size_t longest = 0;
  for (const auto& r : plan.assignments) longest = std::max(longest, r.length);
  std::vector<std::size_t> owners;
  owners.reserve(plan.n_rows - plan.n_workers());
  for (std::size_t round = 0; round + 1 < longest; ++round) {
    for (std::size_t w = 0; w < plan.n_workers(); ++w) {
      if (plan.assignments[w].length - 1 > round) owners.push_back(w);
    }
  }
  return owners;
}

RunResult mc_parallel(const DenseMatrix& a, std::size_t p, const ParallelOptions& options) {
  check_run(a, p);
  const std::size_t n = a.rows();
  const WorkerPlan plan = plan_blocks(n, p);
  const std::vector<std::size_t> schedule = pivot_schedule(plan);

  RunResult result;
  result.n_workers = p;
  result.loads.assign(p, {});

  auto worker = [&](Communicator& comm) {
    const std::size_t me = comm.rank();
    const std::size_t my_rows = plan.assignments[me].length;

    std::vector<double> block = comm.scatter([&](std::size_t w) {
      const RowRange r = plan.assignments[w];
      const auto src = a.data().subspan(r.start * n, r.length * n);
      return std::vector<double>(src.begin(), src.end());
    });
    DenseMatrix local(my_rows, n, std::move(block));

    std::vector<std::size_t> remaining(p);
    for (std::size_t w = 0; w < p; ++w) remaining[w] = plan.assignments[w].length;

    WorkerLoad& load = result.loads[me];
    std::size_t first_live = 0;
    std::size_t n_col = n;
    double log_acc = 0.0;
    double negatives = 0.0;
    BroadcastMessage msg;

    for (const std::size_t owner : schedule) {
      const std::size_t last = n_col - 1;
      if (me == owner) {
        const auto prow = local.row(first_live).first(n_col);
        const std::size_t j = kernel::argmax_abs(prow);
        if (j == n_col) {
          msg = BroadcastMessage{{}, 0, true};
        } else {
          const double pivot = prow[j];
          std::size_t k_pos = 1;
          for (std::size_t w = 0; w < owner; ++w) k_pos += remaining[w];
          const int swap_parity = j == last ? 1 : -1;
          swap_live_columns(local, first_live, j, last);
          log_acc += std::log(std::abs(pivot));
          if (kernel::step_sign(pivot, k_pos, n_col, swap_parity) < 0) negatives += 1.0;
          msg.values.assign(prow.begin(), prow.end());
          msg.index = static_cast<std::int64_t>(j);
          msg.abort = false;
        }
      }
      comm.broadcast(msg, owner);
      if (msg.abort) return;

      if (me == owner) {
        ++first_live;
      } else {
        swap_live_columns(local, first_live, static_cast<std::size_t>(msg.index), last);
      }
      --remaining[owner];

      const std::span<const double> pivot_row(msg.values);
      for (std::size_t r = first_live; r < my_rows; ++r) {
        kernel::eliminate(local.row(r), pivot_row);
      }
      load.row_updates += my_rows - first_live;
      load.scalar_updates += static_cast<std::uint64_t>(my_rows - first_live) * last;
      n_col = last;
    }

    // n_col == p here; each worker holds exactly one live row.
    const auto final_row = std::span<const double>(local.row(first_live)).first(n_col);
    const auto rows = comm.gather(final_row);
    const double partial[] = {log_acc, negatives};
    const auto sums = comm.reduce_sum(partial);

    if (comm.is_master()) {
      DenseMatrix remainder(p, p);
      for (std::size_t w = 0; w < p; ++w) {
        std::copy(rows[w].begin(), rows[w].end(), remainder.row(w).begin());
      }
      const LogDet tail = logdet_lu(std::move(remainder), result.remainder_updates);
      result.logdet = combine(sums[0], sums[1], tail);
    }
  };

  result.logdet = LogDet::singular();
  result.stats = run_team(p, options, worker);
  return result;
}

RunResult ge_parallel(const DenseMatrix& a, std::size_t p, const ParallelOptions& options) {
  check_run(a, p);
  const std::size_t n = a.rows();

  RunResult result;
  result.n_workers = p;
  result.loads.assign(p, {});

  auto worker = [&](Communicator& comm) {
    const std::size_t me = comm.rank();
    // Cyclic distribution: local row i is global row me + i * p.
    const std::size_t my_rows = n / p + (me < n % p ? 1 : 0);

    std::vector<double> block = comm.scatter([&](std::size_t w) {
      std::vector<double> rows;
      for (std::size_t g = w; g < n; g += p) {
        const auto src = a.row(g);
        rows.insert(rows.end(), src.begin(), src.end());
      }
      return rows;
    });
    DenseMatrix local(my_rows, n, std::move(block));

    std::vector<char> live(my_rows, 1);
    std::vector<char> pivoted(n, 0);
    WorkerLoad& load = result.loads[me];
    double log_acc = 0.0;
    double negatives = 0.0;
    BroadcastMessage msg;

    for (std::size_t j = 0; j < n; ++j) {
      MaxLoc mine;
      for (std::size_t i = 0; i < my_rows; ++i) {
        if (!live[i]) continue;
        const double v = local(i, j);
        if (std::abs(v) > mine.magnitude) mine = {std::abs(v), me + i * p, v};
      }
      const MaxLoc win = comm.allreduce_maxloc(mine);
      if (win.magnitude == 0.0) return;

      const std::size_t g = win.index;
      const std::size_t owner = g % p;
      if (me == owner) {
        const std::size_t i = g / p;
        std::size_t below = 0;
        for (std::size_t h = 0; h < g; ++h) below += pivoted[h] ? 0 : 1;
        if (below % 2 == 1) negatives += 1.0;
        if (win.value < 0.0) negatives += 1.0;
        log_acc += std::log(std::abs(win.value));
        live[i] = 0;
        const auto src = local.row(i).subspan(j);
        msg.values.assign(src.begin(), src.end());
        msg.index = static_cast<std::int64_t>(g);
      }
      pivoted[g] = 1;
      if (j + 1 == n) break;

      comm.broadcast(msg, owner);
      const double* prow = msg.values.data();
      const double pivot = prow[0];
      std::uint64_t touched = 0;
      for (std::size_t i = 0; i < my_rows; ++i) {
        if (!live[i]) continue;
        double* row = &local(i, 0);
        const double m = row[j] / pivot;
        for (std::size_t c = j + 1; c < n; ++c) row[c] -= m * prow[c - j];
        ++touched;
      }
      load.row_updates += touched;
      load.scalar_updates += touched * (n - 1 - j);
    }

    const double partial[] = {log_acc, negatives};
    const auto sums = comm.reduce_sum(partial);
    if (comm.is_master()) {
      const auto neg = static_cast<std::uint64_t>(sums[1]);
      result.logdet = {neg % 2 == 0 ? 1 : -1, sums[0]};
    }
  };

  result.logdet = LogDet::singular();
  result.stats = run_team(p, options, worker);
  return result;
}

}  // namespace mcond
