#include "mcond/runtime.hpp"

#include <time.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <barrier>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <memory>
#include <mutex>
#include <semaphore>
#include <string>
#include <thread>

#include "mcond/errors.hpp"

namespace mcond {

double thread_cpu_seconds() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
}

namespace {

using WallClock = std::chrono::steady_clock;

double seconds_since(WallClock::time_point start) {
  return std::chrono::duration<double>(WallClock::now() - start).count();
}

// Thrown inside surviving workers once a peer has failed.
struct TeamAborted {};

constexpr int kCalibrationRounds = 33;

}  // namespace

namespace detail {

struct Slot {
  BroadcastMessage bcast;
  std::vector<std::vector<double>> parts;
  std::vector<MaxLoc> candidates;
  std::vector<double> arrival;
  std::vector<double> send_cost;

  explicit Slot(std::size_t p)
      : parts(p), candidates(p), arrival(p, 0.0), send_cost(p, 0.0) {}
};

struct Team {
  explicit Team(std::size_t workers, unsigned cap)
      : p(workers), barrier(static_cast<std::ptrdiff_t>(workers)),
        slots{Slot(workers), Slot(workers)} {
    if (cap > 0 && cap < workers) {
      gate = std::make_unique<std::counting_semaphore<>>(cap);
    }
  }

  std::size_t p;
  std::barrier<> barrier;
  std::unique_ptr<std::counting_semaphore<>> gate;
  std::array<Slot, 2> slots;
  std::atomic<bool> failed{false};
  double latency = 0.0;
  CommStats stats;
  WallClock::time_point run_start;

  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::size_t first_rank = 0;

  // Blocks at the barrier without holding a compute slot.
  void sync(bool& holding) {
    if (gate && holding) {
      gate->release();
      holding = false;
    }
    barrier.arrive_and_wait();
    if (gate) {
      gate->acquire();
      holding = true;
    }
    if (failed.load()) throw TeamAborted{};
  }
};

}  // namespace detail

namespace {
// Per-thread flag: whether this worker currently holds a compute slot.
thread_local bool t_holding = false;
}  // namespace

ParallelOptions ParallelOptions::from_env() {
  ParallelOptions opts;
  if (const char* env = std::getenv("MCND_THREADS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v > 0) opts.max_threads = static_cast<unsigned>(v);
  }
  return opts;
}

Communicator::Communicator(detail::Team& team, std::size_t rank)
    : team_(&team), rank_(rank) {}

std::size_t Communicator::size() const noexcept { return team_->p; }

void Communicator::tick() {
  const double now = thread_cpu_seconds();
  clock_ += now - cpu_mark_;
  cpu_mark_ = now;
}

// Exchange provides send(Slot&) and receive(Slot&). Contributions are
// written before the barrier and read after it; slots alternate so a fast
// worker cannot overwrite data a slow worker is still reading.
template <typename Exchange>
void Communicator::collective(Exchange&& exchange) {
  detail::Team& t = *team_;
  detail::Slot& slot = t.slots[sequence_ % 2];
  ++sequence_;

  tick();
  const double arrival = clock_;
  double c0 = thread_cpu_seconds();
  exchange.send(slot);
  slot.send_cost[rank_] = thread_cpu_seconds() - c0;
  slot.arrival[rank_] = arrival;

  t.sync(t_holding);

  const double latest = *std::max_element(slot.arrival.begin(), slot.arrival.end());
  const double send = *std::max_element(slot.send_cost.begin(), slot.send_cost.end());
  c0 = thread_cpu_seconds();
  exchange.receive(slot);
  const double receive = thread_cpu_seconds() - c0;

  const double done = latest + t.latency + send + receive;
  comm_ += done - arrival;
  clock_ = done;
  cpu_mark_ = thread_cpu_seconds();
}

std::vector<double> Communicator::scatter(
    const std::function<std::vector<double>(std::size_t)>& pack) {
  std::vector<double> mine;
  struct {
    Communicator* self;
    const std::function<std::vector<double>(std::size_t)>* pack;
    std::vector<double>* out;
    void send(detail::Slot& s) {
      if (!self->is_master()) return;
      for (std::size_t w = 0; w < s.parts.size(); ++w) s.parts[w] = (*pack)(w);
    }
    void receive(detail::Slot& s) {
      *out = s.parts[self->rank_];
      if (self->is_master()) {
        for (std::size_t w = 1; w < s.parts.size(); ++w) {
          self->team_->stats.scatter_bytes += s.parts[w].size() * sizeof(double);
        }
      }
    }
  } ex{this, &pack, &mine};
  collective(ex);

  if (is_master()) {
    team_->stats.scatter_seconds = clock_;
    team_->run_start = WallClock::now();
  }
  clock_ = 0.0;
  comm_ = 0.0;
  cpu_mark_ = thread_cpu_seconds();
  return mine;
}

void Communicator::broadcast(BroadcastMessage& msg, std::size_t root) {
  struct {
    Communicator* self;
    BroadcastMessage* msg;
    std::size_t root;
    void send(detail::Slot& s) {
      if (self->rank_ == root) s.bcast = *msg;
    }
    void receive(detail::Slot& s) {
      if (self->rank_ != root) *msg = s.bcast;
      if (self->is_master()) {
        CommStats& st = self->team_->stats;
        ++st.broadcasts;
        st.broadcast_bytes += s.bcast.wire_bytes();
        if (!s.bcast.abort) st.broadcast_lengths.push_back(s.bcast.values.size());
      }
    }
  } ex{this, &msg, root};
  collective(ex);
}

std::vector<std::vector<double>> Communicator::gather(std::span<const double> row) {
  std::vector<std::vector<double>> out;
  struct {
    Communicator* self;
    std::span<const double> row;
    std::vector<std::vector<double>>* out;
    void send(detail::Slot& s) { s.parts[self->rank_].assign(row.begin(), row.end()); }
    void receive(detail::Slot& s) {
      if (!self->is_master()) return;
      *out = s.parts;
      CommStats& st = self->team_->stats;
      ++st.gathers;
      for (std::size_t w = 1; w < s.parts.size(); ++w) {
        st.gather_bytes += s.parts[w].size() * sizeof(double);
      }
    }
  } ex{this, row, &out};
  collective(ex);
  return out;
}

std::vector<double> Communicator::reduce_sum(std::span<const double> values) {
  std::vector<double> out;
  struct {
    Communicator* self;
    std::span<const double> values;
    std::vector<double>* out;
    void send(detail::Slot& s) { s.parts[self->rank_].assign(values.begin(), values.end()); }
    void receive(detail::Slot& s) {
      if (!self->is_master()) return;
      *out = s.parts[0];
      for (std::size_t w = 1; w < s.parts.size(); ++w) {
        for (std::size_t i = 0; i < out->size(); ++i) (*out)[i] += s.parts[w].at(i);
      }
      ++self->team_->stats.reductions;
    }
  } ex{this, values, &out};
  collective(ex);
  return out;
}

MaxLoc Communicator::allreduce_maxloc(const MaxLoc& local) {
  MaxLoc winner;
  struct {
    Communicator* self;
    const MaxLoc* local;
    MaxLoc* winner;
    void send(detail::Slot& s) { s.candidates[self->rank_] = *local; }
    void receive(detail::Slot& s) {
      MaxLoc best = s.candidates[0];
      for (std::size_t w = 1; w < s.candidates.size(); ++w) {
        const MaxLoc& c = s.candidates[w];
        if (c.magnitude > best.magnitude ||
            (c.magnitude == best.magnitude && c.magnitude > 0.0 && c.index < best.index)) {
          best = c;
        }
      }
      *winner = best;
      if (self->is_master()) {
        // Each peer sends its candidate in and receives the winner back.
        self->team_->stats.pivot_search_msgs += 2 * (s.candidates.size() - 1);
      }
    }
  } ex{this, &local, &winner};
  collective(ex);
  return winner;
}

CommStats run_team(std::size_t p, const ParallelOptions& options,
                   const std::function<void(Communicator&)>& worker) {
  if (p == 0) throw InvalidPlan("worker count must be positive");
  detail::Team team(p, options.max_threads);

  auto body = [&team, &worker](std::size_t rank) {
    Communicator comm(team, rank);
    t_holding = false;
    try {
      if (team.gate) {
        team.gate->acquire();
        t_holding = true;
      }
      // Calibrate the cost of an empty collective on this team.
      std::vector<double> rounds;
      for (int i = 0; i < kCalibrationRounds; ++i) {
        const auto t0 = WallClock::now();
        team.sync(t_holding);
        rounds.push_back(seconds_since(t0));
      }
      if (comm.is_master()) {
        std::nth_element(rounds.begin(), rounds.begin() + rounds.size() / 2, rounds.end());
        team.latency = rounds[rounds.size() / 2];
        team.stats.sync_latency_seconds = team.latency;
      }
      team.sync(t_holding);
      comm.cpu_mark_ = thread_cpu_seconds();

      worker(comm);

      if (comm.is_master()) {
        comm.tick();
        CommStats& st = team.stats;
        st.total_seconds = comm.clock_;
        st.comm_seconds = comm.comm_;
        st.compute_seconds = comm.clock_ - comm.comm_;
        st.wall_seconds = seconds_since(team.run_start);
      }
    } catch (const TeamAborted&) {
      team.barrier.arrive_and_drop();
    } catch (...) {
      {
        std::lock_guard lock(team.error_mutex);
        if (!team.first_error) {
          team.first_error = std::current_exception();
          team.first_rank = rank;
        }
      }
      team.failed.store(true);
      team.barrier.arrive_and_drop();
    }
    if (team.gate && t_holding) team.gate->release();
    t_holding = false;
  };

  team.run_start = WallClock::now();
  {
    std::vector<std::jthread> threads;
    threads.reserve(p);
    for (std::size_t r = 0; r < p; ++r) threads.emplace_back(body, r);
  }

  if (team.first_error) {
    std::string what = "unknown error";
    try {
      std::rethrow_exception(team.first_error);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    throw WorkerFailure("worker " + std::to_string(team.first_rank) +
                        " dropped out: " + what);
  }
  return std::move(team.stats);
}

}  // namespace mcond
