#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include <CLI11.hpp>

#include "gridride/auction.hpp"
#include "gridride/batch.hpp"
#include "gridride/rng.hpp"
#include "gridride/sim.hpp"

namespace {

using namespace gridride;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct MatchInstance {
  std::vector<Worker> workers;
  std::vector<Task> tasks;
  std::vector<Bid> bids;
  EnergyBudget budget;
};

// Complete bid graph with a mixed task population; the budget is set well
// inside what the first matching delivers so the timing isolates one
// matching pass, which is the regime the complexity model describes.
MatchInstance complete_instance(int n, std::uint64_t seed) {
  MatchInstance inst;
  rng::Sequence seq(rng::key(seed, rng::Stream::Instance, n));
  double total_v2g = 0.0;
  for (int i = 0; i < n; ++i) {
    Worker w;
    w.id = i;
    w.location = {seq.next_u01() * 20.0, seq.next_u01() * 20.0};
    w.energy_per_km = 0.2;
    w.range_km = 500.0;
    w.min_range_km = 10.0;
    inst.workers.push_back(w);
  }
  for (int j = 0; j < n; ++j) {
    Task t;
    t.id = j;
    double u = seq.next_u01();
    t.type = u < 0.6 ? TaskType::Rideshare
             : u < 0.8 ? TaskType::BatterySwap
                       : TaskType::V2G;
    t.origin = {seq.next_u01() * 20.0, seq.next_u01() * 20.0};
    if (t.type == TaskType::V2G) {
      t.destination = t.origin;
      t.deliverable_kwh = 1.0 + 9.0 * seq.next_u01();
      total_v2g += t.deliverable_kwh;
    } else {
      t.destination = {seq.next_u01() * 20.0, seq.next_u01() * 20.0};
    }
    inst.tasks.push_back(t);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      inst.bids.push_back({i, j, 1.0 + 19.0 * seq.next_u01()});
  inst.budget.required_kwh = 0.5 * total_v2g;
  return inst;
}

int bench_bmw_scaling(const std::vector<int>& sizes, int instances) {
  std::printf("matching-heuristic scaling, %d instances per size\n", instances);
  std::printf("%8s %14s %14s %14s\n", "n", "median_ms", "measured_x",
              "model_x");
  double prev_median = 0.0;
  int prev_n = 0;
  for (int n : sizes) {
    std::vector<double> times;
    for (int k = 0; k < instances; ++k) {
      MatchInstance inst = complete_instance(n, 1000 + k);
      auto start = Clock::now();
      auto a = auction::bmw(inst.bids, inst.workers, inst.tasks, inst.budget);
      double dt = seconds_since(start);
      if (a.pairs.empty()) std::printf("unexpected empty matching\n");
      times.push_back(dt * 1e3);
    }
    std::sort(times.begin(), times.end());
    double median = times[times.size() / 2];
    if (prev_n > 0) {
      double measured = median / prev_median;
      double model = (static_cast<double>(n) * n * n * std::log(n)) /
                     (static_cast<double>(prev_n) * prev_n * prev_n *
                      std::log(prev_n));
      std::printf("%8d %14.3f %14.2f %14.2f\n", n, median, measured, model);
    } else {
      std::printf("%8d %14.3f %14s %14s\n", n, median, "-", "-");
    }
    prev_median = median;
    prev_n = n;
  }
  return 0;
}

int bench_batch(int seeds, int rounds, int threads) {
  sim::Scenario s;
  s.rounds = rounds;
  s.num_workers = 12;
  s.rate_rideshare = 8.0;
  s.rate_swap = 3.0;
  s.rate_v2g = 3.0;
  s.bid_model.noise_sd = 0.4;
  std::vector<batch::Cell> cells;
  for (auto v : {sim::Variant::PkOpt, sim::Variant::PkBmw, sim::Variant::Bg})
    for (int k = 1; k <= seeds; ++k)
      cells.push_back({v, static_cast<std::uint64_t>(k)});

  auto t0 = Clock::now();
  auto serial = batch::run_cells_serial(s, cells);
  double serial_s = seconds_since(t0);

  t0 = Clock::now();
  auto parallel = batch::run_cells_parallel(s, cells, threads);
  double parallel_s = seconds_since(t0);

  bool identical = serial.size() == parallel.size();
  for (std::size_t i = 0; identical && i < serial.size(); ++i) {
    identical = serial[i].cumulative_objective == parallel[i].cumulative_objective &&
                serial[i].cumulative_tasks == parallel[i].cumulative_tasks;
  }
  std::printf("grid of %zu cells x %d rounds\n", cells.size(), rounds);
  std::printf("serial   %8.3f s\n", serial_s);
  std::printf("parallel %8.3f s (threads=%d)  speedup %.2fx\n", parallel_s,
              threads, serial_s / parallel_s);
  std::printf("results identical: %s\n", identical ? "yes" : "NO");
  return identical ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gridride micro-benchmarks"};
  bool scaling = false;
  bool grid = false;
  int instances = 20;
  int seeds = 4;
  int rounds = 48;
  int threads = 2;
  std::vector<int> sizes = {25, 50, 100, 200};
  app.add_flag("--bmw-scaling", scaling, "time the matching heuristic");
  app.add_flag("--batch", grid, "compare serial vs OpenMP grid execution");
  app.add_option("--sizes", sizes, "instance sizes for --bmw-scaling");
  app.add_option("--instances", instances, "instances per size");
  app.add_option("--seeds", seeds, "seeds per variant for --batch");
  app.add_option("--rounds", rounds, "rounds per cell for --batch");
  app.add_option("--threads", threads, "threads for the parallel pass");
  CLI11_PARSE(app, argc, argv);

  int rc = 0;
  if (!scaling && !grid) scaling = grid = true;
  if (scaling) rc |= bench_bmw_scaling(sizes, instances);
  if (grid) rc |= bench_batch(seeds, rounds, threads);
  return rc;
}
