// Seeded random instance builders shared by the unit and acceptance suites.
// All money and energy values live on binary-fraction grids so that solver
// and oracle arithmetic agree bit for bit.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "gridride/domain.hpp"
#include "gridride/recommend.hpp"
#include "gridride/rng.hpp"
#include "oracles.hpp"

namespace instances {

struct PotrInstance {
  std::vector<gridride::Worker> workers;
  std::vector<gridride::Task> tasks;
  gridride::recommend::WeightMatrix weights;
  gridride::recommend::PotrParams params;
  std::vector<oracles::PotrPair> pairs;  // eligible pairs, lex order
};

inline gridride::Worker potr_worker(int id) {
  gridride::Worker w;
  w.id = id;
  w.location = {0, 0};
  w.energy_per_km = 0.1;
  w.range_km = 10000;
  w.min_range_km = 0;
  return w;
}

inline gridride::Task potr_task(int id, gridride::TaskType z, double x,
                                double kwh = 0.0) {
  gridride::Task t;
  t.id = id;
  t.type = z;
  t.origin = {x, 0};
  t.destination =
      z == gridride::TaskType::V2G ? t.origin : gridride::Point{x, 1};
  t.deliverable_kwh =
      z == gridride::TaskType::V2G ? (kwh > 0 ? kwh : 5.0) : 0.0;
  return t;
}

// Small instances (at most 12 pairs) whose exhaustive enumeration stays
// cheap; roughly one task in five is out of reach to exercise eligibility.
inline PotrInstance random_potr_instance(std::uint64_t seed,
                                         bool with_sentinels) {
  using namespace gridride;
  rng::Sequence seq(rng::key(seed, rng::Stream::Instance));
  PotrInstance inst;
  int w = 1 + static_cast<int>(seq.next_u01() * 4);
  int s = 1 + static_cast<int>(seq.next_u01() * 4);
  while (w * s > 12) (seq.next_u01() < 0.5 && w > 1) ? --w : --s;
  inst.params.k = 1 + static_cast<int>(seq.next_u01() * 3);
  inst.params.psi = static_cast<int>(seq.next_u01() * 3);
  inst.params.v2g_min = static_cast<int>(seq.next_u01() * 2);
  inst.params.lambda_km = 10.0;
  for (int i = 0; i < w; ++i) inst.workers.push_back(potr_worker(i));
  for (int j = 0; j < s; ++j) {
    TaskType z = static_cast<TaskType>(static_cast<int>(seq.next_u01() * 3));
    bool reachable = seq.next_u01() < 0.8;
    inst.tasks.push_back(potr_task(j, z, reachable ? 5.0 : 50.0));
  }
  inst.weights = recommend::WeightMatrix(w, s);
  for (int i = 0; i < w; ++i) {
    for (int j = 0; j < s; ++j) {
      double weight = oracles::grid_value(seq, 0.0, 1.0);
      if (with_sentinels && seq.next_u01() < 0.2)
        weight = std::numeric_limits<double>::infinity();
      inst.weights.at(i, j) = weight;
      if (!eligible(inst.workers[i], inst.tasks[j], inst.params.lambda_km))
        continue;
      oracles::PotrPair p;
      p.worker = i;
      p.task = j;
      p.sentinel = std::isinf(weight);
      p.weight = p.sentinel ? 0.0 : weight;
      p.v2g = inst.tasks[j].type == TaskType::V2G;
      inst.pairs.push_back(p);
    }
  }
  return inst;
}

// Mirrors the solver's relaxation policy on top of oracle feasibility:
// lower psi first, then v2g_min keeping psi as high as possible.
inline std::pair<int, int> potr_effective_bounds(const PotrInstance& inst) {
  int w = static_cast<int>(inst.workers.size());
  int s = static_cast<int>(inst.tasks.size());
  auto feasible = [&](int psi, int v2g) {
    return oracles::potr_oracle(inst.pairs, w, s, inst.params.k, psi, v2g)
        .feasible;
  };
  int psi0 = *inst.params.psi;
  int v0 = *inst.params.v2g_min;
  if (feasible(psi0, v0)) return {psi0, v0};
  for (int psi = psi0 - 1; psi >= 0; --psi)
    if (feasible(psi, v0)) return {psi, v0};
  for (int v = v0 - 1; v >= 0; --v)
    for (int psi = psi0; psi >= 0; --psi)
      if (feasible(psi, v)) return {psi, v};
  return {0, 0};
}

struct AuctionInstance {
  std::vector<gridride::Worker> workers;
  std::vector<gridride::Task> tasks;
  std::vector<gridride::Bid> bids;
  gridride::EnergyBudget budget;
  std::vector<oracles::WibsOracleTask> oracle_tasks;  // in ascending id order
};

inline AuctionInstance random_auction_instance(std::uint64_t seed,
                                               int max_side = 8) {
  using namespace gridride;
  rng::Sequence seq(rng::key(seed, rng::Stream::Instance, 7));
  AuctionInstance inst;
  int nw = 1 + static_cast<int>(seq.next_u01() * max_side);
  int nt = 1 + static_cast<int>(seq.next_u01() * max_side);
  for (int i = 0; i < nw; ++i) {
    Worker w;
    w.id = i;
    w.location = {0, 0};
    w.energy_per_km = 0.2;
    w.range_km = 1000;
    w.min_range_km = 0;
    inst.workers.push_back(w);
  }
  double total_v2g = 0.0;
  for (int j = 0; j < nt; ++j) {
    Task t;
    t.id = j;
    double u = seq.next_u01();
    t.type = u < 0.5 ? TaskType::Rideshare
             : u < 0.7 ? TaskType::BatterySwap
                       : TaskType::V2G;
    t.origin = {1, 0};
    if (t.type == TaskType::V2G) {
      t.destination = t.origin;
      // multiples of 1/8 in [1, 9]
      t.deliverable_kwh = 1.0 + static_cast<int>(seq.next_u01() * 64) / 8.0;
      total_v2g += t.deliverable_kwh;
    } else {
      t.destination = {2, 0};
    }
    inst.tasks.push_back(t);
  }
  for (int i = 0; i < nw; ++i) {
    for (int j = 0; j < nt; ++j) {
      if (seq.next_u01() > 0.55) continue;
      // multiples of 1/64 in [0.5, 16.5]
      double amount = 0.5 + static_cast<int>(seq.next_u01() * 1024) / 64.0;
      inst.bids.push_back({i, j, amount});
    }
  }
  // Budget: zero sometimes, otherwise a sixteenth-grid fraction of the total
  // (occasionally unattainable by construction).
  if (seq.next_u01() < 0.2) {
    inst.budget.required_kwh = 0.0;
  } else {
    int ticks = static_cast<int>(seq.next_u01() * 17);
    inst.budget.required_kwh = total_v2g * ticks / 16.0;
  }

  for (int j = 0; j < nt; ++j) {
    oracles::WibsOracleTask ot;
    ot.mandatory = inst.tasks[j].type != TaskType::V2G;
    ot.delta = inst.tasks[j].type == TaskType::V2G
                   ? inst.tasks[j].deliverable_kwh
                   : 0.0;
    for (const auto& b : inst.bids)
      if (b.task_id == j) ot.candidates.push_back({b.amount, b.worker_id});
    inst.oracle_tasks.push_back(ot);
  }
  return inst;
}

}  // namespace instances
