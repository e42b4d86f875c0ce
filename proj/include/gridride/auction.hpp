#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "gridride/domain.hpp"

namespace gridride::auction {

// Bipartite bid graph: one edge per positive bid, weight = asked price.
struct BidEdge {
  int worker = 0;  // index into the workers vector
  int task = 0;    // index into the tasks vector
  double weight = 0.0;
};

struct BidGraph {
  int num_workers = 0;
  int num_tasks = 0;
  std::vector<BidEdge> edges;
  std::vector<int> v2g_tasks;      // indices of V2G tasks
  std::vector<int> non_v2g_tasks;  // everything else
};

BidGraph build_bid_graph(const std::vector<Bid>& bids,
                         const std::vector<Worker>& workers,
                         const std::vector<Task>& tasks);

struct AssignedPair {
  int worker_id = 0;
  int task_id = 0;
  double cost = 0.0;  // the winning bid
};

struct Assignment {
  std::vector<AssignedPair> pairs;  // sorted by task id
  double total_cost = 0.0;          // sum of winning bids
  double delivered_v2g_kwh = 0.0;
  bool feasible = false;  // delivered >= budget
  std::vector<int> unassigned_mandatory;  // non-V2G task ids left out
  int iterations = 1;  // matching rounds (heuristic only)

  // Bid total plus the coverage penalty; the quantity the exact solver
  // minimizes, and the basis for exact-vs-heuristic cost comparisons.
  double penalized(double penalty) const {
    return total_cost + penalty * static_cast<double>(unassigned_mandatory.size());
  }
};

struct Payment {
  double amount = 0.0;
  // Set when the winner was not the lowest bidder on its task, so the
  // second-price rule pays below the winner's own ask.
  bool below_own_bid = false;
};

struct PaymentSchedule {
  std::map<int, Payment> by_worker;  // winner id -> payment
  double total() const;
};

class WibsInfeasible : public std::runtime_error {
 public:
  explicit WibsInfeasible(const std::string& what)
      : std::runtime_error(what) {}
};

// Penalty that makes leaving a mandatory task unassigned strictly worse
// than any combination of bids.
double default_penalty(const std::vector<Bid>& bids);

// Exact winner determination: minimizes total bid cost plus
// penalty * (unassigned non-V2G tasks), subject to one task per worker, one
// worker per task, and total delivered V2G energy >= budget. Throws
// WibsInfeasible when the budget is unattainable outright.
Assignment solve_wibs_exact(const std::vector<Bid>& bids,
                            const std::vector<Worker>& workers,
                            const std::vector<Task>& tasks,
                            const EnergyBudget& budget,
                            double unassigned_penalty);

// Minimum-weight matching of maximum cardinality on a bipartite bid graph
// (successive shortest augmenting paths with potentials). Deterministic:
// ties resolve toward lower node indices. Returns indices into graph.edges.
std::vector<int> min_weight_matching(const BidGraph& graph);

// Iterative matching heuristic: rematch after removing the highest-priced
// non-V2G winners whose freed workers could cover the remaining energy
// shortfall; stops when the budget is met or no removal can help.
Assignment bmw(const std::vector<Bid>& bids, const std::vector<Worker>& workers,
               const std::vector<Task>& tasks, const EnergyBudget& budget);

// Second-price payments: each winner is paid the lowest competing bid on its
// task; a winner with no competitor is paid its own bid.
PaymentSchedule second_price_payments(const Assignment& assignment,
                                      const std::vector<Bid>& all_bids);

}  // namespace gridride::auction
