#pragma once

#include <vector>

#include "gridride/auction.hpp"
#include "gridride/domain.hpp"
#include "gridride/learner.hpp"
#include "gridride/recommend.hpp"

namespace gridride::baseline {

struct BaselineOutcome {
  auction::Assignment assignment;
  bool violated_budget = false;
  std::vector<int> unmatched_tasks;  // task ids that received no worker
};

// Perfect-knowledge top-K: each worker independently gets its K highest
// preference eligible tasks, ties toward lower task id. No coverage or V2G
// coupling.
recommend::RecommendationMatrix pk_topk(const learn::PreferenceModel& prefs,
                                        const std::vector<Worker>& workers,
                                        const std::vector<Task>& tasks, int k,
                                        double lambda_km);

// Greedy comparator: tasks in ascending id order, each assigned to its
// cheapest still-free bidder; no backtracking, budget violations recorded
// rather than repaired.
BaselineOutcome bg_assign(const std::vector<Bid>& bids,
                          const std::vector<Worker>& workers,
                          const std::vector<Task>& tasks,
                          const EnergyBudget& budget);

}  // namespace gridride::baseline
