#include "gridride/baseline.hpp"

#include <algorithm>

namespace gridride::baseline {

recommend::RecommendationMatrix pk_topk(const learn::PreferenceModel& prefs,
                                        const std::vector<Worker>& workers,
                                        const std::vector<Task>& tasks, int k,
                                        double lambda_km) {
  recommend::RecommendationMatrix m(static_cast<int>(workers.size()),
                                    static_cast<int>(tasks.size()));
  m.k = k;
  for (int i = 0; i < m.num_workers; ++i) {
    std::vector<std::pair<double, int>> ranked;  // (-alpha, task index)
    for (int j = 0; j < m.num_tasks; ++j) {
      if (!eligible(workers[i], tasks[j], lambda_km)) continue;
      ranked.push_back({-prefs.at(i, tasks[j].type), j});
    }
    std::sort(ranked.begin(), ranked.end());
    int take = std::min<int>(k, static_cast<int>(ranked.size()));
    for (int r = 0; r < take; ++r) m.set(i, ranked[r].second, true);
  }
  return m;
}

BaselineOutcome bg_assign(const std::vector<Bid>& bids,
                          const std::vector<Worker>& workers,
                          const std::vector<Task>& tasks,
                          const EnergyBudget& budget) {
  auction::BidGraph g = auction::build_bid_graph(bids, workers, tasks);

  std::vector<int> order(tasks.size());
  for (std::size_t j = 0; j < tasks.size(); ++j) order[j] = static_cast<int>(j);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return tasks[a].id < tasks[b].id; });

  std::vector<std::vector<std::pair<double, int>>> by_task(tasks.size());
  for (const auto& e : g.edges) by_task[e.task].push_back({e.weight, e.worker});
  for (auto& v : by_task) std::sort(v.begin(), v.end());

  BaselineOutcome out;
  std::vector<bool> used(workers.size(), false);
  for (int task : order) {
    bool matched = false;
    for (const auto& [amount, worker] : by_task[task]) {
      if (used[worker]) continue;
      used[worker] = true;
      out.assignment.pairs.push_back(
          {workers[worker].id, tasks[task].id, amount});
      out.assignment.total_cost += amount;
      if (tasks[task].type == TaskType::V2G)
        out.assignment.delivered_v2g_kwh += tasks[task].deliverable_kwh;
      matched = true;
      break;
    }
    if (!matched) {
      out.unmatched_tasks.push_back(tasks[task].id);
      if (tasks[task].type != TaskType::V2G)
        out.assignment.unassigned_mandatory.push_back(tasks[task].id);
    }
  }
  std::sort(out.assignment.pairs.begin(), out.assignment.pairs.end(),
            [](const auction::AssignedPair& x, const auction::AssignedPair& y) {
              return x.task_id < y.task_id;
            });
  out.violated_budget =
      out.assignment.delivered_v2g_kwh + 1e-9 < budget.required_kwh;
  out.assignment.feasible = !out.violated_budget;
  return out;
}

}  // namespace gridride::baseline
