#include "gridride/auction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <unordered_map>

namespace gridride::auction {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBudgetEps = 1e-9;

std::unordered_map<int, int> index_by_id_workers(
    const std::vector<Worker>& workers) {
  std::unordered_map<int, int> m;
  for (std::size_t i = 0; i < workers.size(); ++i)
    m.emplace(workers[i].id, static_cast<int>(i));
  return m;
}

std::unordered_map<int, int> index_by_id_tasks(const std::vector<Task>& tasks) {
  std::unordered_map<int, int> m;
  for (std::size_t j = 0; j < tasks.size(); ++j)
    m.emplace(tasks[j].id, static_cast<int>(j));
  return m;
}

}  // namespace

double PaymentSchedule::total() const {
  double s = 0.0;
  for (const auto& [id, p] : by_worker) s += p.amount;
  return s;
}

double default_penalty(const std::vector<Bid>& bids) {
  double s = 1.0;
  for (const auto& b : bids) s += b.amount;
  return s;
}

BidGraph build_bid_graph(const std::vector<Bid>& bids,
                         const std::vector<Worker>& workers,
                         const std::vector<Task>& tasks) {
  BidGraph g;
  g.num_workers = static_cast<int>(workers.size());
  g.num_tasks = static_cast<int>(tasks.size());
  auto widx = index_by_id_workers(workers);
  auto tidx = index_by_id_tasks(tasks);
  std::set<std::pair<int, int>> seen;
  for (const auto& b : bids) {
    auto wi = widx.find(b.worker_id);
    auto tj = tidx.find(b.task_id);
    if (wi == widx.end())
      throw std::invalid_argument("bid references unknown worker " +
                                  std::to_string(b.worker_id));
    if (tj == tidx.end())
      throw std::invalid_argument("bid references unknown task " +
                                  std::to_string(b.task_id));
    if (!(b.amount > 0.0) || !std::isfinite(b.amount))
      throw std::invalid_argument("bid amount must be positive and finite");
    if (!seen.emplace(wi->second, tj->second).second)
      throw std::invalid_argument("duplicate bid for worker " +
                                  std::to_string(b.worker_id) + ", task " +
                                  std::to_string(b.task_id));
    g.edges.push_back({wi->second, tj->second, b.amount});
  }
  std::sort(g.edges.begin(), g.edges.end(), [](const BidEdge& a,
                                               const BidEdge& b) {
    return a.worker != b.worker ? a.worker < b.worker : a.task < b.task;
  });
  for (int j = 0; j < g.num_tasks; ++j) {
    if (tasks[j].type == TaskType::V2G)
      g.v2g_tasks.push_back(j);
    else
      g.non_v2g_tasks.push_back(j);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Exact winner determination. Only the V2G side couples to the energy budget,
// so the search branches over V2G task assignments alone (bidders in
// (amount, worker id) order, then the skip option); as soon as the budget is
// met, the remaining problem is a plain assignment of mandatory tasks to the
// unused workers and is finished off with one min-weight matching, which with
// a coverage-dominating penalty minimizes bids + penalty * unassigned.

namespace {

struct ExactContext {
  const BidGraph* graph = nullptr;
  double budget = 0.0;
  double penalty = 0.0;
  // V2G tasks in ascending id order with their (amount, worker) candidates.
  std::vector<int> v2g_order;
  std::vector<std::vector<std::pair<double, int>>> v2g_candidates;
  std::vector<double> delta;            // per position in v2g_order
  std::vector<double> suffix_delivery;  // optimistic remaining V2G energy
  // All V2G bid options sorted by price per kWh for the budget bound.
  struct V2gOption {
    double ratio;
    double amount;
    double delta;
    int pos;
    int worker;
  };
  std::vector<V2gOption> v2g_options;
  // Constant part of the bound: every mandatory task costs at least its
  // cheapest bid (or the penalty when nothing bids on it).
  double mandatory_floor = 0.0;

  std::vector<bool> worker_used;
  std::vector<int> chosen;  // worker per v2g position, -1 = skipped
  double best = kInf;
  std::vector<int> best_chosen;
  std::vector<int> best_matching;  // edge indices into graph->edges
  bool found = false;
};

double budget_lower_bound(const ExactContext& c, int pos, double shortfall) {
  if (shortfall <= kBudgetEps) return 0.0;
  double cost = 0.0;
  for (const auto& opt : c.v2g_options) {
    if (opt.pos < pos) continue;
    if (c.worker_used[opt.worker]) continue;
    if (opt.delta >= shortfall) {
      cost += opt.amount * (shortfall / opt.delta);
      return cost;
    }
    cost += opt.amount;
    shortfall -= opt.delta;
  }
  return cost + (shortfall > kBudgetEps ? kInf : 0.0);
}

// Assigns the mandatory tasks among workers not claimed by V2G decisions.
// Returns the matched edges and the exact completion value.
double complete_with_matching(const ExactContext& c,
                              std::vector<int>& matching) {
  BidGraph sub;
  sub.num_workers = c.graph->num_workers;
  sub.num_tasks = c.graph->num_tasks;
  std::vector<int> orig;
  const auto& tasks_v2g = c.graph->v2g_tasks;
  std::vector<bool> is_v2g(sub.num_tasks, false);
  for (int j : tasks_v2g) is_v2g[j] = true;
  for (std::size_t e = 0; e < c.graph->edges.size(); ++e) {
    const auto& edge = c.graph->edges[e];
    if (is_v2g[edge.task] || c.worker_used[edge.worker]) continue;
    sub.edges.push_back(edge);
    orig.push_back(static_cast<int>(e));
  }
  std::vector<int> sub_match = min_weight_matching(sub);
  matching.clear();
  double cost = 0.0;
  for (int m : sub_match) {
    matching.push_back(orig[m]);
    cost += sub.edges[m].weight;
  }
  int mandatory_total = static_cast<int>(c.graph->non_v2g_tasks.size());
  int unassigned = mandatory_total - static_cast<int>(sub_match.size());
  return cost + c.penalty * unassigned;
}

void exact_dfs(ExactContext& c, int pos, double cost, double delivered) {
  if (delivered + kBudgetEps >= c.budget) {
    // Budget met: extra V2G assignments only add cost, so the optimal
    // completion skips the rest and solves the mandatory side exactly.
    std::vector<int> matching;
    double total = cost + complete_with_matching(c, matching);
    if (total < c.best) {
      c.best = total;
      c.best_chosen = c.chosen;
      for (int p = pos; p < static_cast<int>(c.chosen.size()); ++p)
        c.best_chosen[p] = -1;
      c.best_matching = matching;
      c.found = true;
    }
    return;
  }
  if (pos == static_cast<int>(c.v2g_order.size())) return;
  if (delivered + c.suffix_delivery[pos] + kBudgetEps < c.budget) return;
  double lb = cost + c.mandatory_floor +
              budget_lower_bound(c, pos, c.budget - delivered);
  if (lb >= c.best) return;

  for (const auto& [amount, worker] : c.v2g_candidates[pos]) {
    if (c.worker_used[worker]) continue;
    c.worker_used[worker] = true;
    c.chosen[pos] = worker;
    exact_dfs(c, pos + 1, cost + amount, delivered + c.delta[pos]);
    c.worker_used[worker] = false;
  }
  c.chosen[pos] = -1;
  exact_dfs(c, pos + 1, cost, delivered);
}

Assignment assemble(const std::vector<Worker>& workers,
                    const std::vector<Task>& tasks,
                    const std::vector<std::pair<int, int>>& pairs_idx,
                    const std::vector<double>& amounts, double budget) {
  Assignment a;
  for (std::size_t k = 0; k < pairs_idx.size(); ++k) {
    auto [wi, tj] = pairs_idx[k];
    a.pairs.push_back({workers[wi].id, tasks[tj].id, amounts[k]});
    a.total_cost += amounts[k];
    if (tasks[tj].type == TaskType::V2G)
      a.delivered_v2g_kwh += tasks[tj].deliverable_kwh;
  }
  std::sort(a.pairs.begin(), a.pairs.end(),
            [](const AssignedPair& x, const AssignedPair& y) {
              return x.task_id < y.task_id;
            });
  std::vector<bool> assigned(tasks.size(), false);
  for (auto [wi, tj] : pairs_idx) assigned[tj] = true;
  for (std::size_t j = 0; j < tasks.size(); ++j)
    if (!assigned[j] && tasks[j].type != TaskType::V2G)
      a.unassigned_mandatory.push_back(tasks[j].id);
  std::sort(a.unassigned_mandatory.begin(), a.unassigned_mandatory.end());
  a.feasible = a.delivered_v2g_kwh + kBudgetEps >= budget;
  return a;
}

}  // namespace

Assignment solve_wibs_exact(const std::vector<Bid>& bids,
                            const std::vector<Worker>& workers,
                            const std::vector<Task>& tasks,
                            const EnergyBudget& budget,
                            double unassigned_penalty) {
  BidGraph g = build_bid_graph(bids, workers, tasks);

  ExactContext c;
  c.graph = &g;
  c.budget = budget.required_kwh;
  c.penalty = unassigned_penalty;

  std::vector<std::vector<std::pair<double, int>>> by_task(g.num_tasks);
  for (const auto& e : g.edges) by_task[e.task].push_back({e.weight, e.worker});
  for (auto& v : by_task) std::sort(v.begin(), v.end());

  c.v2g_order = g.v2g_tasks;
  std::sort(c.v2g_order.begin(), c.v2g_order.end(),
            [&](int a, int b) { return tasks[a].id < tasks[b].id; });
  const int nv = static_cast<int>(c.v2g_order.size());
  c.v2g_candidates.resize(nv);
  c.delta.resize(nv);
  std::vector<int> pos_of_task(g.num_tasks, -1);
  for (int pos = 0; pos < nv; ++pos) {
    int task = c.v2g_order[pos];
    pos_of_task[task] = pos;
    c.v2g_candidates[pos] = by_task[task];
    c.delta[pos] = tasks[task].deliverable_kwh;
  }
  c.suffix_delivery.assign(nv + 1, 0.0);
  for (int pos = nv - 1; pos >= 0; --pos)
    c.suffix_delivery[pos] =
        c.suffix_delivery[pos + 1] +
        (c.v2g_candidates[pos].empty() ? 0.0 : c.delta[pos]);

  for (const auto& e : g.edges) {
    if (pos_of_task[e.task] < 0) continue;
    double d = tasks[e.task].deliverable_kwh;
    c.v2g_options.push_back(
        {e.weight / d, e.weight, d, pos_of_task[e.task], e.worker});
  }
  std::sort(c.v2g_options.begin(), c.v2g_options.end(),
            [](const ExactContext::V2gOption& a,
               const ExactContext::V2gOption& b) {
              if (a.ratio != b.ratio) return a.ratio < b.ratio;
              if (a.pos != b.pos) return a.pos < b.pos;
              return a.worker < b.worker;
            });

  for (int j : g.non_v2g_tasks)
    c.mandatory_floor +=
        by_task[j].empty() ? c.penalty
                           : std::min(by_task[j][0].first, c.penalty);

  c.worker_used.assign(workers.size(), false);
  c.chosen.assign(nv, -1);
  exact_dfs(c, 0, 0.0, 0.0);

  if (!c.found)
    throw WibsInfeasible(
        "solve_wibs_exact: energy budget unattainable with received bids");

  std::vector<std::pair<int, int>> pairs_idx;
  std::vector<double> amounts;
  for (int pos = 0; pos < nv; ++pos) {
    if (c.best_chosen[pos] < 0) continue;
    int task = c.v2g_order[pos];
    int worker = c.best_chosen[pos];
    double amount = 0.0;
    for (const auto& [a, w] : c.v2g_candidates[pos])
      if (w == worker) amount = a;
    pairs_idx.push_back({worker, task});
    amounts.push_back(amount);
  }
  for (int e : c.best_matching) {
    pairs_idx.push_back({g.edges[e].worker, g.edges[e].task});
    amounts.push_back(g.edges[e].weight);
  }
  return assemble(workers, tasks, pairs_idx, amounts, budget.required_kwh);
}

// ---------------------------------------------------------------------------
// Minimum weight bipartite matching via successive shortest augmenting paths
// with potentials; one augmentation per cardinality step, so the result is
// the cheapest matching among those of maximum cardinality.

std::vector<int> min_weight_matching(const BidGraph& graph) {
  const int nw = graph.num_workers;
  const int nt = graph.num_tasks;
  const int src = 0;
  const int dst = 1 + nw + nt;
  const int n = dst + 1;
  auto w_node = [](int i) { return 1 + i; };
  auto t_node = [&](int j) { return 1 + nw + j; };

  struct Arc {
    int to;
    double cap;
    double cost;
    int edge;  // original edge index, -1 for structural arcs
  };
  std::vector<Arc> arcs;
  std::vector<std::vector<int>> adj(n);
  auto add_arc = [&](int from, int to, double cap, double cost, int edge) {
    adj[from].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({to, cap, cost, edge});
    adj[to].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({from, 0.0, -cost, -1});
  };

  for (int i = 0; i < nw; ++i) add_arc(src, w_node(i), 1.0, 0.0, -1);
  std::vector<int> edge_arc(graph.edges.size());
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    edge_arc[e] = static_cast<int>(arcs.size());
    add_arc(w_node(graph.edges[e].worker), t_node(graph.edges[e].task), 1.0,
            graph.edges[e].weight, static_cast<int>(e));
  }
  for (int j = 0; j < nt; ++j) add_arc(t_node(j), dst, 1.0, 0.0, -1);

  std::vector<double> potential(n, 0.0), dist(n);
  std::vector<int> parent(n);
  std::vector<char> settled(n);

  while (true) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(settled.begin(), settled.end(), false);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    dist[src] = 0.0;
    pq.push({0.0, src});
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (settled[u]) continue;
      settled[u] = true;
      for (int a : adj[u]) {
        if (arcs[a].cap <= 0.5) continue;
        int v = arcs[a].to;
        if (settled[v]) continue;
        double rc = arcs[a].cost + potential[u] - potential[v];
        if (rc < 0.0) rc = 0.0;
        if (d + rc < dist[v]) {
          dist[v] = d + rc;
          parent[v] = a;
          pq.push({d + rc, v});
        }
      }
    }
    if (dist[dst] == kInf) break;
    for (int v = dst; v != src;) {
      int a = parent[v];
      arcs[a].cap -= 1.0;
      arcs[a ^ 1].cap += 1.0;
      v = arcs[a ^ 1].to;
    }
    double dt = dist[dst];
    for (int v = 0; v < n; ++v) potential[v] += std::min(dist[v], dt);
  }

  std::vector<int> matched;
  for (std::size_t e = 0; e < graph.edges.size(); ++e)
    if (arcs[edge_arc[e]].cap < 0.5) matched.push_back(static_cast<int>(e));
  return matched;
}

// ---------------------------------------------------------------------------
// Iterative matching heuristic.

Assignment bmw(const std::vector<Bid>& bids, const std::vector<Worker>& workers,
               const std::vector<Task>& tasks, const EnergyBudget& budget) {
  BidGraph g = build_bid_graph(bids, workers, tasks);

  std::vector<bool> removed(g.edges.size(), false);
  // Best single-task V2G contribution per worker, over edges still present.
  std::vector<double> potential(g.num_workers, 0.0);
  auto refresh_potentials = [&] {
    std::fill(potential.begin(), potential.end(), 0.0);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      if (removed[e]) continue;
      if (tasks[g.edges[e].task].type != TaskType::V2G) continue;
      potential[g.edges[e].worker] = std::max(
          potential[g.edges[e].worker], tasks[g.edges[e].task].deliverable_kwh);
    }
  };

  std::vector<int> matching;  // indices into g.edges
  bool feasible = false;
  int iterations = 0;
  while (true) {
    ++iterations;
    BidGraph sub;
    sub.num_workers = g.num_workers;
    sub.num_tasks = g.num_tasks;
    sub.v2g_tasks = g.v2g_tasks;
    sub.non_v2g_tasks = g.non_v2g_tasks;
    std::vector<int> orig;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      if (removed[e]) continue;
      sub.edges.push_back(g.edges[e]);
      orig.push_back(static_cast<int>(e));
    }
    std::vector<int> sub_match = min_weight_matching(sub);
    matching.clear();
    for (int m : sub_match) matching.push_back(orig[m]);

    double delivered = 0.0;
    for (int e : matching)
      if (tasks[g.edges[e].task].type == TaskType::V2G)
        delivered += tasks[g.edges[e].task].deliverable_kwh;
    if (delivered + kBudgetEps >= budget.required_kwh) {
      feasible = true;
      break;
    }

    // Matched non-V2G edges, highest price first, are removal candidates.
    std::vector<int> candidates;
    for (int e : matching)
      if (tasks[g.edges[e].task].type != TaskType::V2G) candidates.push_back(e);
    std::sort(candidates.begin(), candidates.end(), [&](int a, int b) {
      if (g.edges[a].weight != g.edges[b].weight)
        return g.edges[a].weight > g.edges[b].weight;
      if (g.edges[a].worker != g.edges[b].worker)
        return g.edges[a].worker < g.edges[b].worker;
      return g.edges[a].task < g.edges[b].task;
    });

    refresh_potentials();
    double shortfall = budget.required_kwh - delivered;
    double covered = 0.0;
    std::size_t z = 0;
    while (z < candidates.size() && covered + kBudgetEps < shortfall) {
      covered += potential[g.edges[candidates[z]].worker];
      ++z;
    }
    if (z == 0 || covered + kBudgetEps < shortfall) {
      // No removal set can close the gap; exit with the current matching.
      feasible = false;
      break;
    }
    for (std::size_t r = 0; r < z; ++r) removed[candidates[r]] = true;
  }

  Assignment a;
  for (int e : matching) {
    const auto& edge = g.edges[e];
    a.pairs.push_back(
        {workers[edge.worker].id, tasks[edge.task].id, edge.weight});
    a.total_cost += edge.weight;
    if (tasks[edge.task].type == TaskType::V2G)
      a.delivered_v2g_kwh += tasks[edge.task].deliverable_kwh;
  }
  std::sort(a.pairs.begin(), a.pairs.end(),
            [](const AssignedPair& x, const AssignedPair& y) {
              return x.task_id < y.task_id;
            });
  std::vector<bool> assigned(tasks.size(), false);
  for (int e : matching) assigned[g.edges[e].task] = true;
  for (std::size_t j = 0; j < tasks.size(); ++j)
    if (!assigned[j] && tasks[j].type != TaskType::V2G)
      a.unassigned_mandatory.push_back(tasks[j].id);
  std::sort(a.unassigned_mandatory.begin(), a.unassigned_mandatory.end());
  a.feasible = feasible;
  a.iterations = iterations;
  return a;
}

PaymentSchedule second_price_payments(const Assignment& assignment,
                                      const std::vector<Bid>& all_bids) {
  PaymentSchedule schedule;
  for (const auto& pair : assignment.pairs) {
    bool own_found = false;
    double own = 0.0;
    double lowest_other = kInf;
    for (const auto& b : all_bids) {
      if (b.task_id != pair.task_id) continue;
      if (b.worker_id == pair.worker_id) {
        own_found = true;
        own = b.amount;
      } else {
        lowest_other = std::min(lowest_other, b.amount);
      }
    }
    if (!own_found)
      throw std::invalid_argument("second_price_payments: winner " +
                                  std::to_string(pair.worker_id) +
                                  " has no recorded bid on task " +
                                  std::to_string(pair.task_id));
    Payment p;
    p.amount = lowest_other == kInf ? own : lowest_other;
    p.below_own_bid = p.amount < own;
    schedule.by_worker[pair.worker_id] = p;
  }
  return schedule;
}

}  // namespace gridride::auction
