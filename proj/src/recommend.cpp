#include "gridride/recommend.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <vector>

namespace gridride::recommend {

int RecommendationMatrix::row_sum(int i) const {
  int s = 0;
  for (int j = 0; j < num_tasks; ++j) s += at(i, j) ? 1 : 0;
  return s;
}

int RecommendationMatrix::col_sum(int j) const {
  int s = 0;
  for (int i = 0; i < num_workers; ++i) s += at(i, j) ? 1 : 0;
  return s;
}

int RecommendationMatrix::count() const {
  int s = 0;
  for (auto e : entries) s += e ? 1 : 0;
  return s;
}

int derive_psi(int num_workers, int num_tasks, int k) {
  if (num_tasks <= 0)
    throw std::invalid_argument("derive_psi: number of tasks must be positive");
  return static_cast<int>(static_cast<long long>(num_workers) * k / num_tasks);
}

int derive_v2g_min(int num_v2g, int num_tasks, int k) {
  if (num_tasks <= 0)
    throw std::invalid_argument(
        "derive_v2g_min: number of tasks must be positive");
  return static_cast<int>(static_cast<long long>(num_v2g) * k / num_tasks);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = 1e-9;

struct PairEntry {
  int worker = 0;
  int task = 0;
  double weight = 0.0;  // effective weight (big-M substituted for sentinels)
  bool sentinel = false;
  bool v2g = false;
};

// Successive-shortest-path min-cost flow over reduced costs. All arc costs
// are nonnegative by construction (profitable selection arcs enter the graph
// pre-saturated, leaving only their positively priced undo direction), so
// plain Dijkstra with potentials is exact from the start.
class MinCostFlow {
 public:
  explicit MinCostFlow(int nodes)
      : n_(nodes), adj_(nodes), potential_(nodes, 0.0), dist_(nodes),
        parent_arc_(nodes), settled_(nodes) {}

  int add_arc(int from, int to, double cap, double cost) {
    int id = static_cast<int>(arcs_.size());
    arcs_.push_back({to, cap, cost});
    arcs_.push_back({from, 0.0, -cost});
    adj_[from].push_back(id);
    adj_[to].push_back(id + 1);
    return id;
  }

  double residual(int arc) const { return arcs_[arc].cap; }
  void set_residual(int arc, double cap) { arcs_[arc].cap = cap; }

  // Pushes all available src->dst flow at minimum cost.
  double route(int src, int dst) {
    double total = 0.0;
    while (dijkstra(src, dst)) {
      double push = std::numeric_limits<double>::max();
      for (int v = dst; v != src;) {
        int a = parent_arc_[v];
        push = std::min(push, arcs_[a].cap);
        v = arcs_[a ^ 1].to;
      }
      for (int v = dst; v != src;) {
        int a = parent_arc_[v];
        arcs_[a].cap -= push;
        arcs_[a ^ 1].cap += push;
        v = arcs_[a ^ 1].to;
      }
      update_potentials(dst);
      total += push;
    }
    return total;
  }

  // True cost of the cheapest residual src->dst path, without augmenting.
  std::optional<double> probe_path(int src, int dst) {
    if (!dijkstra(src, dst)) return std::nullopt;
    return dist_[dst] - potential_[src] + potential_[dst];
  }

  // Augments one unit along the path found by the preceding probe_path call
  // and one unit on `closing_arc`, completing a residual cycle.
  void apply_unit_cycle(int src, int dst, int closing_arc) {
    for (int v = dst; v != src;) {
      int a = parent_arc_[v];
      arcs_[a].cap -= 1.0;
      arcs_[a ^ 1].cap += 1.0;
      v = arcs_[a ^ 1].to;
    }
    arcs_[closing_arc].cap -= 1.0;
    arcs_[closing_arc ^ 1].cap += 1.0;
    update_potentials(dst);
  }

 private:
  struct Arc {
    int to;
    double cap;  // residual capacity
    double cost;
  };

  bool dijkstra(int src, int dst) {
    std::fill(dist_.begin(), dist_.end(), kInf);
    std::fill(settled_.begin(), settled_.end(), false);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    dist_[src] = 0.0;
    pq.push({0.0, src});
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (settled_[u]) continue;
      settled_[u] = true;
      if (u == dst) return true;
      for (int a : adj_[u]) {
        if (arcs_[a].cap <= 0.5) continue;
        int v = arcs_[a].to;
        if (settled_[v]) continue;
        double rc = arcs_[a].cost + potential_[u] - potential_[v];
        if (rc < 0.0) rc = 0.0;  // floating-point slack
        double nd = d + rc;
        if (nd < dist_[v]) {
          dist_[v] = nd;
          parent_arc_[v] = a;
          pq.push({nd, v});
        }
      }
    }
    return false;
  }

  void update_potentials(int dst) {
    double dt = dist_[dst];
    for (int v = 0; v < n_; ++v)
      potential_[v] += std::min(dist_[v], dt);
  }

  int n_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> adj_;
  std::vector<double> potential_;
  std::vector<double> dist_;
  std::vector<int> parent_arc_;
  std::vector<char> settled_;
};

// One full solve at fixed (psi, v2g_min). Returns the selected pair set, or
// nullopt when the lower bounds are unsatisfiable. Among all maximizers this
// returns the selection whose indicator vector is lexicographically greatest
// in (worker, task) order: after the optimal flow is found, pairs are fixed
// one at a time, keeping a pair selected exactly when a zero-cost residual
// cycle can reinstate it.
std::optional<std::vector<std::uint8_t>> solve_fixed(
    const std::vector<PairEntry>& pairs, int num_workers, int num_tasks,
    int k, int psi, int v2g_min) {
  if (v2g_min > k) return std::nullopt;

  std::vector<int> deg(num_tasks, 0), v2g_deg(num_workers, 0);
  for (const auto& p : pairs) {
    deg[p.task] += 1;
    if (p.v2g) v2g_deg[p.worker] += 1;
  }
  for (int j = 0; j < num_tasks; ++j)
    if (deg[j] < psi) return std::nullopt;
  for (int i = 0; i < num_workers; ++i)
    if (v2g_deg[i] < v2g_min) return std::nullopt;

  // Node layout: S, D, workers, worker V2G gates, tasks, supersource/sink.
  const int s_node = 0;
  const int d_node = 1;
  auto w_node = [&](int i) { return 2 + i; };
  auto wv_node = [&](int i) { return 2 + num_workers + i; };
  auto t_node = [&](int j) { return 2 + 2 * num_workers + j; };
  const int ss = 2 + 2 * num_workers + num_tasks;
  const int sd = ss + 1;
  MinCostFlow flow(sd + 1);

  std::vector<double> excess(sd + 1, 0.0);
  if (k > 0) {
    for (int i = 0; i < num_workers; ++i)
      flow.add_arc(s_node, w_node(i), k, 0.0);
  }
  for (int i = 0; i < num_workers; ++i) {
    flow.add_arc(w_node(i), wv_node(i), k - v2g_min, 0.0);
    excess[wv_node(i)] += v2g_min;
    excess[w_node(i)] -= v2g_min;
  }
  std::vector<int> undo_arc(pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto& e = pairs[p];
    int u = e.v2g ? wv_node(e.worker) : w_node(e.worker);
    // Pre-select the pair; the undo arc prices deselection at +weight.
    excess[t_node(e.task)] += 1.0;
    excess[u] -= 1.0;
    undo_arc[p] = flow.add_arc(t_node(e.task), u, 1.0, e.weight);
  }
  for (int j = 0; j < num_tasks; ++j) {
    flow.add_arc(t_node(j), d_node, deg[j] - psi, 0.0);
    excess[d_node] += psi;
    excess[t_node(j)] -= psi;
  }
  flow.add_arc(d_node, s_node,
               static_cast<double>(num_workers) * std::max(k, 1), 0.0);

  double required = 0.0;
  for (int n = 0; n < sd + 1; ++n) {
    if (excess[n] > 0.5) {
      flow.add_arc(ss, n, excess[n], 0.0);
      required += excess[n];
    } else if (excess[n] < -0.5) {
      flow.add_arc(n, sd, -excess[n], 0.0);
    }
  }
  double routed = flow.route(ss, sd);
  if (routed < required - 0.5) return std::nullopt;

  // Lexicographic fixing pass.
  std::vector<std::uint8_t> x(pairs.size(), 0);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    int a = undo_arc[p];
    if (flow.residual(a) > 0.5) {
      // Currently selected; freeze it that way.
      x[p] = 1;
      flow.set_residual(a, 0.0);
      continue;
    }
    // Currently deselected. Reinstating costs the cheapest residual cycle
    // through the reselect arc; zero cost means an equally good optimum
    // keeps this pair, and lexicographic preference takes it.
    int reselect = a ^ 1;
    const auto& e = pairs[p];
    int u = e.v2g ? wv_node(e.worker) : w_node(e.worker);
    auto path = flow.probe_path(t_node(e.task), u);
    if (path.has_value() &&
        std::abs(*path - e.weight) <= kEps * (1.0 + std::abs(e.weight))) {
      flow.apply_unit_cycle(t_node(e.task), u, reselect);
      x[p] = 1;
      flow.set_residual(a, 0.0);
    } else {
      x[p] = 0;
      flow.set_residual(reselect, 0.0);
    }
  }
  return x;
}

}  // namespace

PotrSolution solve_potr(const WeightMatrix& weights,
                        const std::vector<Worker>& workers,
                        const std::vector<Task>& tasks,
                        const PotrParams& params) {
  const int num_workers = static_cast<int>(workers.size());
  const int num_tasks = static_cast<int>(tasks.size());
  if (weights.num_workers != num_workers || weights.num_tasks != num_tasks)
    throw std::invalid_argument("solve_potr: weight matrix shape mismatch");
  if (params.k < 0) throw std::invalid_argument("solve_potr: k must be >= 0");

  PotrSolution sol;
  if (num_tasks == 0 || num_workers == 0) {
    sol.matrix = RecommendationMatrix(num_workers, num_tasks);
    sol.matrix.k = params.k;
    sol.matrix.psi = params.psi.value_or(0);
    sol.matrix.v2g_min = params.v2g_min.value_or(0);
    return sol;
  }

  int num_v2g = 0;
  for (const auto& t : tasks) num_v2g += v2g_indicator(t.type);
  const int psi0 = params.psi.value_or(
      derive_psi(num_workers, num_tasks, params.k));
  const int v2g0 = params.v2g_min.value_or(
      derive_v2g_min(num_v2g, num_tasks, params.k));
  if (psi0 < 0 || v2g0 < 0)
    throw std::invalid_argument("solve_potr: bounds must be >= 0");

  // Eligible pairs in lexicographic (worker, task) order.
  std::vector<PairEntry> pairs;
  double finite_sum = 0.0;
  bool any_sentinel = false;
  for (int i = 0; i < num_workers; ++i) {
    for (int j = 0; j < num_tasks; ++j) {
      if (!eligible(workers[i], tasks[j], params.lambda_km)) continue;
      double w = weights.at(i, j);
      if (std::isnan(w) || w < 0.0)
        throw std::invalid_argument(
            "solve_potr: weights must be nonnegative and not NaN");
      PairEntry e;
      e.worker = i;
      e.task = j;
      e.sentinel = std::isinf(w);
      e.v2g = tasks[j].type == TaskType::V2G;
      e.weight = e.sentinel ? 0.0 : w;
      if (!e.sentinel) finite_sum += w;
      any_sentinel = any_sentinel || e.sentinel;
      pairs.push_back(e);
    }
  }
  if (any_sentinel) {
    // One sentinel outranks every finite combination; a power of two keeps
    // the arithmetic exact for grid-valued weights.
    double big = std::exp2(std::ceil(std::log2(finite_sum + 2.0)));
    for (auto& e : pairs)
      if (e.sentinel) e.weight = big;
  }

  auto attempt = [&](int psi, int v2g) {
    return solve_fixed(pairs, num_workers, num_tasks, params.k, psi, v2g);
  };

  int psi_eff = psi0;
  int v2g_eff = v2g0;
  auto selection = attempt(psi0, v2g0);
  if (!selection.has_value()) {
    if (!params.allow_relaxation) {
      bool psi_alone = attempt(0, v2g0).has_value();
      bool v2g_alone = attempt(psi0, 0).has_value();
      std::string cls = psi_alone && !v2g_alone   ? "psi"
                        : v2g_alone && !psi_alone ? "v2g_min"
                                                  : "psi+v2g_min";
      throw PotrInfeasible("solve_potr: infeasible constraint class: " + cls);
    }
    // Lower psi first; if that alone cannot restore feasibility, lower
    // v2g_min while keeping psi as high as possible.
    for (int psi = psi0 - 1; psi >= 0 && !selection; --psi) {
      selection = attempt(psi, v2g0);
      if (selection) psi_eff = psi;
    }
    if (!selection) {
      for (int v2g = v2g0 - 1; v2g >= 0 && !selection; --v2g) {
        for (int psi = psi0; psi >= 0 && !selection; --psi) {
          selection = attempt(psi, v2g);
          if (selection) {
            psi_eff = psi;
            v2g_eff = v2g;
          }
        }
      }
    }
    if (!selection)
      throw PotrInfeasible("solve_potr: no feasible relaxation found");
    if (psi_eff != psi0)
      sol.relaxation_report.push_back({"psi", psi0, psi_eff});
    if (v2g_eff != v2g0)
      sol.relaxation_report.push_back({"v2g_min", v2g0, v2g_eff});
  }

  sol.matrix = RecommendationMatrix(num_workers, num_tasks);
  sol.matrix.k = params.k;
  sol.matrix.psi = psi_eff;
  sol.matrix.v2g_min = v2g_eff;
  double objective = 0.0;
  bool sentinel_selected = false;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    if (!(*selection)[p]) continue;
    sol.matrix.set(pairs[p].worker, pairs[p].task, true);
    sentinel_selected = sentinel_selected || pairs[p].sentinel;
    objective += weights.at(pairs[p].worker, pairs[p].task);
  }
  sol.objective = sentinel_selected ? kInf : objective;
  return sol;
}

}  // namespace gridride::recommend
