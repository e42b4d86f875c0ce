#include "gridride/learner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace gridride::learn {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPiSqOver3 = 3.2898681336964528;  // pi^2 / 3
}  // namespace

CarsState::CarsState(int workers, UpdateMode m)
    : num_workers(workers),
      alpha_hat(static_cast<std::size_t>(workers) * kNumTaskTypes, 0.5),
      counts(static_cast<std::size_t>(workers) * kNumTaskTypes, 0),
      t(1),
      q(workers * kNumTaskTypes),
      mode(m) {}

double ucb_index(const CarsState& state, int worker, TaskType z) {
  int m = state.count(worker, z);
  if (m == 0) return kInf;  // unobserved arms are explored first
  double bonus = std::sqrt((state.q + 1) * std::log(static_cast<double>(state.t)) /
                           static_cast<double>(m));
  return state.alpha(worker, z) + bonus;
}

recommend::PotrSolution select_action(const CarsState& state,
                                      const std::vector<Worker>& workers,
                                      const std::vector<Task>& tasks,
                                      const recommend::PotrParams& params,
                                      bool include_bonus) {
  if (state.num_workers != static_cast<int>(workers.size()))
    throw std::invalid_argument("select_action: state/worker count mismatch");
  recommend::WeightMatrix w(static_cast<int>(workers.size()),
                            static_cast<int>(tasks.size()));
  for (int i = 0; i < w.num_workers; ++i) {
    for (int j = 0; j < w.num_tasks; ++j) {
      TaskType z = tasks[j].type;
      w.at(i, j) =
          include_bonus ? ucb_index(state, i, z) : state.alpha(i, z);
    }
  }
  return recommend::solve_potr(w, workers, tasks, params);
}

CarsState update(const CarsState& state, const ObservationBatch& batch) {
  CarsState next = state;
  ObservationBatch ordered = batch;
  std::sort(ordered.begin(), ordered.end(),
            [](const Observation& a, const Observation& b) {
              return a.worker != b.worker ? a.worker < b.worker
                                          : a.task < b.task;
            });
  for (const auto& obs : ordered) {
    if (obs.worker < 0 || obs.worker >= state.num_workers)
      throw std::invalid_argument("update: unknown worker index " +
                                  std::to_string(obs.worker));
    std::size_t idx = static_cast<std::size_t>(obs.worker) * kNumTaskTypes +
                      static_cast<int>(obs.type);
    double m = static_cast<double>(next.counts[idx]);
    if (obs.did_bid) {
      next.alpha_hat[idx] = (next.alpha_hat[idx] * m + 1.0) / (m + 1.0);
    } else if (next.mode == UpdateMode::Bernoulli) {
      next.alpha_hat[idx] = (next.alpha_hat[idx] * m) / (m + 1.0);
    }
    // Positive-only mode leaves the estimate unchanged on a missing bid but
    // counts the observation.
    next.counts[idx] += 1;
  }
  next.t = state.t + 1;
  return next;
}

double realized_reward(const recommend::RecommendationMatrix& action,
                       const PreferenceModel& prefs,
                       const std::vector<Task>& tasks) {
  if (action.num_tasks != static_cast<int>(tasks.size()) ||
      action.num_workers != prefs.num_workers)
    throw std::invalid_argument("realized_reward: shape mismatch");
  double r = 0.0;
  for (int i = 0; i < action.num_workers; ++i)
    for (int j = 0; j < action.num_tasks; ++j)
      if (action.at(i, j)) r += prefs.at(i, tasks[j].type);
  return r;
}

double cumulative_regret(const std::vector<double>& round_rewards,
                         double r_star) {
  double total = 0.0;
  for (double r : round_rewards) total += r;
  return static_cast<double>(round_rewards.size()) * r_star - total;
}

double regret_bound(double a_max, int q, double delta_min, double delta_max,
                    double t) {
  if (delta_min <= 0.0)
    throw std::invalid_argument("regret_bound: delta_min must be > 0");
  if (t < 1.0) throw std::invalid_argument("regret_bound: t must be >= 1");
  double qd = static_cast<double>(q);
  double log_term = 4.0 * a_max * a_max * qd * qd * qd * (qd + 1.0) *
                    std::log(t) / (delta_min * delta_min);
  return (log_term + kPiSqOver3 * qd * qd + qd) * delta_max;
}

void save_state(const CarsState& state, std::ostream& out) {
  out << "gridride-learner v1\n";
  out << "t " << state.t << "\n";
  out << "mode "
      << (state.mode == UpdateMode::Bernoulli ? "bernoulli" : "positive-only")
      << "\n";
  out << "worker_id task_type alpha_hat m\n";
  char buf[64];
  for (int i = 0; i < state.num_workers; ++i) {
    for (int z = 0; z < kNumTaskTypes; ++z) {
      std::size_t idx = static_cast<std::size_t>(i) * kNumTaskTypes + z;
      std::snprintf(buf, sizeof(buf), "%.17g", state.alpha_hat[idx]);
      out << i << " " << z << " " << buf << " " << state.counts[idx] << "\n";
    }
  }
}

CarsState load_state(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "gridride-learner v1")
    throw std::runtime_error("learner state: unsupported format or version");
  int t = 0;
  std::string mode_str;
  {
    std::getline(in, line);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag >> t) || tag != "t")
      throw std::runtime_error("learner state: missing round clock");
    std::getline(in, line);
    std::istringstream ms(line);
    if (!(ms >> tag >> mode_str) || tag != "mode")
      throw std::runtime_error("learner state: missing update mode");
    std::getline(in, line);  // column header
  }
  struct Row {
    int worker, type, m;
    double alpha;
  };
  std::vector<Row> rows;
  int max_worker = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    Row r{};
    if (!(ls >> r.worker >> r.type >> r.alpha >> r.m))
      throw std::runtime_error("learner state: malformed row: " + line);
    if (r.type < 0 || r.type >= kNumTaskTypes || r.worker < 0 || r.m < 0 ||
        r.alpha < 0.0 || r.alpha > 1.0)
      throw std::runtime_error("learner state: out-of-range row: " + line);
    rows.push_back(r);
    max_worker = std::max(max_worker, r.worker);
  }
  CarsState state(max_worker + 1, mode_str == "positive-only"
                                      ? UpdateMode::PositiveOnly
                                      : UpdateMode::Bernoulli);
  state.t = t;
  for (const auto& r : rows) {
    std::size_t idx = static_cast<std::size_t>(r.worker) * kNumTaskTypes + r.type;
    state.alpha_hat[idx] = r.alpha;
    state.counts[idx] = r.m;
  }
  return state;
}

}  // namespace gridride::learn
