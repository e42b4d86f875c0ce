#pragma once

#include <iosfwd>
#include <vector>

#include "gridride/domain.hpp"
#include "gridride/recommend.hpp"

namespace gridride::learn {

// Hidden ground truth: per (worker, task type) probability of bidding when
// recommended. Decision paths never read it; only the bid simulator and the
// perfect-knowledge variants do.
struct PreferenceModel {
  int num_workers = 0;
  std::vector<double> alpha;  // row-major worker x type

  PreferenceModel() = default;
  explicit PreferenceModel(int workers)
      : num_workers(workers), alpha(static_cast<std::size_t>(workers) * kNumTaskTypes, 0.0) {}

  double at(int worker, TaskType z) const {
    return alpha[static_cast<std::size_t>(worker) * kNumTaskTypes +
                 static_cast<int>(z)];
  }
  double& at(int worker, TaskType z) {
    return alpha[static_cast<std::size_t>(worker) * kNumTaskTypes +
                 static_cast<int>(z)];
  }
};

enum class UpdateMode {
  // Treat every observation as a Bernoulli outcome: no-bid drives the
  // estimate down. Default.
  Bernoulli,
  // Positive-only mode: a missing bid leaves the estimate untouched but
  // still counts the observation. Kept for ablation.
  PositiveOnly,
};

struct CarsState {
  int num_workers = 0;
  std::vector<double> alpha_hat;  // worker x type, in [0,1]
  std::vector<int> counts;        // observations per (worker, type)
  int t = 1;                      // round clock
  int q = 0;                      // num_workers * kNumTaskTypes
  UpdateMode mode = UpdateMode::Bernoulli;

  CarsState() = default;
  explicit CarsState(int workers, UpdateMode m = UpdateMode::Bernoulli);

  double alpha(int worker, TaskType z) const {
    return alpha_hat[static_cast<std::size_t>(worker) * kNumTaskTypes +
                     static_cast<int>(z)];
  }
  int count(int worker, TaskType z) const {
    return counts[static_cast<std::size_t>(worker) * kNumTaskTypes +
                  static_cast<int>(z)];
  }
};

struct Observation {
  int worker = 0;  // index
  int task = 0;    // index
  TaskType type = TaskType::Rideshare;
  bool did_bid = false;
};

// One record per nonzero recommendation entry of the round.
using ObservationBatch = std::vector<Observation>;

// UCB index for one (worker, type) arm: alpha_hat + sqrt((Q+1) ln t / m).
// +infinity while the arm is unobserved.
double ucb_index(const CarsState& state, int worker, TaskType z);

// Solves the recommendation problem with UCB indices as weights. Setting
// include_bonus=false uses the raw estimates (perfect-knowledge reduction).
recommend::PotrSolution select_action(const CarsState& state,
                                      const std::vector<Worker>& workers,
                                      const std::vector<Task>& tasks,
                                      const recommend::PotrParams& params,
                                      bool include_bonus = true);

// Applies a round of feedback: records are folded in (worker, task) order,
// then the round clock advances once.
CarsState update(const CarsState& state, const ObservationBatch& batch);

// Expected reward of an action matrix under the true preferences.
double realized_reward(const recommend::RecommendationMatrix& action,
                       const PreferenceModel& prefs,
                       const std::vector<Task>& tasks);

// t * r_star - sum of per-round rewards.
double cumulative_regret(const std::vector<double>& round_rewards,
                         double r_star);

// Upper bound on cumulative regret:
// [4 a_max^2 Q^3 (Q+1) ln t / delta_min^2 + (pi^2/3) Q^2 + Q] * delta_max.
double regret_bound(double a_max, int q, double delta_min, double delta_max,
                    double t);

// Versioned tabular checkpoint (worker id, type, alpha_hat, m). Exact
// round-trip: estimates are written with full precision.
void save_state(const CarsState& state, std::ostream& out);
CarsState load_state(std::istream& in);

}  // namespace gridride::learn
