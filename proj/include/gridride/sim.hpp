#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gridride/auction.hpp"
#include "gridride/baseline.hpp"
#include "gridride/domain.hpp"
#include "gridride/learner.hpp"
#include "gridride/recommend.hpp"

namespace gridride::sim {

// Pipeline variants: {recommendation source} x {winner selection}, plus the
// greedy comparator. pk = true preferences, cars = learned; opt = exact
// solver, bmw = matching heuristic.
enum class Variant { PkOpt, CarsOpt, PkBmw, CarsBmw, Bg };

const char* variant_name(Variant v);
std::optional<Variant> variant_from_name(const std::string& name);
std::vector<Variant> all_variants();

enum class BudgetRule {
  FixedKwh,   // constant per-round requirement
  SumOfV2g,   // requirement equals the total deliverable energy of the
              // round's live V2G tasks
};

struct BidModel {
  double beta0 = 2.0;       // base fare
  double beta1 = 1.0;       // fare per km (approach + service equivalent)
  double markup_min = 0.9;  // per-worker multiplier range
  double markup_max = 1.15;
  double noise_sd = 0.0;    // zero-mean noise on the final amount
  double min_amount = 0.5;  // bids never fall below this
};

struct Scenario {
  int num_workers = 15;
  int rounds = 96;
  int k = 5;
  double lambda_km = 10.0;
  // Expected new tasks per round by type; integer part is deterministic,
  // the fractional part is a Bernoulli top-up.
  double rate_rideshare = 10.0;
  double rate_swap = 5.0;
  double rate_v2g = 5.0;
  BudgetRule budget_rule = BudgetRule::SumOfV2g;
  double budget_kwh = 0.0;  // used by FixedKwh
  std::vector<double> preference_set = {0.1, 0.4, 0.5, 0.7, 0.9, 1.0};
  BidModel bid_model;
  std::uint64_t seed = 1;
  Variant variant = Variant::PkOpt;
  bool static_mode = false;
  learn::UpdateMode update_mode = learn::UpdateMode::Bernoulli;

  // Geometry / dynamics knobs.
  double region_km = 20.0;       // square side for uniform placement
  double speed_kmh = 30.0;       // driving speed for busy-time accounting
  int charge_rounds = 4;         // rounds spent recharging to full
  // Idle workers below this fraction of capacity top up between jobs;
  // without it the fleet drifts into a band where nothing is serviceable
  // yet the hard reserve trigger never fires.
  double idle_charge_frac = 0.25;
  int carry_rounds = 1;          // extra rounds an unserved task stays live
  double v2g_energy_min = 1.0;   // deliverable kWh range for V2G tasks
  double v2g_energy_max = 10.0;
  double worker_eff_min = 0.13;  // kWh per km
  double worker_eff_max = 0.25;
  double worker_capacity_min = 40.0;  // battery kWh
  double worker_capacity_max = 100.0;
  double worker_min_range_min = 10.0;  // reserve km
  double worker_min_range_max = 30.0;

  // Optional CSV replay instead of synthetic generation.
  std::string workers_csv;
  std::string tasks_csv;
};

void validate_scenario(const Scenario& s);

// Mutable per-worker simulation state.
struct WorkerDynamics {
  Point location;
  double energy_kwh = 0.0;
  double capacity_kwh = 0.0;
  double energy_per_km = 0.0;
  double min_range_km = 0.0;
  int busy_until = 0;     // first round the worker is free again
  int charge_until = 0;   // first round after charging completes
  bool charge_pending = false;  // refill applies when charging ends
  double odometer_km = 0.0;
};

struct RoundRecord {
  int round = 0;
  double objective = 0.0;  // sum of winning bids
  int tasks_completed = 0;
  double payments_total = 0.0;
  double delivered_v2g_kwh = 0.0;
  bool budget_met = false;
  double reward = 0.0;                 // expected reward of the action matrix
  std::optional<double> mae;           // learning variants only
  std::optional<double> regret;        // static-mode learning variants only
};

struct RunReport {
  Scenario scenario;
  std::vector<RoundRecord> rounds;
  std::vector<double> cumulative_objective;
  std::vector<double> cumulative_tasks;
  std::vector<double> cumulative_payments;
  std::vector<double> cumulative_reward;
  std::vector<double> avg_price_per_task;  // cumulative payments / tasks
  double r_star = 0.0;  // static mode only: perfect-knowledge optimum
};

// Synthetic population and task stream (all counter-seeded, so the stream is
// identical across variants sharing a seed).
std::vector<Worker> generate_workers(const Scenario& s);
learn::PreferenceModel sample_preferences(const Scenario& s);
std::vector<Task> generate_tasks(const Scenario& s, int round,
                                 int id_offset);

// Bids for recommended pairs: Bernoulli(alpha_true) participation, amount
// affine in approach + service distance (V2G energy converted through the
// worker's efficiency), scaled by a per-worker markup, plus optional noise.
std::vector<Bid> simulate_bids(const recommend::RecommendationMatrix& action,
                               const std::vector<Worker>& workers,
                               const std::vector<Task>& tasks,
                               const learn::PreferenceModel& prefs,
                               const Scenario& s, int round);

// Advances winner state: relocation, energy draw, busy time, charging.
// Throws if an assignment would drive a worker's energy negative.
void apply_round(std::vector<WorkerDynamics>& dyn,
                 const std::vector<Worker>& snapshot,
                 const std::vector<Task>& tasks,
                 const auction::Assignment& assignment, int round,
                 const Scenario& s);

// Mean absolute error between learned and true preferences.
double mae(const learn::CarsState& state, const learn::PreferenceModel& prefs);

// Full round loop for one (scenario, seed, variant) cell.
RunReport run(const Scenario& s);

}  // namespace gridride::sim
