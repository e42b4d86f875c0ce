#include "gridride/sim.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <unordered_map>

#include "gridride/io.hpp"
#include "gridride/rng.hpp"

namespace gridride::sim {

namespace {
constexpr double kEps = 1e-9;
}

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::PkOpt: return "pk-opt";
    case Variant::CarsOpt: return "cars-opt";
    case Variant::PkBmw: return "pk-bmw";
    case Variant::CarsBmw: return "cars-bmw";
    case Variant::Bg: return "bg";
  }
  return "?";
}

std::optional<Variant> variant_from_name(const std::string& name) {
  std::string n;
  for (char c : name) n.push_back(static_cast<char>(std::tolower(c)));
  if (n == "pk-opt") return Variant::PkOpt;
  if (n == "cars-opt") return Variant::CarsOpt;
  if (n == "pk-bmw") return Variant::PkBmw;
  if (n == "cars-bmw") return Variant::CarsBmw;
  if (n == "bg") return Variant::Bg;
  return std::nullopt;
}

std::vector<Variant> all_variants() {
  return {Variant::PkOpt, Variant::CarsOpt, Variant::PkBmw, Variant::CarsBmw,
          Variant::Bg};
}

void validate_scenario(const Scenario& s) {
  auto fail = [](const std::string& msg) {
    throw std::invalid_argument("scenario: " + msg);
  };
  if (s.rounds < 1) fail("rounds must be >= 1");
  if (s.num_workers < 1 && s.workers_csv.empty())
    fail("num_workers must be >= 1");
  if (s.k < 1) fail("K must be >= 1");
  if (s.lambda_km <= 0.0) fail("lambda_km must be > 0");
  if (s.rate_rideshare < 0.0 || s.rate_swap < 0.0 || s.rate_v2g < 0.0)
    fail("task rates must be >= 0");
  if (s.budget_rule == BudgetRule::FixedKwh && s.budget_kwh < 0.0)
    fail("budget_kwh must be >= 0");
  if (s.preference_set.empty()) fail("preference_set must be nonempty");
  for (double p : s.preference_set)
    if (p < 0.0 || p > 1.0) fail("preferences must lie in [0,1]");
  if (s.region_km <= 0.0) fail("region_km must be > 0");
  if (s.speed_kmh <= 0.0) fail("speed_kmh must be > 0");
  if (s.charge_rounds < 1) fail("charge_rounds must be >= 1");
  if (s.idle_charge_frac < 0.0 || s.idle_charge_frac > 1.0)
    fail("idle_charge_frac must lie in [0,1]");
  if (s.carry_rounds < 0) fail("carry_rounds must be >= 0");
  if (s.v2g_energy_min <= 0.0 || s.v2g_energy_max < s.v2g_energy_min)
    fail("v2g energy range invalid");
  if (s.worker_eff_min <= 0.0 || s.worker_eff_max < s.worker_eff_min)
    fail("worker efficiency range invalid");
  if (s.bid_model.min_amount <= 0.0) fail("bid floor must be > 0");
}

std::vector<Worker> generate_workers(const Scenario& s) {
  std::vector<Worker> workers;
  workers.reserve(s.num_workers);
  for (int i = 0; i < s.num_workers; ++i) {
    using rng::Stream;
    Worker w;
    w.id = i;
    w.location.x = rng::uniform(rng::key(s.seed, Stream::WorkerGen, i, 0),
                                0.0, s.region_km);
    w.location.y = rng::uniform(rng::key(s.seed, Stream::WorkerGen, i, 1),
                                0.0, s.region_km);
    w.energy_per_km = rng::uniform(rng::key(s.seed, Stream::WorkerGen, i, 2),
                                   s.worker_eff_min, s.worker_eff_max);
    double capacity =
        rng::uniform(rng::key(s.seed, Stream::WorkerGen, i, 3),
                     s.worker_capacity_min, s.worker_capacity_max);
    w.range_km = capacity / w.energy_per_km;
    w.min_range_km = rng::uniform(rng::key(s.seed, Stream::WorkerGen, i, 4),
                                  s.worker_min_range_min, s.worker_min_range_max);
    w.status = WorkerStatus::Available;
    workers.push_back(w);
  }
  return workers;
}

learn::PreferenceModel sample_preferences(const Scenario& s) {
  int n = s.num_workers;
  learn::PreferenceModel prefs(n);
  for (int i = 0; i < n; ++i) {
    for (int z = 0; z < kNumTaskTypes; ++z) {
      double u = rng::u01(rng::key(s.seed, rng::Stream::Preference, i, z));
      auto idx = std::min<std::size_t>(
          static_cast<std::size_t>(u * s.preference_set.size()),
          s.preference_set.size() - 1);
      prefs.at(i, static_cast<TaskType>(z)) = s.preference_set[idx];
    }
  }
  return prefs;
}

std::vector<Task> generate_tasks(const Scenario& s, int round, int id_offset) {
  using rng::Stream;
  std::vector<Task> tasks;
  int next_id = id_offset;
  const double rates[kNumTaskTypes] = {s.rate_rideshare, s.rate_swap,
                                       s.rate_v2g};
  for (int z = 0; z < kNumTaskTypes; ++z) {
    double rate = rates[z];
    int count = static_cast<int>(std::floor(rate));
    double frac = rate - std::floor(rate);
    if (frac > 0.0 &&
        rng::bernoulli(rng::key(s.seed, Stream::TaskCount, round, z), frac))
      ++count;
    for (int n = 0; n < count; ++n) {
      Task t;
      t.id = next_id++;
      t.type = static_cast<TaskType>(z);
      t.slot_created = round;
      t.origin.x = rng::uniform(
          rng::key(s.seed, Stream::TaskGeometry, round, next_id, 0), 0.0,
          s.region_km);
      t.origin.y = rng::uniform(
          rng::key(s.seed, Stream::TaskGeometry, round, next_id, 1), 0.0,
          s.region_km);
      if (t.type == TaskType::V2G) {
        t.destination = t.origin;
        t.deliverable_kwh = rng::uniform(
            rng::key(s.seed, Stream::TaskEnergy, round, next_id, 0),
            s.v2g_energy_min, s.v2g_energy_max);
      } else {
        t.destination.x = rng::uniform(
            rng::key(s.seed, Stream::TaskGeometry, round, next_id, 2), 0.0,
            s.region_km);
        t.destination.y = rng::uniform(
            rng::key(s.seed, Stream::TaskGeometry, round, next_id, 3), 0.0,
            s.region_km);
      }
      tasks.push_back(t);
    }
  }
  return tasks;
}

std::vector<Bid> simulate_bids(const recommend::RecommendationMatrix& action,
                               const std::vector<Worker>& workers,
                               const std::vector<Task>& tasks,
                               const learn::PreferenceModel& prefs,
                               const Scenario& s, int round) {
  using rng::Stream;
  std::vector<Bid> bids;
  for (int i = 0; i < action.num_workers; ++i) {
    const Worker& w = workers[i];
    for (int j = 0; j < action.num_tasks; ++j) {
      if (!action.at(i, j)) continue;
      const Task& t = tasks[j];
      // Participation and pricing draws are keyed on persistent ids, so a
      // given (round, worker, task) pair bids the same way in every variant.
      double alpha = prefs.at(w.id, t.type);
      if (!rng::bernoulli(rng::key(s.seed, Stream::BidDecision, round, w.id,
                                   t.id),
                          alpha))
        continue;
      double service_km = t.type == TaskType::V2G
                              ? t.deliverable_kwh / w.energy_per_km
                              : t.service_distance_km();
      double dist_km = distance(w.location, t.origin) + service_km;
      double markup = rng::uniform(rng::key(s.seed, Stream::BidMarkup, w.id),
                                   s.bid_model.markup_min,
                                   s.bid_model.markup_max);
      double amount =
          (s.bid_model.beta0 + s.bid_model.beta1 * dist_km) * markup;
      if (s.bid_model.noise_sd > 0.0)
        amount += rng::normal(
            rng::key(s.seed, Stream::BidNoise, round, w.id, t.id), 0.0,
            s.bid_model.noise_sd);
      amount = std::max(amount, s.bid_model.min_amount);
      bids.push_back({w.id, t.id, amount});
    }
  }
  return bids;
}

void apply_round(std::vector<WorkerDynamics>& dyn,
                 const std::vector<Worker>& snapshot,
                 const std::vector<Task>& tasks,
                 const auction::Assignment& assignment, int round,
                 const Scenario& s) {
  std::unordered_map<int, const Worker*> snap_by_id;
  for (const auto& w : snapshot) snap_by_id[w.id] = &w;
  std::unordered_map<int, const Task*> task_by_id;
  for (const auto& t : tasks) task_by_id[t.id] = &t;

  for (const auto& pair : assignment.pairs) {
    auto wit = snap_by_id.find(pair.worker_id);
    auto tit = task_by_id.find(pair.task_id);
    if (wit == snap_by_id.end() || tit == task_by_id.end())
      throw std::invalid_argument("apply_round: assignment references "
                                  "unknown worker or task");
    const Worker& w = *wit->second;
    const Task& t = *tit->second;
    WorkerDynamics& d = dyn[static_cast<std::size_t>(pair.worker_id)];

    EnergyLedgerEntry draw = energy_to_perform(w, t);
    if (d.energy_kwh - draw.total_draw_kwh < -kEps)
      throw std::logic_error("apply_round: assignment would drive worker " +
                             std::to_string(pair.worker_id) +
                             " energy negative");
    double trip_km = distance(w.location, t.origin) + t.service_distance_km();
    d.energy_kwh -= draw.total_draw_kwh;
    d.location = t.destination;
    d.odometer_km += trip_km;
    double minutes = trip_km / s.speed_kmh * 60.0;
    int busy_rounds = std::max(1, static_cast<int>(std::ceil(minutes / 15.0)));
    d.busy_until = round + busy_rounds;
    if (d.energy_kwh < d.min_range_km * d.energy_per_km) {
      d.charge_until = d.busy_until + s.charge_rounds;
      d.charge_pending = true;
    }
  }
}

double mae(const learn::CarsState& state, const learn::PreferenceModel& prefs) {
  if (state.num_workers != prefs.num_workers)
    throw std::invalid_argument("mae: shape mismatch");
  if (state.num_workers == 0) return 0.0;
  double sum = 0.0;
  for (int i = 0; i < state.num_workers; ++i)
    for (int z = 0; z < kNumTaskTypes; ++z)
      sum += std::abs(state.alpha(i, static_cast<TaskType>(z)) -
                      prefs.at(i, static_cast<TaskType>(z)));
  return sum / (state.num_workers * kNumTaskTypes);
}

namespace {

bool is_cars(Variant v) {
  return v == Variant::CarsOpt || v == Variant::CarsBmw;
}
bool is_opt(Variant v) { return v == Variant::PkOpt || v == Variant::CarsOpt; }

// Exact maximum of total deliverable energy over matchings in the bid graph
// restricted to V2G tasks; the fallback budget when the requested amount is
// out of reach.
double max_attainable_delivery(const std::vector<Bid>& bids,
                               const std::vector<Worker>& workers,
                               const std::vector<Task>& tasks) {
  std::unordered_map<int, int> widx;
  for (std::size_t i = 0; i < workers.size(); ++i)
    widx[workers[i].id] = static_cast<int>(i);
  struct V2gTask {
    double delta;
    std::vector<int> bidders;
  };
  std::unordered_map<int, std::size_t> slot;
  std::vector<V2gTask> v2g;
  for (const auto& t : tasks) {
    if (t.type != TaskType::V2G) continue;
    slot[t.id] = v2g.size();
    v2g.push_back({t.deliverable_kwh, {}});
  }
  for (const auto& b : bids) {
    auto it = slot.find(b.task_id);
    if (it != slot.end()) v2g[it->second].bidders.push_back(widx[b.worker_id]);
  }
  std::sort(v2g.begin(), v2g.end(),
            [](const V2gTask& a, const V2gTask& b) { return a.delta > b.delta; });
  std::vector<double> suffix(v2g.size() + 1, 0.0);
  for (int i = static_cast<int>(v2g.size()) - 1; i >= 0; --i)
    suffix[i] = suffix[i + 1] + (v2g[i].bidders.empty() ? 0.0 : v2g[i].delta);

  std::vector<bool> used(workers.size(), false);
  double best = 0.0;
  auto dfs = [&](auto&& self, std::size_t pos, double delivered) -> void {
    best = std::max(best, delivered);
    if (pos == v2g.size()) return;
    if (delivered + suffix[pos] <= best) return;
    for (int w : v2g[pos].bidders) {
      if (used[w]) continue;
      used[w] = true;
      self(self, pos + 1, delivered + v2g[pos].delta);
      used[w] = false;
    }
    self(self, pos + 1, delivered);
  };
  dfs(dfs, 0, 0.0);
  return best;
}

struct SimContext {
  Scenario scenario;
  std::vector<Worker> population;
  std::unordered_map<int, int> pop_index;  // worker id -> population slot
  learn::PreferenceModel prefs;
};

}  // namespace

RunReport run(const Scenario& s) {
  validate_scenario(s);

  SimContext ctx;
  ctx.scenario = s;
  if (!s.workers_csv.empty()) {
    ctx.population = io::ingest_workers(s.workers_csv);
  } else {
    ctx.population = generate_workers(s);
  }
  const int n = static_cast<int>(ctx.population.size());
  if (n < 1) throw std::invalid_argument("run: no workers");
  for (int i = 0; i < n; ++i) ctx.pop_index[ctx.population[i].id] = i;

  {
    Scenario pref_scenario = s;
    pref_scenario.num_workers = n;
    ctx.prefs = sample_preferences(pref_scenario);
  }
  // Preferences are stored by population slot; make lookups by worker id
  // valid by aligning ids when synthetic (ids are 0..n-1 there already).
  auto alpha_of = [&](int worker_id, TaskType z) {
    return ctx.prefs.at(ctx.pop_index.at(worker_id), z);
  };

  std::vector<WorkerDynamics> dyn(n);
  for (int i = 0; i < n; ++i) {
    const Worker& w = ctx.population[i];
    dyn[i].location = w.location;
    dyn[i].energy_per_km = w.energy_per_km;
    dyn[i].min_range_km = w.min_range_km;
    dyn[i].capacity_kwh = w.range_km * w.energy_per_km;
    dyn[i].energy_kwh = dyn[i].capacity_kwh;
  }

  std::vector<Task> replay_tasks;
  if (!s.tasks_csv.empty()) replay_tasks = io::ingest_tasks(s.tasks_csv);

  // Static mode: one task set, frozen workers, round-independent budget.
  std::vector<Task> static_tasks;
  double static_budget = 0.0;
  if (s.static_mode) {
    static_tasks =
        replay_tasks.empty() ? generate_tasks(s, 1, 0) : replay_tasks;
    if (s.budget_rule == BudgetRule::FixedKwh) {
      static_budget = s.budget_kwh;
    } else {
      for (const auto& t : static_tasks)
        if (t.type == TaskType::V2G) static_budget += t.deliverable_kwh;
    }
  }

  learn::CarsState cars(n, s.update_mode);

  RunReport report;
  report.scenario = s;

  // Perfect-knowledge optimum for regret accounting (static mode only).
  if (s.static_mode && !static_tasks.empty()) {
    recommend::WeightMatrix w(n, static_cast<int>(static_tasks.size()));
    for (int i = 0; i < n; ++i)
      for (std::size_t j = 0; j < static_tasks.size(); ++j)
        w.at(i, static_cast<int>(j)) =
            alpha_of(ctx.population[i].id, static_tasks[j].type);
    recommend::PotrParams params;
    params.k = s.k;
    params.lambda_km = s.lambda_km;
    report.r_star =
        recommend::solve_potr(w, ctx.population, static_tasks, params)
            .objective;
  }

  std::vector<Task> alive;
  std::set<int> served_ids;
  int next_task_id = 0;
  double reward_sum = 0.0;

  for (int round = 1; round <= s.rounds; ++round) {
    // Worker snapshot for the round.
    std::vector<Worker> avail;
    if (s.static_mode) {
      avail = ctx.population;
    } else {
      for (int i = 0; i < n; ++i) {
        WorkerDynamics& d = dyn[i];
        if (d.charge_pending && round >= d.charge_until) {
          d.energy_kwh = d.capacity_kwh;
          d.charge_pending = false;
        }
        if (round < d.busy_until || round < d.charge_until) continue;
        Worker w = ctx.population[i];
        w.location = d.location;
        w.range_km = d.energy_kwh / d.energy_per_km;
        w.status = WorkerStatus::Available;
        avail.push_back(w);
      }
    }

    // Task pool for the round.
    if (s.static_mode) {
      alive = static_tasks;
    } else {
      std::vector<Task> fresh;
      if (!replay_tasks.empty()) {
        for (const auto& t : replay_tasks)
          if (t.slot_created == round) fresh.push_back(t);
      } else {
        fresh = generate_tasks(s, round, next_task_id);
        if (!fresh.empty()) next_task_id = fresh.back().id + 1;
      }
      std::vector<Task> still;
      for (const auto& t : alive) {
        if (served_ids.count(t.id)) continue;
        if (round - t.slot_created > s.carry_rounds) continue;
        still.push_back(t);
      }
      alive = std::move(still);
      alive.insert(alive.end(), fresh.begin(), fresh.end());
      std::sort(alive.begin(), alive.end(),
                [](const Task& a, const Task& b) { return a.id < b.id; });
    }

    EnergyBudget budget;
    if (s.budget_rule == BudgetRule::FixedKwh) {
      budget.required_kwh = s.static_mode ? static_budget : s.budget_kwh;
    } else if (s.static_mode) {
      budget.required_kwh = static_budget;
    } else {
      for (const auto& t : alive)
        if (t.type == TaskType::V2G) budget.required_kwh += t.deliverable_kwh;
    }

    RoundRecord rec;
    rec.round = round;

    if (alive.empty() || avail.empty()) {
      rec.budget_met = budget.required_kwh <= kEps;
      if (is_cars(s.variant)) {
        cars = learn::update(cars, {});
        rec.mae = mae(cars, ctx.prefs);
        if (s.static_mode)
          rec.regret = static_cast<double>(cars.t - 1) * report.r_star -
                       reward_sum;
      }
      report.rounds.push_back(rec);
      continue;
    }

    // 1) Recommend.
    recommend::RecommendationMatrix action;
    if (s.variant == Variant::Bg) {
      learn::PreferenceModel sub(static_cast<int>(avail.size()));
      for (std::size_t i = 0; i < avail.size(); ++i)
        for (int z = 0; z < kNumTaskTypes; ++z)
          sub.at(static_cast<int>(i), static_cast<TaskType>(z)) =
              alpha_of(avail[i].id, static_cast<TaskType>(z));
      action = baseline::pk_topk(sub, avail, alive, s.k, s.lambda_km);
    } else {
      recommend::WeightMatrix w(static_cast<int>(avail.size()),
                                static_cast<int>(alive.size()));
      for (int i = 0; i < w.num_workers; ++i) {
        for (int j = 0; j < w.num_tasks; ++j) {
          TaskType z = alive[j].type;
          w.at(i, j) = is_cars(s.variant)
                           ? learn::ucb_index(cars,
                                              ctx.pop_index.at(avail[i].id), z)
                           : alpha_of(avail[i].id, z);
        }
      }
      recommend::PotrParams params;
      params.k = s.k;
      params.lambda_km = s.lambda_km;
      action = recommend::solve_potr(w, avail, alive, params).matrix;
    }

    // 2) Collect bids.
    std::vector<Bid> bids =
        simulate_bids(action, avail, alive, ctx.prefs, s, round);

    // 3) Select winners.
    auction::Assignment assignment;
    bool budget_met = false;
    if (s.variant == Variant::Bg) {
      baseline::BaselineOutcome out =
          baseline::bg_assign(bids, avail, alive, budget);
      assignment = out.assignment;
      budget_met = !out.violated_budget;
    } else if (is_opt(s.variant)) {
      double penalty = auction::default_penalty(bids);
      try {
        assignment = auction::solve_wibs_exact(bids, avail, alive, budget,
                                               penalty);
        budget_met = true;
      } catch (const auction::WibsInfeasible&) {
        // Requested energy is out of reach this round; fall back to the
        // maximum attainable delivery and flag the round.
        EnergyBudget reduced;
        reduced.required_kwh = max_attainable_delivery(bids, avail, alive);
        assignment =
            auction::solve_wibs_exact(bids, avail, alive, reduced, penalty);
        budget_met = false;
      }
    } else {
      assignment = auction::bmw(bids, avail, alive, budget);
      budget_met = assignment.feasible;
    }

    // 4) Payments.
    auction::PaymentSchedule payments =
        auction::second_price_payments(assignment, bids);

    // 5) Learn from recommendations.
    double reward = 0.0;
    for (int i = 0; i < action.num_workers; ++i)
      for (int j = 0; j < action.num_tasks; ++j)
        if (action.at(i, j)) reward += alpha_of(avail[i].id, alive[j].type);

    if (is_cars(s.variant)) {
      std::set<std::pair<int, int>> bid_set;
      for (const auto& b : bids) bid_set.insert({b.worker_id, b.task_id});
      learn::ObservationBatch batch;
      for (int i = 0; i < action.num_workers; ++i)
        for (int j = 0; j < action.num_tasks; ++j)
          if (action.at(i, j))
            batch.push_back({ctx.pop_index.at(avail[i].id), j, alive[j].type,
                             bid_set.count({avail[i].id, alive[j].id}) > 0});
      cars = learn::update(cars, batch);
      rec.mae = mae(cars, ctx.prefs);
    }
    reward_sum += reward;

    rec.objective = assignment.total_cost;
    rec.tasks_completed = static_cast<int>(assignment.pairs.size());
    rec.payments_total = payments.total();
    rec.delivered_v2g_kwh = assignment.delivered_v2g_kwh;
    rec.budget_met = budget_met;
    rec.reward = reward;
    if (s.static_mode && is_cars(s.variant))
      rec.regret = static_cast<double>(cars.t - 1) * report.r_star - reward_sum;

    // 6) Advance worker state.
    if (!s.static_mode) {
      apply_round(dyn, avail, alive, assignment, round, s);
      for (const auto& pair : assignment.pairs) served_ids.insert(pair.task_id);
      // Opportunistic top-up for idle low-battery workers.
      for (int i = 0; i < n; ++i) {
        WorkerDynamics& d = dyn[i];
        if (d.charge_pending) continue;
        if (round + 1 < d.busy_until || round + 1 < d.charge_until) continue;
        if (d.energy_kwh < s.idle_charge_frac * d.capacity_kwh) {
          d.charge_until = std::max(d.busy_until, round + 1) + s.charge_rounds;
          d.charge_pending = true;
        }
      }
    }
    report.rounds.push_back(rec);
  }

  // Cumulative curves.
  double co = 0.0, ct = 0.0, cp = 0.0, cr = 0.0;
  for (const auto& r : report.rounds) {
    co += r.objective;
    ct += r.tasks_completed;
    cp += r.payments_total;
    cr += r.reward;
    report.cumulative_objective.push_back(co);
    report.cumulative_tasks.push_back(ct);
    report.cumulative_payments.push_back(cp);
    report.cumulative_reward.push_back(cr);
    report.avg_price_per_task.push_back(ct > 0 ? cp / ct : 0.0);
  }
  return report;
}

}  // namespace gridride::sim
