#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gridride/geometry.hpp"

namespace gridride {

// Task categories. Numeric codes are part of the task CSV schema.
enum class TaskType : int { Rideshare = 0, BatterySwap = 1, V2G = 2 };

constexpr int kNumTaskTypes = 3;

inline int v2g_indicator(TaskType z) { return z == TaskType::V2G ? 1 : 0; }

inline const char* task_type_name(TaskType z) {
  switch (z) {
    case TaskType::Rideshare: return "rideshare";
    case TaskType::BatterySwap: return "battery_swap";
    case TaskType::V2G: return "v2g";
  }
  return "?";
}

struct Task {
  int id = 0;
  TaskType type = TaskType::Rideshare;
  Point origin;
  Point destination;
  double deliverable_kwh = 0.0;  // > 0 only for V2G tasks
  int slot_created = 0;

  double service_distance_km() const { return distance(origin, destination); }
};

// Throws if the record violates the model invariants (V2G is stationary and
// carries energy; other types carry none).
inline void validate_task(const Task& t) {
  if (t.type == TaskType::V2G) {
    if (!(t.origin == t.destination))
      throw std::invalid_argument("task " + std::to_string(t.id) +
                                  ": v2g origin must equal destination");
    if (t.deliverable_kwh <= 0.0)
      throw std::invalid_argument("task " + std::to_string(t.id) +
                                  ": v2g deliverable energy must be > 0");
  } else if (t.deliverable_kwh != 0.0) {
    throw std::invalid_argument("task " + std::to_string(t.id) +
                                ": deliverable energy only valid for v2g");
  }
}

enum class WorkerStatus : int { Available = 0, Busy = 1, Charging = 2 };

struct Worker {
  int id = 0;
  Point location;
  double energy_per_km = 0.0;  // kWh consumed per km driven
  double range_km = 0.0;       // remaining drivable range
  double min_range_km = 0.0;   // reserve the worker will not dip below
  WorkerStatus status = WorkerStatus::Available;
  int status_until_slot = 0;  // meaningful for Busy / Charging

  // Energy the worker may spend before touching the reserve.
  double spendable_kwh() const {
    return (range_km - min_range_km) * energy_per_km;
  }
};

inline void validate_worker(const Worker& w) {
  if (w.energy_per_km <= 0.0)
    throw std::invalid_argument("worker " + std::to_string(w.id) +
                                ": energy_per_km must be > 0");
  if (w.min_range_km < 0.0 || w.range_km < 0.0)
    throw std::invalid_argument("worker " + std::to_string(w.id) +
                                ": ranges must be >= 0");
}

struct Bid {
  int worker_id = 0;
  int task_id = 0;
  double amount = 0.0;  // strictly positive
};

struct EnergyLedgerEntry {
  int worker_id = 0;
  int task_id = 0;
  double travel_kwh = 0.0;   // burned reaching the task
  double service_kwh = 0.0;  // burned in service, or delivered to the grid
  double total_draw_kwh = 0.0;
};

struct EnergyBudget {
  double required_kwh = 0.0;  // per-round V2G delivery floor
};

// Battery draw of worker w performing task s: travel to the origin plus
// either driving the service leg or discharging the deliverable energy.
inline EnergyLedgerEntry energy_to_perform(const Worker& w, const Task& s) {
  EnergyLedgerEntry e;
  e.worker_id = w.id;
  e.task_id = s.id;
  e.travel_kwh = w.energy_per_km * distance(w.location, s.origin);
  e.service_kwh = s.type == TaskType::V2G
                      ? s.deliverable_kwh
                      : w.energy_per_km * s.service_distance_km();
  e.total_draw_kwh = e.travel_kwh + e.service_kwh;
  return e;
}

// A worker may be offered a task only if it is close enough, the total draw
// fits above the reserve, and the worker is free. Both comparisons inclusive.
inline bool eligible(const Worker& w, const Task& s, double lambda_km) {
  if (w.status != WorkerStatus::Available) return false;
  if (distance(w.location, s.origin) > lambda_km) return false;
  return energy_to_perform(w, s).total_draw_kwh <= w.spendable_kwh();
}

}  // namespace gridride
