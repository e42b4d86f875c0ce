#pragma once

#include <string>
#include <vector>

#include "gridride/domain.hpp"
#include "gridride/sim.hpp"

namespace gridride::io {

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// workers CSV: id,x_km,y_km,energy_per_km,range_km,min_range_km
// Geographic headers (id,lat,lon,...) are accepted and projected onto km
// coordinates anchored at the dataset centroid.
std::vector<Worker> ingest_workers(const std::string& path);

// tasks CSV: id,type,origin_x,origin_y,dest_x,dest_y,deliverable_kwh,slot
std::vector<Task> ingest_tasks(const std::string& path);

// Round report CSV (column order is part of the interface; see README).
extern const char* const kReportHeader;
void write_report_csv(const sim::RunReport& report, const std::string& path);

// Parsed-back view of a report CSV used by the validate command.
struct ReportRow {
  int round = 0;
  double objective = 0.0;
  double tasks_completed = 0.0;
  double payments_total = 0.0;
  double delivered_kwh = 0.0;
  int budget_met = 0;
  double reward = 0.0;
  std::string mae;     // empty when not applicable
  std::string regret;  // empty when not applicable
  double cum_objective = 0.0;
  double cum_tasks = 0.0;
  double cum_payments = 0.0;
  double cum_reward = 0.0;
  double avg_price_per_task = 0.0;
};
std::vector<ReportRow> read_report_csv(const std::string& path);

// Flat key=value scenario file; '#' starts a comment.
sim::Scenario read_scenario_file(const std::string& path);
void apply_scenario_key(sim::Scenario& s, const std::string& key,
                        const std::string& value, const std::string& context);

// Full-precision double formatting used for every CSV cell.
std::string fmt_double(double v);

// Writes via a temp file + rename so concurrent grid cells never expose
// partially written files.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace gridride::io
