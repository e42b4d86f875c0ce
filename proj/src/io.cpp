#include "gridride/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "gridride/geometry.hpp"

namespace gridride::io {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& s, const std::string& context) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(context + ": not a number: '" + s + "'");
  }
}

long parse_int(const std::string& s, const std::string& context) {
  try {
    std::size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(context + ": not an integer: '" + s + "'");
  }
}

std::vector<std::vector<std::string>> read_csv_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    rows.push_back(split_csv(line));
  }
  if (rows.empty()) throw ParseError(path + ": empty file (header expected)");
  return rows;
}

}  // namespace

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, target);
}

std::vector<Worker> ingest_workers(const std::string& path) {
  auto rows = read_csv_rows(path);
  const auto& header = rows[0];
  bool geographic = false;
  if (header.size() == 6 && trim(header[0]) == "id" &&
      trim(header[1]) == "x_km" && trim(header[2]) == "y_km") {
    geographic = false;
  } else if (header.size() == 6 && trim(header[0]) == "id" &&
             trim(header[1]) == "lat" && trim(header[2]) == "lon") {
    geographic = true;
  } else {
    throw ParseError(path +
                     ": expected header id,x_km,y_km,energy_per_km,range_km,"
                     "min_range_km (or id,lat,lon,...)");
  }

  std::vector<Worker> workers;
  std::set<int> ids;
  std::vector<std::pair<double, double>> raw_coords;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    std::string ctx = path + " row " + std::to_string(r + 1);
    const auto& f = rows[r];
    if (f.size() != 6) throw ParseError(ctx + ": expected 6 fields");
    Worker w;
    w.id = static_cast<int>(parse_int(trim(f[0]), ctx));
    if (!ids.insert(w.id).second)
      throw ParseError(ctx + ": duplicate worker id " + std::to_string(w.id));
    raw_coords.push_back(
        {parse_double(trim(f[1]), ctx), parse_double(trim(f[2]), ctx)});
    w.energy_per_km = parse_double(trim(f[3]), ctx);
    w.range_km = parse_double(trim(f[4]), ctx);
    w.min_range_km = parse_double(trim(f[5]), ctx);
    try {
      validate_worker(w);
    } catch (const std::exception& e) {
      throw ParseError(ctx + ": " + e.what());
    }
    workers.push_back(w);
  }

  if (geographic && !workers.empty()) {
    double lat0 = 0.0, lon0 = 0.0;
    for (const auto& [lat, lon] : raw_coords) {
      lat0 += lat;
      lon0 += lon;
    }
    lat0 /= raw_coords.size();
    lon0 /= raw_coords.size();
    for (std::size_t i = 0; i < workers.size(); ++i)
      workers[i].location = project_equirect(raw_coords[i].first,
                                             raw_coords[i].second, lat0, lon0);
  } else {
    for (std::size_t i = 0; i < workers.size(); ++i)
      workers[i].location = {raw_coords[i].first, raw_coords[i].second};
  }
  return workers;
}

std::vector<Task> ingest_tasks(const std::string& path) {
  auto rows = read_csv_rows(path);
  const auto& header = rows[0];
  if (header.size() != 8 || trim(header[0]) != "id" ||
      trim(header[1]) != "type")
    throw ParseError(path +
                     ": expected header id,type,origin_x,origin_y,dest_x,"
                     "dest_y,deliverable_kwh,slot");

  std::vector<Task> tasks;
  std::set<int> ids;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    std::string ctx = path + " row " + std::to_string(r + 1);
    const auto& f = rows[r];
    if (f.size() != 8) throw ParseError(ctx + ": expected 8 fields");
    Task t;
    t.id = static_cast<int>(parse_int(trim(f[0]), ctx));
    if (!ids.insert(t.id).second)
      throw ParseError(ctx + ": duplicate task id " + std::to_string(t.id));
    long type = parse_int(trim(f[1]), ctx);
    if (type < 0 || type > 2)
      throw ParseError(ctx + ": task type must be 0, 1 or 2");
    t.type = static_cast<TaskType>(type);
    t.origin = {parse_double(trim(f[2]), ctx), parse_double(trim(f[3]), ctx)};
    t.destination = {parse_double(trim(f[4]), ctx),
                     parse_double(trim(f[5]), ctx)};
    t.deliverable_kwh = parse_double(trim(f[6]), ctx);
    t.slot_created = static_cast<int>(parse_int(trim(f[7]), ctx));
    try {
      validate_task(t);
    } catch (const std::exception& e) {
      throw ParseError(ctx + ": " + e.what());
    }
    tasks.push_back(t);
  }
  return tasks;
}

const char* const kReportHeader =
    "round,objective,tasks_completed,payments_total,delivered_kwh,budget_met,"
    "reward,mae,regret,cum_objective,cum_tasks,cum_payments,cum_reward,"
    "avg_price_per_task";

void write_report_csv(const sim::RunReport& report, const std::string& path) {
  std::ostringstream out;
  out << kReportHeader << "\n";
  for (std::size_t i = 0; i < report.rounds.size(); ++i) {
    const auto& r = report.rounds[i];
    out << r.round << ',' << fmt_double(r.objective) << ','
        << r.tasks_completed << ',' << fmt_double(r.payments_total) << ','
        << fmt_double(r.delivered_v2g_kwh) << ',' << (r.budget_met ? 1 : 0)
        << ',' << fmt_double(r.reward) << ','
        << (r.mae ? fmt_double(*r.mae) : "") << ','
        << (r.regret ? fmt_double(*r.regret) : "") << ','
        << fmt_double(report.cumulative_objective[i]) << ','
        << fmt_double(report.cumulative_tasks[i]) << ','
        << fmt_double(report.cumulative_payments[i]) << ','
        << fmt_double(report.cumulative_reward[i]) << ','
        << fmt_double(report.avg_price_per_task[i]) << "\n";
  }
  write_file_atomic(path, out.str());
}

std::vector<ReportRow> read_report_csv(const std::string& path) {
  auto rows = read_csv_rows(path);
  if (rows[0] != split_csv(kReportHeader))
    throw ParseError(path + ": unexpected report header");
  std::vector<ReportRow> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    std::string ctx = path + " row " + std::to_string(r + 1);
    const auto& f = rows[r];
    if (f.size() != 14) throw ParseError(ctx + ": expected 14 fields");
    ReportRow row;
    row.round = static_cast<int>(parse_int(f[0], ctx));
    row.objective = parse_double(f[1], ctx);
    row.tasks_completed = parse_double(f[2], ctx);
    row.payments_total = parse_double(f[3], ctx);
    row.delivered_kwh = parse_double(f[4], ctx);
    row.budget_met = static_cast<int>(parse_int(f[5], ctx));
    row.reward = parse_double(f[6], ctx);
    row.mae = f[7];
    row.regret = f[8];
    row.cum_objective = parse_double(f[9], ctx);
    row.cum_tasks = parse_double(f[10], ctx);
    row.cum_payments = parse_double(f[11], ctx);
    row.cum_reward = parse_double(f[12], ctx);
    row.avg_price_per_task = parse_double(f[13], ctx);
    out.push_back(row);
  }
  return out;
}

void apply_scenario_key(sim::Scenario& s, const std::string& key,
                        const std::string& value, const std::string& context) {
  auto as_double = [&] { return parse_double(value, context); };
  auto as_int = [&] { return static_cast<int>(parse_int(value, context)); };
  if (key == "workers") s.num_workers = as_int();
  else if (key == "rounds") s.rounds = as_int();
  else if (key == "K") s.k = as_int();
  else if (key == "lambda_km") s.lambda_km = as_double();
  else if (key == "rate_rideshare") s.rate_rideshare = as_double();
  else if (key == "rate_swap") s.rate_swap = as_double();
  else if (key == "rate_v2g") s.rate_v2g = as_double();
  else if (key == "budget_rule") {
    if (value == "fixed") s.budget_rule = sim::BudgetRule::FixedKwh;
    else if (value == "sum_v2g") s.budget_rule = sim::BudgetRule::SumOfV2g;
    else throw ParseError(context + ": budget_rule must be fixed or sum_v2g");
  } else if (key == "budget_kwh") s.budget_kwh = as_double();
  else if (key == "preference_set") {
    std::vector<double> set;
    std::istringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ';'))
      set.push_back(parse_double(trim(item), context));
    s.preference_set = set;
  } else if (key == "seed") s.seed = static_cast<std::uint64_t>(parse_int(value, context));
  else if (key == "variant") {
    auto v = sim::variant_from_name(value);
    if (!v) throw ParseError(context + ": unknown variant '" + value + "'");
    s.variant = *v;
  } else if (key == "static_mode") s.static_mode = as_int() != 0;
  else if (key == "update_mode") {
    if (value == "bernoulli") s.update_mode = learn::UpdateMode::Bernoulli;
    else if (value == "positive-only") s.update_mode = learn::UpdateMode::PositiveOnly;
    else throw ParseError(context + ": update_mode must be bernoulli or positive-only");
  } else if (key == "region_km") s.region_km = as_double();
  else if (key == "speed_kmh") s.speed_kmh = as_double();
  else if (key == "charge_rounds") s.charge_rounds = as_int();
  else if (key == "idle_charge_frac") s.idle_charge_frac = as_double();
  else if (key == "carry_rounds") s.carry_rounds = as_int();
  else if (key == "v2g_energy_min") s.v2g_energy_min = as_double();
  else if (key == "v2g_energy_max") s.v2g_energy_max = as_double();
  else if (key == "worker_eff_min") s.worker_eff_min = as_double();
  else if (key == "worker_eff_max") s.worker_eff_max = as_double();
  else if (key == "worker_capacity_min") s.worker_capacity_min = as_double();
  else if (key == "worker_capacity_max") s.worker_capacity_max = as_double();
  else if (key == "worker_min_range_min") s.worker_min_range_min = as_double();
  else if (key == "worker_min_range_max") s.worker_min_range_max = as_double();
  else if (key == "bid_beta0") s.bid_model.beta0 = as_double();
  else if (key == "bid_beta1") s.bid_model.beta1 = as_double();
  else if (key == "bid_markup_min") s.bid_model.markup_min = as_double();
  else if (key == "bid_markup_max") s.bid_model.markup_max = as_double();
  else if (key == "bid_noise_sd") s.bid_model.noise_sd = as_double();
  else if (key == "bid_min") s.bid_model.min_amount = as_double();
  else if (key == "workers_csv") s.workers_csv = value;
  else if (key == "tasks_csv") s.tasks_csv = value;
  else throw ParseError(context + ": unknown scenario key '" + key + "'");
}

sim::Scenario read_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file: " + path);
  sim::Scenario s;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string content = line.substr(0, line.find('#'));
    content = trim(content);
    if (content.empty()) continue;
    auto eq = content.find('=');
    if (eq == std::string::npos)
      throw ParseError(path + " line " + std::to_string(line_no) +
                       ": expected key=value");
    std::string key = trim(content.substr(0, eq));
    std::string value = trim(content.substr(eq + 1));
    apply_scenario_key(s, key, value,
                       path + " line " + std::to_string(line_no));
  }
  return s;
}

}  // namespace gridride::io
