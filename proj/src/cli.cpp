#include "gridride/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "gridride/batch.hpp"
#include "gridride/io.hpp"

namespace gridride::cli {

namespace fs = std::filesystem;

namespace {

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::istringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto dots = item.find("..");
    if (dots != std::string::npos) {
      std::uint64_t lo = std::stoull(item.substr(0, dots));
      std::uint64_t hi = std::stoull(item.substr(dots + 2));
      if (hi < lo) throw UsageError("--seeds: bad range '" + item + "'");
      for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    } else {
      seeds.push_back(std::stoull(item));
    }
  }
  if (seeds.empty()) throw UsageError("--seeds: empty list");
  return seeds;
}

std::vector<sim::Variant> parse_variant_list(const std::string& text) {
  if (text == "all") return sim::all_variants();
  std::vector<sim::Variant> variants;
  std::istringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto v = sim::variant_from_name(item);
    if (!v) throw UsageError("--variants: unknown variant '" + item + "'");
    variants.push_back(*v);
  }
  if (variants.empty()) throw UsageError("--variants: empty list");
  return variants;
}

std::vector<int> parse_int_list(const std::string& text, const char* flag) {
  std::vector<int> out;
  std::istringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  if (out.empty()) throw UsageError(std::string(flag) + ": empty list");
  return out;
}

std::string cell_path(const std::string& out_dir, sim::Variant v,
                      std::uint64_t seed) {
  return out_dir + "/cells/" + sim::variant_name(v) + "/seed_" +
         std::to_string(seed) + ".csv";
}

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sd_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  double m = mean_of(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

struct Grid {
  std::vector<sim::Variant> variants;
  std::vector<std::uint64_t> seeds;
  // reports[v][s]
  std::vector<std::vector<sim::RunReport>> reports;
};

Grid run_grid(const CliConfig& cfg, const sim::Scenario& scenario,
              const std::vector<sim::Variant>& variants) {
  Grid grid;
  grid.variants = variants;
  grid.seeds = cfg.seeds;
  std::vector<batch::Cell> cells;
  for (auto v : variants)
    for (auto s : cfg.seeds) cells.push_back({v, s});
  auto flat = batch::run_cells(scenario, cells, cfg.threads);
  grid.reports.resize(variants.size());
  std::size_t k = 0;
  for (std::size_t v = 0; v < variants.size(); ++v) {
    grid.reports[v].reserve(cfg.seeds.size());
    for (std::size_t s = 0; s < cfg.seeds.size(); ++s)
      grid.reports[v].push_back(std::move(flat[k++]));
  }
  return grid;
}

void write_cells(const Grid& grid, const std::string& out_dir) {
  for (std::size_t v = 0; v < grid.variants.size(); ++v)
    for (std::size_t s = 0; s < grid.seeds.size(); ++s)
      io::write_report_csv(grid.reports[v][s],
                           cell_path(out_dir, grid.variants[v], grid.seeds[s]));
}

// Writes a per-round aggregate CSV: round, then mean and sd per variant.
// Variants for which the metric is undefined are skipped entirely.
void write_metric_csv(
    const Grid& grid, const std::string& path,
    const std::function<std::optional<double>(const sim::RunReport&, int)>&
        metric) {
  std::vector<std::size_t> cols;
  int rounds = 0;
  for (std::size_t v = 0; v < grid.variants.size(); ++v) {
    bool any = false;
    for (const auto& rep : grid.reports[v]) {
      rounds = std::max(rounds, static_cast<int>(rep.rounds.size()));
      for (int r = 0; r < static_cast<int>(rep.rounds.size()); ++r)
        if (metric(rep, r)) any = true;
    }
    if (any) cols.push_back(v);
  }
  if (cols.empty()) return;
  std::ostringstream out;
  out << "round";
  for (auto v : cols)
    out << ',' << sim::variant_name(grid.variants[v]) << "_mean,"
        << sim::variant_name(grid.variants[v]) << "_sd";
  out << "\n";
  for (int r = 0; r < rounds; ++r) {
    out << (r + 1);
    for (auto v : cols) {
      std::vector<double> xs;
      for (const auto& rep : grid.reports[v]) {
        if (r >= static_cast<int>(rep.rounds.size())) continue;
        if (auto x = metric(rep, r)) xs.push_back(*x);
      }
      if (xs.empty()) {
        out << ",,";
      } else {
        out << ',' << io::fmt_double(mean_of(xs)) << ','
            << io::fmt_double(sd_of(xs));
      }
    }
    out << "\n";
  }
  io::write_file_atomic(path, out.str());
}

void write_summary(const Grid& grid, const std::string& out_dir) {
  std::ostringstream out;
  char buf[256];
  out << "variant  cum_objective(mean+-sd)  cum_tasks(mean+-sd)  "
         "payments(mean+-sd)  budget_met_rate  final_mae(mean)\n";
  for (std::size_t v = 0; v < grid.variants.size(); ++v) {
    std::vector<double> obj, tasks, pay, met, fmae;
    for (const auto& rep : grid.reports[v]) {
      if (rep.rounds.empty()) continue;
      obj.push_back(rep.cumulative_objective.back());
      tasks.push_back(rep.cumulative_tasks.back());
      pay.push_back(rep.cumulative_payments.back());
      int ok = 0;
      for (const auto& r : rep.rounds) ok += r.budget_met ? 1 : 0;
      met.push_back(static_cast<double>(ok) /
                    static_cast<double>(rep.rounds.size()));
      if (rep.rounds.back().mae) fmae.push_back(*rep.rounds.back().mae);
    }
    std::snprintf(buf, sizeof(buf),
                  "%-8s %12.4f +- %-10.4f %9.2f +- %-8.2f %12.4f +- %-10.4f "
                  "%.3f",
                  sim::variant_name(grid.variants[v]), mean_of(obj), sd_of(obj),
                  mean_of(tasks), sd_of(tasks), mean_of(pay), sd_of(pay),
                  mean_of(met));
    out << buf;
    if (!fmae.empty()) {
      std::snprintf(buf, sizeof(buf), "            %.4f", mean_of(fmae));
      out << buf;
    }
    out << "\n";
  }
  io::write_file_atomic(out_dir + "/summary.txt", out.str());
  std::cout << out.str();
}

void write_aggregates(const Grid& grid, const std::string& out_dir) {
  using sim::RunReport;
  write_metric_csv(grid, out_dir + "/cumulative_objective.csv",
                   [](const RunReport& r, int i) -> std::optional<double> {
                     return r.cumulative_objective[i];
                   });
  write_metric_csv(grid, out_dir + "/cumulative_tasks.csv",
                   [](const RunReport& r, int i) -> std::optional<double> {
                     return r.cumulative_tasks[i];
                   });
  write_metric_csv(grid, out_dir + "/avg_price_per_task.csv",
                   [](const RunReport& r, int i) -> std::optional<double> {
                     return r.avg_price_per_task[i];
                   });
  write_metric_csv(grid, out_dir + "/reward.csv",
                   [](const RunReport& r, int i) -> std::optional<double> {
                     return r.cumulative_reward[i];
                   });
  write_metric_csv(grid, out_dir + "/mae.csv",
                   [](const RunReport& r, int i) -> std::optional<double> {
                     if (!r.rounds[i].mae) return std::nullopt;
                     return *r.rounds[i].mae;
                   });
  write_metric_csv(grid, out_dir + "/regret.csv",
                   [](const RunReport& r, int i) -> std::optional<double> {
                     if (!r.rounds[i].regret) return std::nullopt;
                     return *r.rounds[i].regret;
                   });
}

}  // namespace

std::pair<CliConfig, sim::Scenario> parse_config(
    const std::vector<std::string>& args) {
  CliConfig cfg;
  if (args.empty())
    throw UsageError("expected a command: run | compare | sweep | validate");
  cfg.command = args[0];
  if (cfg.command != "run" && cfg.command != "compare" &&
      cfg.command != "sweep" && cfg.command != "validate")
    throw UsageError("unknown command '" + cfg.command + "'");

  std::map<std::string, std::string> flags;
  for (std::size_t i = 1; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--", 0) != 0) throw UsageError("unexpected argument '" + a + "'");
    if (i + 1 >= args.size()) throw UsageError(a + ": missing value");
    flags[a.substr(2)] = args[++i];
  }

  auto take = [&](const char* name) -> std::optional<std::string> {
    auto it = flags.find(name);
    if (it == flags.end()) return std::nullopt;
    std::string v = it->second;
    flags.erase(it);
    return v;
  };

  if (auto v = take("scenario")) cfg.scenario_path = *v;
  if (auto v = take("out")) cfg.out_dir = *v;
  if (auto v = take("seeds")) cfg.seeds = parse_seed_list(*v);
  if (auto v = take("variants")) cfg.variants = parse_variant_list(*v);
  if (auto v = take("k-values")) cfg.k_values = parse_int_list(*v, "--k-values");
  if (auto v = take("threads")) cfg.threads = std::stoi(*v);
  if (auto v = take("K")) cfg.k = std::stoi(*v);
  if (auto v = take("lambda")) cfg.lambda_km = std::stod(*v);
  if (auto v = take("rounds")) cfg.rounds = std::stoi(*v);
  if (auto v = take("rate-rideshare")) cfg.rate_rideshare = std::stod(*v);
  if (auto v = take("rate-swap")) cfg.rate_swap = std::stod(*v);
  if (auto v = take("rate-v2g")) cfg.rate_v2g = std::stod(*v);
  if (!flags.empty())
    throw UsageError("unknown flag '--" + flags.begin()->first + "'");

  sim::Scenario scenario;
  if (!cfg.scenario_path.empty())
    scenario = io::read_scenario_file(cfg.scenario_path);
  if (cfg.k) scenario.k = *cfg.k;
  if (cfg.lambda_km) scenario.lambda_km = *cfg.lambda_km;
  if (cfg.rounds) scenario.rounds = *cfg.rounds;
  if (cfg.rate_rideshare) scenario.rate_rideshare = *cfg.rate_rideshare;
  if (cfg.rate_swap) scenario.rate_swap = *cfg.rate_swap;
  if (cfg.rate_v2g) scenario.rate_v2g = *cfg.rate_v2g;
  if (cfg.command != "validate") sim::validate_scenario(scenario);
  return {cfg, scenario};
}

int cmd_run(const CliConfig& cfg, const sim::Scenario& scenario) {
  std::vector<sim::Variant> variants =
      cfg.variants.empty() ? std::vector<sim::Variant>{scenario.variant}
                           : cfg.variants;
  Grid grid = run_grid(cfg, scenario, variants);
  write_cells(grid, cfg.out_dir);
  for (std::size_t v = 0; v < variants.size(); ++v)
    for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
      const auto& rep = grid.reports[v][s];
      std::cout << sim::variant_name(variants[v]) << " seed "
                << cfg.seeds[s] << ": objective "
                << (rep.rounds.empty() ? 0.0
                                       : rep.cumulative_objective.back())
                << ", tasks "
                << (rep.rounds.empty() ? 0.0 : rep.cumulative_tasks.back())
                << " -> " << cell_path(cfg.out_dir, variants[v], cfg.seeds[s])
                << "\n";
    }
  return 0;
}

int cmd_compare(const CliConfig& cfg, const sim::Scenario& scenario) {
  std::vector<sim::Variant> variants =
      cfg.variants.empty() ? sim::all_variants() : cfg.variants;
  Grid grid = run_grid(cfg, scenario, variants);
  write_cells(grid, cfg.out_dir);
  write_aggregates(grid, cfg.out_dir);
  write_summary(grid, cfg.out_dir);
  return 0;
}

int cmd_sweep(const CliConfig& cfg, const sim::Scenario& scenario) {
  std::vector<sim::Variant> variants =
      cfg.variants.empty() ? sim::all_variants() : cfg.variants;
  std::ostringstream out;
  out << "K,variant,obj_per_task_mean,obj_per_task_sd,cum_objective_mean,"
         "cum_tasks_mean\n";
  for (int k : cfg.k_values) {
    if (k < 1) throw UsageError("--k-values: K must be >= 1");
    sim::Scenario sk = scenario;
    sk.k = k;
    Grid grid = run_grid(cfg, sk, variants);
    write_cells(grid, cfg.out_dir + "/k" + std::to_string(k));
    for (std::size_t v = 0; v < variants.size(); ++v) {
      std::vector<double> opt, obj, tasks;
      for (const auto& rep : grid.reports[v]) {
        if (rep.rounds.empty()) continue;
        double o = rep.cumulative_objective.back();
        double t = rep.cumulative_tasks.back();
        obj.push_back(o);
        tasks.push_back(t);
        if (t > 0) opt.push_back(o / t);
      }
      out << k << ',' << sim::variant_name(variants[v]) << ','
          << io::fmt_double(mean_of(opt)) << ',' << io::fmt_double(sd_of(opt))
          << ',' << io::fmt_double(mean_of(obj)) << ','
          << io::fmt_double(mean_of(tasks)) << "\n";
    }
  }
  io::write_file_atomic(cfg.out_dir + "/sweep_k.csv", out.str());
  std::cout << out.str();
  return 0;
}

int cmd_validate(const CliConfig& cfg) {
  std::vector<std::string> files;
  if (!fs::exists(cfg.out_dir))
    throw UsageError("validate: no such directory: " + cfg.out_dir);
  for (const auto& entry : fs::recursive_directory_iterator(cfg.out_dir)) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().extension() != ".csv") continue;
    std::ifstream probe(entry.path());
    std::string first;
    std::getline(probe, first);
    if (first == io::kReportHeader) files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    std::cerr << "validate: no report CSVs under " << cfg.out_dir << "\n";
    return 1;
  }
  int bad = 0;
  for (const auto& f : files) {
    auto rows = io::read_report_csv(f);
    double co = 0.0, ct = 0.0, cp = 0.0, cr = 0.0;
    bool ok = true;
    for (const auto& r : rows) {
      co += r.objective;
      ct += r.tasks_completed;
      cp += r.payments_total;
      cr += r.reward;
      double price = ct > 0 ? cp / ct : 0.0;
      if (co != r.cum_objective || ct != r.cum_tasks || cp != r.cum_payments ||
          cr != r.cum_reward || price != r.avg_price_per_task) {
        std::cerr << f << " round " << r.round
                  << ": cumulative columns do not re-derive from round "
                     "columns\n";
        ok = false;
        break;
      }
    }
    if (!ok) ++bad;
  }
  std::cout << "validate: " << files.size() - bad << "/" << files.size()
            << " report files consistent\n";
  return bad == 0 ? 0 : 1;
}

int dispatch(const std::vector<std::string>& args) {
  try {
    auto [cfg, scenario] = parse_config(args);
    if (cfg.command == "run") return cmd_run(cfg, scenario);
    if (cfg.command == "compare") return cmd_compare(cfg, scenario);
    if (cfg.command == "sweep") return cmd_sweep(cfg, scenario);
    return cmd_validate(cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace gridride::cli
