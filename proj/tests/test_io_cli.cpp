#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gridride/cli.hpp"
#include "gridride/io.hpp"
#include "gridride/rng.hpp"
#include "gridride/sim.hpp"

using namespace gridride;
namespace fs = std::filesystem;

namespace {

std::string temp_dir(const std::string& name) {
  auto path = fs::temp_directory_path() / name;
  fs::remove_all(path);
  fs::create_directories(path);
  return path.string();
}

std::string write_temp(const std::string& name, const std::string& content) {
  auto path = fs::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("defaults mirror the reference configuration") {
  auto [cfg, scenario] = cli::parse_config({"run"});
  CHECK(scenario.k == 5);
  CHECK(scenario.lambda_km == 10.0);
  CHECK(scenario.rounds == 96);
  CHECK(cfg.command == "run");
}

TEST_CASE("flag overrides beat scenario file values") {
  std::string file = write_temp("scenario_a.cfg",
                                "# demo scenario\n"
                                "K = 3\n"
                                "rounds = 10\n"
                                "lambda_km = 7.5\n"
                                "workers = 4\n");
  auto [cfg, scenario] =
      cli::parse_config({"run", "--scenario", file, "--K", "10"});
  CHECK(scenario.k == 10);       // flag wins
  CHECK(scenario.rounds == 10);  // file wins over default
  CHECK(scenario.lambda_km == 7.5);
  CHECK(scenario.num_workers == 4);
}

TEST_CASE("invalid configurations are rejected with the offending name") {
  CHECK_THROWS_AS(cli::parse_config({"run", "--rounds", "0"}),
                  std::invalid_argument);
  CHECK_THROWS_WITH_AS(cli::parse_config({"run", "--frobnicate", "1"}),
                       doctest::Contains("frobnicate"), cli::UsageError);
  CHECK_THROWS_AS(cli::parse_config({"paint"}), cli::UsageError);
  std::string bad = write_temp("scenario_bad.cfg", "warp_speed = 9\n");
  CHECK_THROWS_WITH_AS(cli::parse_config({"run", "--scenario", bad}),
                       doctest::Contains("warp_speed"), io::ParseError);
}

TEST_CASE("scenario files parse variants, budget rules and modes") {
  std::string file = write_temp("scenario_b.cfg",
                                "variant = cars-bmw\n"
                                "budget_rule = fixed\n"
                                "budget_kwh = 12.5\n"
                                "static_mode = 1\n"
                                "update_mode = positive-only\n"
                                "preference_set = 0.1;0.5;1.0\n");
  auto scenario = io::read_scenario_file(file);
  CHECK(scenario.variant == sim::Variant::CarsBmw);
  CHECK(scenario.budget_rule == sim::BudgetRule::FixedKwh);
  CHECK(scenario.budget_kwh == 12.5);
  CHECK(scenario.static_mode);
  CHECK(scenario.update_mode == learn::UpdateMode::PositiveOnly);
  CHECK(scenario.preference_set == std::vector<double>{0.1, 0.5, 1.0});
}

TEST_CASE("full-precision doubles survive the CSV round trip") {
  rng::Sequence seq(5);
  for (int i = 0; i < 1000; ++i) {
    double x = (seq.next_u01() - 0.5) * 1e6;
    double back = std::stod(io::fmt_double(x));
    CHECK(back == x);
  }
}

TEST_CASE("report CSV round trip preserves every cell") {
  sim::Scenario s;
  s.num_workers = 5;
  s.rounds = 6;
  s.rate_rideshare = 3;
  s.rate_v2g = 2;
  s.rate_swap = 0.5;
  s.seed = 3;
  s.variant = sim::Variant::CarsOpt;
  s.bid_model.noise_sd = 0.3;
  auto rep = sim::run(s);
  std::string path = temp_dir("gridride_report") + "/report.csv";
  io::write_report_csv(rep, path);
  auto rows = io::read_report_csv(path);
  REQUIRE(rows.size() == rep.rounds.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].round == rep.rounds[i].round);
    CHECK(rows[i].objective == rep.rounds[i].objective);
    CHECK(rows[i].cum_objective == rep.cumulative_objective[i]);
    CHECK(rows[i].cum_tasks == rep.cumulative_tasks[i]);
    if (rep.rounds[i].mae)
      CHECK(std::stod(rows[i].mae) == *rep.rounds[i].mae);
    else
      CHECK(rows[i].mae.empty());
  }
}

TEST_CASE("run, compare, sweep and validate work end to end") {
  std::string out = temp_dir("gridride_cli_e2e");
  std::string file = write_temp("scenario_e2e.cfg",
                                "workers = 5\n"
                                "rounds = 5\n"
                                "rate_rideshare = 3\n"
                                "rate_swap = 1\n"
                                "rate_v2g = 1\n"
                                "bid_noise_sd = 0.3\n");
  int rc = cli::dispatch({"compare", "--scenario", file, "--out", out,
                          "--seeds", "1,2", "--threads", "1"});
  CHECK(rc == 0);
  CHECK(fs::exists(out + "/cells/pk-opt/seed_1.csv"));
  CHECK(fs::exists(out + "/cells/bg/seed_2.csv"));
  CHECK(fs::exists(out + "/cumulative_objective.csv"));
  CHECK(fs::exists(out + "/cumulative_tasks.csv"));
  CHECK(fs::exists(out + "/avg_price_per_task.csv"));
  CHECK(fs::exists(out + "/mae.csv"));
  CHECK(fs::exists(out + "/reward.csv"));
  CHECK(fs::exists(out + "/summary.txt"));

  CHECK(cli::dispatch({"validate", "--out", out}) == 0);

  // Corrupt one cumulative cell and expect validate to fail.
  std::string victim = out + "/cells/pk-opt/seed_1.csv";
  std::string content = slurp(victim);
  auto pos = content.rfind("\n", content.size() - 2);
  auto row = content.substr(pos + 1);
  // Swap the cum_objective column (9) with a bogus value.
  std::vector<std::string> fields;
  std::string cur;
  for (char c : row)
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\n') {
      cur.push_back(c);
    }
  fields.push_back(cur);
  fields[9] = "123456.789";
  std::string rebuilt = content.substr(0, pos + 1);
  for (std::size_t i = 0; i < fields.size(); ++i)
    rebuilt += (i ? "," : "") + fields[i];
  rebuilt += "\n";
  std::ofstream(victim, std::ios::binary) << rebuilt;
  CHECK(cli::dispatch({"validate", "--out", out}) == 1);

  std::string sweep_out = temp_dir("gridride_cli_sweep");
  rc = cli::dispatch({"sweep", "--scenario", file, "--out", sweep_out,
                      "--seeds", "1", "--k-values", "1,3", "--variants",
                      "pk-opt", "--threads", "1"});
  CHECK(rc == 0);
  CHECK(fs::exists(sweep_out + "/sweep_k.csv"));
  auto sweep_csv = slurp(sweep_out + "/sweep_k.csv");
  CHECK(sweep_csv.find("1,pk-opt") != std::string::npos);
  CHECK(sweep_csv.find("3,pk-opt") != std::string::npos);

  std::string run_out = temp_dir("gridride_cli_run");
  rc = cli::dispatch({"run", "--scenario", file, "--out", run_out, "--seeds",
                      "7", "--variants", "cars-bmw", "--threads", "1"});
  CHECK(rc == 0);
  CHECK(fs::exists(run_out + "/cells/cars-bmw/seed_7.csv"));
}

TEST_CASE("seed ranges expand") {
  auto [cfg, scenario] = cli::parse_config({"run", "--seeds", "3..6,10"});
  CHECK(cfg.seeds == std::vector<std::uint64_t>{3, 4, 5, 6, 10});
  (void)scenario;
}
