#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gridride/sim.hpp"

namespace gridride::cli {

struct CliConfig {
  std::string command;  // run | compare | sweep | validate
  std::string scenario_path;
  std::string out_dir = "out";
  std::vector<std::uint64_t> seeds = {1};
  std::vector<sim::Variant> variants;
  std::vector<int> k_values = {1, 3, 5, 10};  // sweep only
  int threads = 0;                            // 0 = runtime default
  // Overrides applied on top of the scenario file.
  std::optional<int> k;
  std::optional<double> lambda_km;
  std::optional<int> rounds;
  std::optional<double> rate_rideshare;
  std::optional<double> rate_swap;
  std::optional<double> rate_v2g;
};

class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// Flags take precedence over the scenario file, which overrides defaults.
// The returned scenario already has every override applied.
std::pair<CliConfig, sim::Scenario> parse_config(
    const std::vector<std::string>& args);

int cmd_run(const CliConfig& cfg, const sim::Scenario& scenario);
int cmd_compare(const CliConfig& cfg, const sim::Scenario& scenario);
int cmd_sweep(const CliConfig& cfg, const sim::Scenario& scenario);
int cmd_validate(const CliConfig& cfg);

// Entry point used by the binary; returns the process exit code.
int dispatch(const std::vector<std::string>& args);

}  // namespace gridride::cli
