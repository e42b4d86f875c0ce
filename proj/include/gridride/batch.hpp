#pragma once

#include <cstdint>
#include <vector>

#include "gridride/sim.hpp"

namespace gridride::batch {

struct Cell {
  sim::Variant variant;
  std::uint64_t seed;
};

// Runs every (variant, seed) cell of a scenario. Cells are independent pure
// functions of their inputs, so the parallel path must produce exactly the
// serial result; tests hold it to that.
std::vector<sim::RunReport> run_cells_serial(const sim::Scenario& base,
                                             const std::vector<Cell>& cells);
std::vector<sim::RunReport> run_cells_parallel(const sim::Scenario& base,
                                               const std::vector<Cell>& cells,
                                               int threads);

// Serial when threads == 1, OpenMP otherwise (threads <= 0 picks the
// runtime default).
std::vector<sim::RunReport> run_cells(const sim::Scenario& base,
                                      const std::vector<Cell>& cells,
                                      int threads);

}  // namespace gridride::batch
