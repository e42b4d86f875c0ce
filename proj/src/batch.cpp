#include "gridride/batch.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gridride::batch {

namespace {

sim::RunReport run_cell(const sim::Scenario& base, const Cell& cell) {
  sim::Scenario s = base;
  s.variant = cell.variant;
  s.seed = cell.seed;
  return sim::run(s);
}

}  // namespace

std::vector<sim::RunReport> run_cells_serial(const sim::Scenario& base,
                                             const std::vector<Cell>& cells) {
  std::vector<sim::RunReport> reports(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i)
    reports[i] = run_cell(base, cells[i]);
  return reports;
}

std::vector<sim::RunReport> run_cells_parallel(const sim::Scenario& base,
                                               const std::vector<Cell>& cells,
                                               int threads) {
  std::vector<sim::RunReport> reports(cells.size());
  std::exception_ptr error;
#ifdef _OPENMP
  if (threads > 0) {
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (long i = 0; i < static_cast<long>(cells.size()); ++i) {
      try {
        reports[i] = run_cell(base, cells[i]);
      } catch (...) {
#pragma omp critical
        if (!error) error = std::current_exception();
      }
    }
  } else {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < static_cast<long>(cells.size()); ++i) {
      try {
        reports[i] = run_cell(base, cells[i]);
      } catch (...) {
#pragma omp critical
        if (!error) error = std::current_exception();
      }
    }
  }
#else
  (void)threads;
  return run_cells_serial(base, cells);
#endif
  if (error) std::rethrow_exception(error);
  return reports;
}

std::vector<sim::RunReport> run_cells(const sim::Scenario& base,
                                      const std::vector<Cell>& cells,
                                      int threads) {
  if (threads == 1) return run_cells_serial(base, cells);
  return run_cells_parallel(base, cells, threads);
}

}  // namespace gridride::batch
