#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gridride/domain.hpp"

namespace gridride::recommend {

// Binary worker x task selection. Indices are positions in the caller's
// id-sorted worker/task vectors. k / psi / v2g_min are the effective bounds
// the matrix satisfies (post-relaxation when one was applied).
struct RecommendationMatrix {
  int num_workers = 0;
  int num_tasks = 0;
  std::vector<std::uint8_t> entries;  // row-major
  int k = 0;
  int psi = 0;
  int v2g_min = 0;

  RecommendationMatrix() = default;
  RecommendationMatrix(int w, int s)
      : num_workers(w), num_tasks(s),
        entries(static_cast<std::size_t>(w) * s, 0) {}

  bool at(int i, int j) const {
    return entries[static_cast<std::size_t>(i) * num_tasks + j] != 0;
  }
  void set(int i, int j, bool v) {
    entries[static_cast<std::size_t>(i) * num_tasks + j] = v ? 1 : 0;
  }
  int row_sum(int i) const;
  int col_sum(int j) const;
  int count() const;
};

// Nonnegative weights; +infinity marks a forced-exploration entry that
// outranks every finite weight. Weights of ineligible pairs are ignored.
struct WeightMatrix {
  int num_workers = 0;
  int num_tasks = 0;
  std::vector<double> w;  // row-major

  WeightMatrix() = default;
  WeightMatrix(int workers, int tasks, double init = 0.0)
      : num_workers(workers), num_tasks(tasks),
        w(static_cast<std::size_t>(workers) * tasks, init) {}

  double at(int i, int j) const {
    return w[static_cast<std::size_t>(i) * num_tasks + j];
  }
  double& at(int i, int j) {
    return w[static_cast<std::size_t>(i) * num_tasks + j];
  }
};

struct RelaxationStep {
  std::string constraint;  // "psi" or "v2g_min"
  int original = 0;
  int relaxed = 0;
};

struct PotrSolution {
  RecommendationMatrix matrix;
  double objective = 0.0;  // +inf when any sentinel entry is selected
  std::vector<RelaxationStep> relaxation_report;
};

struct PotrParams {
  int k = 5;
  double lambda_km = 10.0;
  // Derived from the instance when unset.
  std::optional<int> psi;
  std::optional<int> v2g_min;
  bool allow_relaxation = true;
};

class PotrInfeasible : public std::runtime_error {
 public:
  explicit PotrInfeasible(const std::string& what) : std::runtime_error(what) {}
};

// floor(|W| K / |S|): minimum recommenders required per task.
int derive_psi(int num_workers, int num_tasks, int k);

// floor(|V2G| K / |S|): minimum V2G entries required per worker list.
int derive_v2g_min(int num_v2g, int num_tasks, int k);

// Exact maximizer of sum(weight * x) over binary matrices with row sums
// <= k, column sums >= psi, per-row V2G count >= v2g_min, and entries only
// on eligible pairs. Among optima, returns the one whose selection vector is
// lexicographically greatest in (worker, task) order. When infeasible and
// relaxation is allowed, psi is lowered first, then v2g_min, to the largest
// feasible values; steps are recorded in the relaxation report.
PotrSolution solve_potr(const WeightMatrix& weights,
                        const std::vector<Worker>& workers,
                        const std::vector<Task>& tasks,
                        const PotrParams& params);

}  // namespace gridride::recommend
