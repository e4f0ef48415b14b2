#pragma once

#include "xhaul/milp.hpp"

namespace xhaul {

enum class SolveStatus { Optimal, Infeasible, BudgetExceeded };
const char* to_string(SolveStatus s);

struct SolveStats {
  long long nodes = 0;   // group assignments explored
  long long leaves = 0;  // complete feasible points seen
  double wall_ms = 0.0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  std::vector<double> values;  // per variable, valid when Optimal
  double objective = 0.0;
  SolveStats stats;
};

class SolverBackend {
 public:
  virtual ~SolverBackend() = default;
  virtual SolveResult solve(const MilpModel& m, const EnumerationBudget& budget) = 0;
};

// Exact backend over the row system itself.  A one-time discovery pass orders
// the model into staged operations: equality rows with a single unknown
// define that variable; indicator/product/big-M variables with no defining
// equality are clamped to the tightest lower bound their rows imply (exact at
// integral points); every row becomes a check at the stage where its last
// variable resolves.  Search then branches over the decision groups with
// incremental row partial sums, pruning on any <=-row whose known part
// already exceeds its slack and on the incumbent objective.  All accept and
// reject decisions come from the emitted rows, not from the model builder's
// source semantics.
class PropagationEnumerationBackend : public SolverBackend {
 public:
  SolveResult solve(const MilpModel& m, const EnumerationBudget& budget) override;
};

// Reads the chosen atoms out of a solved value vector.
Solution decode_solution(const Instance& inst, const MilpModel& m,
                         const std::vector<double>& values);

struct MilpOutcome {
  SolveStatus status = SolveStatus::Infeasible;
  Solution solution;      // decoded, checked against the shared feasibility gate
  double objective = 0.0;
  double energy_wh = 0.0;
  double sum_fh_us = 0.0;
  SolveStats stats;
  int n_vars = 0;
  int n_rows = 0;
};

// Builds and solves the model for the requested objective; the lexicographic
// mode runs an energy stage, then re-solves for latency under an energy cap
// with relative slack 1e-6.  The decoded solution must pass the shared
// feasibility check; drift between the rows and the checker throws.
MilpOutcome solve_milp(const Instance& inst, ObjectiveMode mode,
                       const EnumerationBudget& budget = {}, SolverBackend* backend = nullptr);

}  // namespace xhaul
