#pragma once

#include "xhaul/feasibility.hpp"

namespace xhaul {

enum class ObjectiveMode { EnergyMin, FhLatencyMin, LexicographicBiObjective };
const char* to_string(ObjectiveMode m);

struct EnumerationBudget {
  long long max_nodes = 10'000'000;  // attempted partial extensions
};

enum class OracleStatus { Optimal, NoFeasible, BudgetExceeded };

struct OracleResult {
  OracleStatus status = OracleStatus::NoFeasible;
  Solution best;
  double energy_wh = 0.0;
  double sum_fh_us = 0.0;
  long long nodes_explored = 0;
  long long feasible_leaves = 0;  // complete feasible solutions reached
};

// Exhaustive search over the shared candidate space, slices outer and the
// canonical tuple order inner.  Branches are cut as soon as the partial
// solution fails a check or its (monotone) partial objective can no longer
// beat the incumbent, so the reached optimum is exact.  The lexicographic
// mode runs two passes: minimal energy first, then minimal summed FH latency
// among solutions within a 1e-6 relative energy band of that optimum.
OracleResult enumerate_optimum(const Instance& inst, ObjectiveMode mode,
                               const EnumerationBudget& budget = {});

}  // namespace xhaul
