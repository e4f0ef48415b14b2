#pragma once

#include <string>

#include "xhaul/heuristic.hpp"
#include "xhaul/milp_solver.hpp"

namespace xhaul {

enum class SolverKind { Milp, Heuristic, Oracle };

struct SolverSpec {
  SolverKind kind = SolverKind::Heuristic;
  ObjectiveMode mode = ObjectiveMode::EnergyMin;  // ignored by the heuristic
};

// Stable column name, e.g. "milp-energy", "oracle-lex", "heuristic".
std::string solver_name(const SolverSpec& s);

struct RunRecord {
  std::string solver;
  ObjectiveMode mode = ObjectiveMode::EnergyMin;
  int hour = 0;
  bool ok = false;
  std::string status;  // optimal / infeasible / budget_exceeded / unplaceable
  Solution solution;
  EvalReport eval;     // valid when ok
  double objective = 0.0;
  long long nodes = 0;
  double wall_ms = 0.0;
};

struct RunConfig {
  std::vector<SolverSpec> solvers;
  std::vector<int> hours;  // empty: all 24
  EnumerationBudget budget;
  HeuristicParams heur;
  bool dedup_hours = false;  // solve one representative per identical demand level
  int threads = 0;          // 0: XHAULOPT_THREADS or hardware default
};

// Runs every (solver, hour) combination on a bounded worker pool and returns
// the records sorted by (hour, solver order); output is independent of the
// thread schedule.
std::vector<RunRecord> run_solvers(const Scenario& s, const RunConfig& cfg);

// Writes the five result tables plus manifest.json into `out_dir`:
//   energy_by_hour.csv, latency_cdf_points.csv, vc_selection_by_hour.csv,
//   pp_utilization_by_hour.csv, edge_load_by_hour.csv
// Tables are byte-deterministic for a given scenario and configuration; the
// manifest additionally carries wall-clock timings.
void write_reports(const Scenario& s, const std::vector<RunRecord>& records,
                   const std::string& out_dir, const RunConfig& cfg);

// Per-hour energy gap of each solver against the best solver of that hour.
struct CompareRow {
  int hour;
  std::string solver;
  double energy_wh;
  double best_energy_wh;
  double gap_frac;  // (energy - best) / best, >= 0
};
std::vector<CompareRow> compare_rows(const std::vector<RunRecord>& records);
void write_compare_csv(const std::vector<CompareRow>& rows, const std::string& path);

// Stable decimal formatting shared by all tables.
std::string format_double(double v);

}  // namespace xhaul
