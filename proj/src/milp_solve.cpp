#include <cmath>

#include "xhaul/milp_solver.hpp"

namespace xhaul {

Solution decode_solution(const Instance& inst, const MilpModel& m,
                         const std::vector<double>& values) {
  Solution sol;
  for (const DecisionGroup& g : m.groups) {
    const DecisionAtom* hit = nullptr;
    for (const DecisionAtom& a : g.atoms) {
      bool all_one = !a.ones.empty();
      for (int v : a.ones) all_one = all_one && values[v] > 0.5;
      if (all_one) {
        hit = &a;
        break;
      }
    }
    if (!hit) throw std::logic_error("no atom selected for a decision group");
    sol.assigns.push_back(make_assignment(inst, g.gnb, g.slice, hit->tuple));
  }
  sol.sort_canonical();
  return sol;
}

namespace {

bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

MilpOutcome solve_single(const Instance& inst, ObjectiveMode mode, double lex_cap,
                         const EnumerationBudget& budget, SolverBackend& backend) {
  BuildOptions opts;
  opts.mode = mode;
  opts.lex_energy_cap = lex_cap;
  MilpModel model = build_milp(inst, opts);

  MilpOutcome out;
  out.n_vars = static_cast<int>(model.vars.size());
  out.n_rows = static_cast<int>(model.rows.size());

  SolveResult r = backend.solve(model, budget);
  out.status = r.status;
  out.stats = r.stats;
  if (r.status != SolveStatus::Optimal) return out;

  out.solution = decode_solution(inst, model, r.values);
  FeasibilityReport rep = check(inst, out.solution, true);
  if (!rep.ok)
    throw std::logic_error(
        "decoded optimum fails the feasibility gate: " +
        (rep.violations.empty() ? std::string("?") : rep.violations[0].constraint));
  EvalReport ev = evaluate(inst, out.solution);
  out.objective = r.objective;
  out.energy_wh = ev.energy_wh_total;
  out.sum_fh_us = ev.sum_fh_latency_us;

  // The solved objective must agree with the shared evaluator; a mismatch
  // means the rows drifted from the reference semantics.
  double reference = mode == ObjectiveMode::FhLatencyMin ? ev.sum_fh_latency_us : ev.energy_wh_total;
  if (!close_rel(out.objective, reference, 1e-6))
    throw std::logic_error("objective value diverges from the evaluator");
  return out;
}

}  // namespace

MilpOutcome solve_milp(const Instance& inst, ObjectiveMode mode, const EnumerationBudget& budget,
                       SolverBackend* backend) {
  PropagationEnumerationBackend fallback;
  SolverBackend& be = backend ? *backend : fallback;
  constexpr double kInf = std::numeric_limits<double>::infinity();

  if (mode != ObjectiveMode::LexicographicBiObjective)
    return solve_single(inst, mode, kInf, budget, be);

  MilpOutcome stage1 = solve_single(inst, ObjectiveMode::EnergyMin, kInf, budget, be);
  if (stage1.status != SolveStatus::Optimal) return stage1;

  double cap = stage1.objective * (1.0 + 1e-6);
  MilpOutcome stage2 = solve_single(inst, ObjectiveMode::FhLatencyMin, cap, budget, be);
  stage2.stats.nodes += stage1.stats.nodes;
  stage2.stats.leaves += stage1.stats.leaves;
  stage2.stats.wall_ms += stage1.stats.wall_ms;
  return stage2;
}

}  // namespace xhaul
