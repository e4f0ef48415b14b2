#include "xhaul/oracle.hpp"

#include <cmath>
#include <limits>

namespace xhaul {

const char* to_string(ObjectiveMode m) {
  switch (m) {
    case ObjectiveMode::EnergyMin: return "energy";
    case ObjectiveMode::FhLatencyMin: return "fh_latency";
    case ObjectiveMode::LexicographicBiObjective: return "lex";
  }
  return "?";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// One minimization pass.  `use_energy` picks the objective; `energy_cap`
// (infinity when unused) discards branches whose partial energy already
// exceeds it.  Both energy and summed FH latency only grow as assignments are
// added, which makes the incumbent test a sound prune.
struct Pass {
  const Instance& inst;
  bool use_energy;
  double energy_cap;
  long long budget;

  long long nodes = 0;
  long long feasible = 0;
  bool aborted = false;
  double best_obj = kInf;
  double best_energy = kInf, best_fh = kInf;
  Solution best;
  Solution cur;

  explicit Pass(const Instance& i, bool energy, double cap, long long b)
      : inst(i), use_energy(energy), energy_cap(cap), budget(b) {}

  void dfs(int level) {
    if (aborted) return;
    if (level == inst.n_flows()) {
      ++feasible;
      return;  // scoring happened when the last slice was pushed
    }
    int gnb = level / 3;
    Slice sl = static_cast<Slice>(level % 3);
    for (const CandidateTuple& t : inst.tuples(gnb, sl)) {
      if (aborted) return;
      if (++nodes > budget) {
        aborted = true;
        return;
      }
      cur.assigns.push_back(make_assignment(inst, gnb, sl, t));
      if (check(inst, cur, false).ok) {
        EvalReport ev = evaluate(inst, cur);
        bool leaf = level + 1 == inst.n_flows();
        double obj = use_energy ? ev.energy_wh_total : ev.sum_fh_latency_us;
        // Partial objective values are lower bounds; >= incumbent can only
        // tie later and first-found (lexicographic) incumbents win ties.
        if (ev.energy_wh_total <= energy_cap && obj < best_obj) {
          if (leaf) {
            best_obj = obj;
            best_energy = ev.energy_wh_total;
            best_fh = ev.sum_fh_latency_us;
            best = cur;
            ++feasible;
          } else {
            dfs(level + 1);
          }
        } else if (leaf && ev.energy_wh_total <= energy_cap) {
          ++feasible;
        }
      }
      cur.assigns.pop_back();
    }
  }
};

}  // namespace

OracleResult enumerate_optimum(const Instance& inst, ObjectiveMode mode,
                               const EnumerationBudget& budget) {
  OracleResult out;

  bool first_energy = mode != ObjectiveMode::FhLatencyMin;
  Pass p1(inst, first_energy, kInf, budget.max_nodes);
  p1.dfs(0);
  out.nodes_explored = p1.nodes;
  out.feasible_leaves = p1.feasible;
  if (p1.aborted) {
    out.status = OracleStatus::BudgetExceeded;
    return out;
  }
  if (p1.best_obj == kInf) {
    out.status = OracleStatus::NoFeasible;
    return out;
  }
  out.status = OracleStatus::Optimal;
  out.best = p1.best;
  out.energy_wh = p1.best_energy;
  out.sum_fh_us = p1.best_fh;

  if (mode == ObjectiveMode::LexicographicBiObjective) {
    // Second stage: minimal FH latency within the energy band.
    Pass p2(inst, false, p1.best_energy * (1.0 + 1e-6), budget.max_nodes);
    p2.dfs(0);
    out.nodes_explored += p2.nodes;
    if (p2.aborted) {
      out.status = OracleStatus::BudgetExceeded;
      return out;
    }
    out.best = p2.best;
    out.energy_wh = p2.best_energy;
    out.sum_fh_us = p2.best_fh;
  }
  return out;
}

}  // namespace xhaul
