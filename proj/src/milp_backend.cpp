#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>

#include <string>
#include "xhaul/milp_solver.hpp"

namespace xhaul {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::BudgetExceeded: return "budget_exceeded";
  }
  return "?";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double row_tol(const ConstraintRow& r) {
  return 1e-7 * std::max(r.tol_scale, std::abs(r.rhs));
}

// One staged operation: either solve an equality row for its last unknown
// variable, or clamp a residual variable to the tightest lower bound its
// ready rows imply (exact for indicator/product/big-M variables at integral
// points; every row is still checked when it completes).
struct Op {
  int var = -1;
  int def_row = -1;    // >=0: Define via this equality
  double def_coef = 0;
  std::vector<std::pair<int, double>> lb_rows;  // Clamp: (row, coef of var)
};

struct Schedule {
  int levels = 0;                     // number of decision groups
  std::vector<std::vector<Op>> ops;   // slot l+1 runs after group l; slot 0 at root
};

// Static per-row term view that ignores zero coefficients.
struct RowTerms {
  std::vector<LinTerm> terms;
};

Schedule discover(const MilpModel& m, const std::vector<RowTerms>& rt) {
  const int V = static_cast<int>(m.vars.size());
  const int R = static_cast<int>(m.rows.size());
  const int K = static_cast<int>(m.groups.size());

  std::vector<int> level(V, -2);
  for (int g = 0; g < K; ++g)
    for (const DecisionAtom& a : m.groups[g].atoms)
      for (int v : a.ones) level[v] = g;

  std::vector<std::vector<std::pair<int, double>>> var_rows(V);
  for (int r = 0; r < R; ++r)
    for (const LinTerm& t : rt[r].terms) var_rows[t.var].push_back({r, t.coef});

  std::vector<int> unk(R, 0);
  for (int r = 0; r < R; ++r) {
    for (const LinTerm& t : rt[r].terms)
      if (level[t.var] == -2) ++unk[r];
  }
  std::vector<char> consumed(R, 0);

  // Lower-bound row inventory per variable.
  std::vector<std::vector<std::pair<int, double>>> lb_of(V);
  for (int r = 0; r < R; ++r) {
    const ConstraintRow& row = m.rows[r];
    if (row.sense == Sense::Eq) continue;
    for (const LinTerm& t : rt[r].terms) {
      bool lower = (row.sense == Sense::Ge && t.coef > 0) || (row.sense == Sense::Le && t.coef < 0);
      if (lower && level[t.var] == -2) lb_of[t.var].push_back({r, t.coef});
    }
  }

  Schedule sched;
  sched.levels = K;
  sched.ops.resize(K + 1);

  // Variables that lead an equality row have a pending definition and must
  // never be settled by the bound-clamp fallback.
  std::vector<char> has_def(V, 0);
  for (int r = 0; r < R; ++r)
    if (m.rows[r].sense == Sense::Eq && !rt[r].terms.empty()) {
      int lead = rt[r].terms.front().var;
      if (level[lead] == -2) has_def[lead] = 1;
    }

  std::deque<int> ready;  // rows whose unknown count just reached 1
  for (int r = 0; r < R; ++r)
    if (unk[r] == 1) ready.push_back(r);

  auto row_level = [&](int r, int skip_var) {
    int lv = -1;
    for (const LinTerm& t : rt[r].terms)
      if (t.var != skip_var) lv = std::max(lv, level[t.var]);
    return lv;
  };

  int unknown_vars = 0;
  for (int v = 0; v < V; ++v)
    if (level[v] == -2) ++unknown_vars;

  auto settle = [&](int v, int lv) {
    level[v] = lv;
    --unknown_vars;
    for (auto& [r, c] : var_rows[v]) {
      (void)c;
      if (--unk[r] == 1) ready.push_back(r);
    }
  };

  while (unknown_vars > 0) {
    bool progressed = false;
    while (!ready.empty()) {
      int r = ready.front();
      ready.pop_front();
      if (unk[r] != 1 || consumed[r] || m.rows[r].sense != Sense::Eq) continue;
      int v = -1;
      double coef = 0.0;
      for (const LinTerm& t : rt[r].terms)
        if (level[t.var] == -2) {
          v = t.var;
          coef = t.coef;
        }
      if (v == -1) continue;
      // Definitional equalities lead with the variable they define; solving
      // for any other term would assign, say, a latency sum to a pair binary.
      if (v != rt[r].terms.front().var) continue;
      int lv = row_level(r, v);
      consumed[r] = 1;
      Op op;
      op.var = v;
      op.def_row = r;
      op.def_coef = coef;
      sched.ops[lv + 1].push_back(op);
      settle(v, lv);
      progressed = true;
    }
    if (unknown_vars == 0) break;

    // Clamp whatever is fully determined by ready lower-bound rows; when a
    // mutual dependency stalls the strict rule, the lowest-id variable with
    // any ready row breaks the tie using just those rows.
    auto ready_lb = [&](int v) {
      std::vector<std::pair<int, double>> rs;
      for (auto& [r, c] : lb_of[v])
        if (unk[r] == 1) rs.push_back({r, c});
      return rs;
    };
    int pick = -1;
    std::vector<std::pair<int, double>> pick_rows;
    for (int v = 0; v < V && pick == -1; ++v) {
      if (level[v] != -2 || has_def[v]) continue;
      auto rs = ready_lb(v);
      if (lb_of[v].empty() || rs.size() == lb_of[v].size()) {
        pick = v;
        pick_rows = rs;
      }
    }
    if (pick == -1) {
      for (int v = 0; v < V && pick == -1; ++v) {
        if (level[v] != -2 || has_def[v]) continue;
        auto rs = ready_lb(v);
        if (!rs.empty()) {
          pick = v;
          pick_rows = rs;
        }
      }
    }
    if (pick == -1) throw std::logic_error("model is not propagation-solvable");
    int lv = -1;
    for (auto& [r, c] : pick_rows) {
      (void)c;
      lv = std::max(lv, row_level(r, pick));
    }
    Op op;
    op.var = pick;
    op.lb_rows = std::move(pick_rows);
    sched.ops[lv + 1].push_back(op);
    settle(pick, lv);
    progressed = true;
    (void)progressed;
  }
  return sched;
}

struct Search {
  const MilpModel& m;
  const Schedule& sched;
  std::vector<RowTerms> rt;

  // Static structure.
  std::vector<std::vector<std::pair<int, double>>> var_rows;  // (row, coef)
  std::vector<double> min_contrib_flat;                        // parallel to var_rows entries
  std::vector<double> obj_coef;

  // Runtime state.
  std::vector<double> values;
  std::vector<char> known;
  std::vector<double> partial;
  std::vector<int> unknown;
  std::vector<double> min_rem;
  std::vector<int> inf_min;
  std::vector<int> trail;
  double partial_obj = 0.0;

  long long nodes = 0, leaves = 0;
  long long max_nodes = 0;
  bool aborted = false;
  double best_obj = kInf;
  std::vector<int> chosen, best_chosen;

  // Ties (within rounding noise) keep the first-found assignment so the
  // search order, not float summation order, decides the reported argmin.
  bool improves(double obj) const {
    if (!std::isfinite(best_obj)) return true;
    return obj < best_obj - 1e-9 * std::max(1.0, std::abs(best_obj));
  }

  explicit Search(const MilpModel& model, const Schedule& s, std::vector<RowTerms> terms)
      : m(model), sched(s), rt(std::move(terms)) {
    const int V = static_cast<int>(m.vars.size());
    const int R = static_cast<int>(m.rows.size());
    var_rows.resize(V);
    for (int r = 0; r < R; ++r)
      for (const LinTerm& t : rt[r].terms) var_rows[t.var].push_back({r, t.coef});
    obj_coef.assign(V, 0.0);
    for (const LinTerm& t : m.objective().terms) obj_coef[t.var] += t.coef;

    values.assign(V, 0.0);
    known.assign(V, 0);
    partial.assign(R, 0.0);
    unknown.assign(R, 0);
    min_rem.assign(R, 0.0);
    inf_min.assign(R, 0);
    for (int r = 0; r < R; ++r) {
      for (const LinTerm& t : rt[r].terms) {
        ++unknown[r];
        double mc = t.coef > 0 ? t.coef * m.vars[t.var].lb : t.coef * m.vars[t.var].ub;
        if (std::isinf(mc))
          ++inf_min[r];
        else
          min_rem[r] += mc;
      }
    }
    chosen.assign(m.groups.size(), -1);
  }

  double min_contrib(int v, double coef) const {
    return coef > 0 ? coef * m.vars[v].lb : coef * m.vars[v].ub;
  }

  bool row_ok_complete(int r) const {
    const ConstraintRow& row = m.rows[r];
    double tol = row_tol(row);
    switch (row.sense) {
      case Sense::Le: return partial[r] <= row.rhs + tol;
      case Sense::Ge: return partial[r] >= row.rhs - tol;
      case Sense::Eq: return std::abs(partial[r] - row.rhs) <= tol;
    }
    return false;
  }

  // Sets a variable value, updates row partials and runs completion/screen
  // checks.  Returns false when some row is already violated.
  bool set_var(int v, double val) {
    values[v] = val;
    known[v] = 1;
    trail.push_back(v);
    partial_obj += obj_coef[v] * val;
    bool ok = true;
    for (auto& [r, coef] : var_rows[v]) {
      partial[r] += coef * val;
      double mc = min_contrib(v, coef);
      if (std::isinf(mc))
        --inf_min[r];
      else
        min_rem[r] -= mc;
      int u = --unknown[r];
      if (u == 0) {
        if (!row_ok_complete(r)) ok = false;
      } else if (m.rows[r].sense == Sense::Le && inf_min[r] == 0) {
        if (partial[r] + min_rem[r] > m.rows[r].rhs + row_tol(m.rows[r])) ok = false;
      }
    }
    return ok;
  }

  void unset_var(int v) {
    double val = values[v];
    partial_obj -= obj_coef[v] * val;
    for (auto& [r, coef] : var_rows[v]) {
      partial[r] -= coef * val;
      double mc = min_contrib(v, coef);
      if (std::isinf(mc))
        ++inf_min[r];
      else
        min_rem[r] += mc;
      ++unknown[r];
    }
    known[v] = 0;
    values[v] = 0.0;
  }

  void unwind(size_t mark) {
    while (trail.size() > mark) {
      int v = trail.back();
      trail.pop_back();
      unset_var(v);
    }
  }

  bool run_ops(int slot) {
    for (const Op& op : sched.ops[slot]) {
      double val;
      if (op.def_row >= 0) {
        val = (m.rows[op.def_row].rhs - partial[op.def_row]) / op.def_coef;
      } else {
        val = m.vars[op.var].lb;
        for (auto& [r, c] : op.lb_rows) val = std::max(val, (m.rows[r].rhs - partial[r]) / c);
      }
      const VarDef& vd = m.vars[op.var];
      if (vd.type == VarType::Binary) {
        double rounded = std::round(val);
        if (std::abs(rounded - val) > 1e-6) return false;
        val = rounded;
      }
      if (val < vd.lb - 1e-9 || val > vd.ub + 1e-9 * std::max(1.0, std::abs(vd.ub)))
        return false;
      if (!set_var(op.var, val)) return false;
    }
    return true;
  }

  bool apply_atom(int gi, int ai) {
    const DecisionGroup& g = m.groups[gi];
    bool ok = true;
    for (int a = 0; a < static_cast<int>(g.atoms.size()); ++a) {
      double val = a == ai ? 1.0 : 0.0;
      for (int v : g.atoms[a].ones)
        if (!set_var(v, val)) ok = false;
    }
    return ok;
  }

  void dfs(int gi) {
    if (aborted) return;
    for (int ai = 0; ai < static_cast<int>(m.groups[gi].atoms.size()); ++ai) {
      if (++nodes > max_nodes) {
        aborted = true;
        return;
      }
      size_t mark = trail.size();
      chosen[gi] = ai;
      bool ok = apply_atom(gi, ai);
      if (ok) ok = run_ops(gi + 1);
      if (ok && improves(partial_obj + m.objective().constant)) {
        if (gi + 1 == sched.levels) {
          ++leaves;
          double obj = partial_obj + m.objective().constant;
          if (improves(obj)) {
            best_obj = obj;
            best_chosen = chosen;
          }
        } else {
          dfs(gi + 1);
        }
      }
      unwind(mark);
      chosen[gi] = -1;
      if (aborted) return;
    }
  }
};

std::vector<RowTerms> nonzero_terms(const MilpModel& m) {
  std::vector<RowTerms> rt(m.rows.size());
  for (size_t r = 0; r < m.rows.size(); ++r)
    for (const LinTerm& t : m.rows[r].lhs.terms)
      if (t.coef != 0.0) rt[r].terms.push_back(t);
  return rt;
}

}  // namespace

SolveResult PropagationEnumerationBackend::solve(const MilpModel& m,
                                                 const EnumerationBudget& budget) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<RowTerms> rt = nonzero_terms(m);
  Schedule sched = discover(m, rt);

  SolveResult res;
  Search s(m, sched, rt);
  s.max_nodes = budget.max_nodes;

  bool root_ok = s.run_ops(0);
  if (root_ok && !m.groups.empty()) s.dfs(0);
  if (root_ok && m.groups.empty() && s.partial_obj < kInf) {
    s.best_obj = s.partial_obj + m.objective().constant;
    s.best_chosen.clear();
  }

  res.stats.nodes = s.nodes;
  res.stats.leaves = s.leaves;
  if (s.aborted) {
    res.status = SolveStatus::BudgetExceeded;
  } else if (std::isfinite(s.best_obj)) {
    res.status = SolveStatus::Optimal;
    res.objective = s.best_obj;
    // Replay the winning assignment to materialize every variable value.
    Search rep(m, sched, rt);
    rep.max_nodes = budget.max_nodes;
    bool ok = rep.run_ops(0);
    for (size_t gi = 0; ok && gi < m.groups.size(); ++gi) {
      ok = rep.apply_atom(static_cast<int>(gi), s.best_chosen[gi]);
      if (ok) ok = rep.run_ops(static_cast<int>(gi) + 1);
    }
    if (!ok) throw std::logic_error("replay of best solution failed row checks");
    res.values = rep.values;
  } else {
    res.status = SolveStatus::Infeasible;
  }
  res.stats.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace xhaul
