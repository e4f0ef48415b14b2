#pragma once

#include <iosfwd>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "xhaul/oracle.hpp"

namespace xhaul {

enum class VarType { Binary, Continuous };

struct VarDef {
  std::string name;
  VarType type = VarType::Binary;
  double lb = 0.0;
  double ub = 1.0;  // +inf for unbounded continuous vars
};

struct LinTerm {
  int var;      // index into MilpModel::vars
  double coef;  // kept even when 0 so model structure is inspectable
};

struct LinExpr {
  std::vector<LinTerm> terms;
  double constant = 0.0;  // only used by objectives
};

enum class Sense { Le, Ge, Eq };

struct ConstraintRow {
  std::string name;  // unique
  std::string tag;   // constraint family, shared by related rows
  LinExpr lhs;
  Sense sense = Sense::Le;
  double rhs = 0.0;
  double tol_scale = 1.0;  // feasibility slack is 1e-7 * max(tol_scale, |rhs|)
};

// z = x * y over binaries, encoded as z<=x, z<=y, z>=x+y-1.
struct ProductLink {
  int z, x, y;
};

// eps = q * n for binary n and continuous q in [0, big_m], encoded as
// eps<=big_m*n, eps<=q, eps>=q-(1-n)*big_m, eps>=0.
struct BigMLink {
  int eps, q, n;
  double big_m;
};

// One selectable candidate of a decision group; `ones` lists the variables
// that take value 1 when this atom is chosen (all other group variables 0).
struct DecisionAtom {
  CandidateTuple tuple;
  std::vector<int> ones;
};

// All atoms competing for one (gnb, slice) flow; exactly one is chosen.
struct DecisionGroup {
  int gnb = 0;
  Slice slice = Slice::Embb;
  std::vector<DecisionAtom> atoms;
};

struct MilpModel {
  std::vector<VarDef> vars;
  std::vector<ConstraintRow> rows;
  LinExpr obj_energy;      // Wh, equals the evaluation of the decoded solution
  LinExpr obj_fh_latency;  // µs, sum of per-flow fronthaul latencies
  ObjectiveMode mode = ObjectiveMode::EnergyMin;

  std::vector<ProductLink> products;
  std::vector<BigMLink> bigms;
  std::vector<DecisionGroup> groups;

  std::map<std::string, int> var_index;

  int add_var(const std::string& name, VarType type, double lb, double ub);
  void add_row(const std::string& name, const std::string& tag, LinExpr lhs, Sense sense,
               double rhs, double tol_scale = 1.0);
  int find_var(const std::string& name) const;  // -1 when absent
  const LinExpr& objective() const;
  std::vector<int> rows_by_tag(const std::string& tag) const;
  int n_binary() const;
  int n_continuous() const;
};

struct BuildOptions {
  ObjectiveMode mode = ObjectiveMode::EnergyMin;
  std::size_t max_variables = 2'000'000;  // guard against accidental blow-ups
  // When finite, adds `obj_energy <= lex_energy_cap` (tag lex_energy_cap);
  // used by the second stage of the lexicographic mode.
  double lex_energy_cap = std::numeric_limits<double>::infinity();
};

struct BuildBudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Emits the full linear model for one instance: assignment backbone,
// configuration/placement/path marginals, per-edge projections, queuing
// product linearizations, load and compute rows, activation indicators and
// big-M energy terms.  Deterministic variable and row order.
MilpModel build_milp(const Instance& inst, const BuildOptions& opts = {});

double eval_expr(const LinExpr& e, const std::vector<double>& values);

// LP-format text round trip (our dialect: Minimize/Subject To/Bounds/
// Binary/End) and MPS export.
void write_lp(const MilpModel& m, std::ostream& os);
void write_mps(const MilpModel& m, std::ostream& os);

struct ParsedRow {
  std::string name;
  std::map<std::string, double> terms;  // by variable name, zero coefs dropped
  Sense sense;
  double rhs;
};
struct ParsedLp {
  std::map<std::string, double> objective;
  std::vector<ParsedRow> rows;
  std::map<std::string, VarDef> vars;
};
ParsedLp parse_lp(std::istream& is);
// Canonical view of a model row for round-trip comparison (zero coefficients
// dropped, terms keyed by variable name).
std::vector<ParsedRow> canonical_rows(const MilpModel& m);

}  // namespace xhaul
