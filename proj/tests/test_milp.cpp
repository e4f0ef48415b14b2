#include <cmath>
#include <map>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "xhaul/milp.hpp"
#include "xhaul/milp_solver.hpp"
#include "xhaul/oracle.hpp"

using namespace xhaul;

TEST_CASE("model shape follows the instance") {
  Scenario s = fx::micro_tree();
  Instance inst(s, 18);
  MilpModel m = build_milp(inst);

  // one assignment backbone per flow, one atom per candidate tuple
  REQUIRE(m.groups.size() == 3);
  for (int f = 0; f < 3; ++f) {
    const DecisionGroup& g = m.groups[f];
    CHECK(g.gnb == f / 3);
    const auto& ts = inst.tuples(g.gnb, g.slice);
    REQUIRE(g.atoms.size() == ts.size());
    for (size_t i = 0; i < ts.size(); ++i) {
      CHECK(g.atoms[i].tuple == ts[i]);
      CHECK(!g.atoms[i].ones.empty());
    }
  }
  CHECK(m.rows_by_tag("vnf_1").size() == 3);
  CHECK(m.rows_by_tag("vnf_2").size() == 3);
  CHECK(m.find_var("X_f0_t0") >= 0);
  CHECK(m.find_var("X_f2_t2") >= 0);
  CHECK(m.find_var("X_f0_t3") == -1);  // only three tuples on this chain
  CHECK(m.find_var("RU_f1") >= 0);
  CHECK(m.find_var("Y_n1") >= 0);
  CHECK(m.find_var("Z_n2") >= 0);

  // per processing node: load definition and capacity
  CHECK(m.rows_by_tag("comp_1").size() == 2);
  CHECK(m.rows_by_tag("comp_2").size() == 2);
  // per edge: class loads, total and capacity
  CHECK(m.rows_by_tag("link_1").size() == s.topology.edges.size());
  CHECK(m.rows_by_tag("link_4").size() == s.topology.edges.size());
  // per flow: latency definitions and bounds
  for (const char* tag : {"lat_14", "lat_15", "lat_16", "lat_19", "lat_20", "lat_21"})
    CHECK(m.rows_by_tag(tag).size() == 3);

  CHECK(m.n_binary() + m.n_continuous() == static_cast<int>(m.vars.size()));
  CHECK(m.n_binary() > 0);
  CHECK(!m.obj_energy.terms.empty());
  CHECK(!m.obj_fh_latency.terms.empty());

  // energy mode objective is the energy expression
  CHECK(&m.objective() == &m.obj_energy);
  BuildOptions fo;
  fo.mode = ObjectiveMode::FhLatencyMin;
  MilpModel mf = build_milp(inst, fo);
  CHECK(&mf.objective() == &mf.obj_fh_latency);
}

TEST_CASE("every product variable carries its three linking rows") {
  Scenario s = fx::mesh_flows();  // overlapping paths: many interference products
  Instance inst(s, 18);
  MilpModel m = build_milp(inst);
  REQUIRE(!m.products.empty());
  for (const ProductLink& p : m.products) {
    const std::string& zn = m.vars[p.z].name;
    bool le_x = false, le_y = false, ge_sum = false;
    for (const ConstraintRow& r : m.rows) {
      if (r.name == "pl_2[" + zn + "]") {
        REQUIRE(r.lhs.terms.size() == 2);
        CHECK(r.sense == Sense::Le);
        le_x = true;
      }
      if (r.name == "pl_3[" + zn + "]") le_y = true;
      if (r.name == "pl_4[" + zn + "]") {
        CHECK(r.sense == Sense::Ge);
        CHECK(r.rhs == doctest::Approx(-1.0));
        ge_sum = true;
      }
    }
    CHECK(le_x);
    CHECK(le_y);
    CHECK(ge_sum);
    CHECK(m.vars[p.z].type == VarType::Binary);
    CHECK(m.vars[p.x].type == VarType::Binary);
    CHECK(m.vars[p.y].type == VarType::Binary);
  }
}

TEST_CASE("big-M activation links cover the energy indicators") {
  Scenario s = fx::micro2pp();
  Instance inst(s, 18);
  MilpModel m = build_milp(inst);
  REQUIRE(!m.bigms.empty());
  for (const BigMLink& b : m.bigms) {
    CHECK(b.big_m > 0);
    CHECK(m.vars[b.n].type == VarType::Binary);
    CHECK(m.vars[b.eps].type == VarType::Continuous);
    CHECK(m.vars[b.q].type == VarType::Continuous);
    // the indicator's M dominates the continuous input's range
    CHECK(m.vars[b.q].ub <= b.big_m * (1 + 1e-9));
  }
}

TEST_CASE("zero-demand hours keep the load rows with explicit zero coefficients") {
  Scenario s = fx::zero_hour();
  Instance inst(s, 0);  // pattern 0: every transport rate is zero
  MilpModel m = build_milp(inst);
  auto l1 = m.rows_by_tag("link_1");
  REQUIRE(l1.size() == s.topology.edges.size());
  bool saw_zero_coef = false;
  for (int ri : l1)
    for (const LinTerm& t : m.rows[ri].lhs.terms)
      if (t.coef == 0.0) saw_zero_coef = true;
  CHECK(saw_zero_coef);  // structure survives even when demand vanishes
}

TEST_CASE("variable budget guards against blow-ups") {
  Scenario s = fx::micro_tree();
  Instance inst(s, 18);
  BuildOptions tiny;
  tiny.max_variables = 10;
  CHECK_THROWS_AS(build_milp(inst, tiny), BuildBudgetError);
}

TEST_CASE("an energy cap row appears only in the capped build") {
  Scenario s = fx::micro_tree();
  Instance inst(s, 18);
  CHECK(build_milp(inst).rows_by_tag("lex_energy_cap").empty());
  BuildOptions capped;
  capped.lex_energy_cap = 1234.5;
  MilpModel m = build_milp(inst, capped);
  auto rows = m.rows_by_tag("lex_energy_cap");
  REQUIRE(rows.size() == 1);
  CHECK(m.rows[rows[0]].rhs == doctest::Approx(1234.5));
  CHECK(m.rows[rows[0]].sense == Sense::Le);
}

TEST_CASE("model construction is deterministic") {
  Scenario s = fx::duo_mixed_rf();
  Instance inst(s, 18);
  MilpModel a = build_milp(inst);
  MilpModel b = build_milp(inst);
  REQUIRE(a.vars.size() == b.vars.size());
  REQUIRE(a.rows.size() == b.rows.size());
  for (size_t i = 0; i < a.vars.size(); ++i) CHECK(a.vars[i].name == b.vars[i].name);
  for (size_t i = 0; i < a.rows.size(); ++i) CHECK(a.rows[i].name == b.rows[i].name);
}

TEST_CASE("LP text round-trips to the same canonical rows") {
  Scenario s = fx::micro2pp();
  Instance inst(s, 18);
  MilpModel m = build_milp(inst);

  std::stringstream ss;
  write_lp(m, ss);
  ParsedLp parsed = parse_lp(ss);

  auto want = canonical_rows(m);
  REQUIRE(parsed.rows.size() == want.size());
  std::map<std::string, const ParsedRow*> by_name;
  for (const ParsedRow& r : parsed.rows) by_name[r.name] = &r;
  for (const ParsedRow& w : want) {
    auto it = by_name.find(w.name);
    REQUIRE_MESSAGE(it != by_name.end(), w.name);
    const ParsedRow& g = *it->second;
    CHECK(g.sense == w.sense);
    CHECK(g.rhs == doctest::Approx(w.rhs).epsilon(1e-12));
    REQUIRE_MESSAGE(g.terms.size() == w.terms.size(), w.name);
    for (const auto& [vn, coef] : w.terms) {
      REQUIRE_MESSAGE(g.terms.count(vn) == 1, vn);
      CHECK(g.terms.at(vn) == doctest::Approx(coef).epsilon(1e-12));
    }
  }
  // objective and variable domains survive the trip
  for (const LinTerm& t : m.objective().terms) {
    if (t.coef == 0.0) continue;
    const std::string& vn = m.vars[t.var].name;
    REQUIRE(parsed.objective.count(vn) == 1);
    CHECK(parsed.objective.at(vn) == doctest::Approx(t.coef).epsilon(1e-12));
  }
  for (const VarDef& v : m.vars) {
    REQUIRE(parsed.vars.count(v.name) == 1);
    CHECK(parsed.vars.at(v.name).type == v.type);
  }
  // the writer is deterministic
  std::stringstream s2;
  write_lp(m, s2);
  CHECK(s2.str() == ss.str());
}

TEST_CASE("MPS export is well-formed and deterministic") {
  Scenario s = fx::micro_tree();
  Instance inst(s, 18);
  MilpModel m = build_milp(inst);
  std::stringstream a, b;
  write_mps(m, a);
  write_mps(m, b);
  CHECK(a.str() == b.str());
  for (const char* sec : {"ROWS", "COLUMNS", "RHS", "BOUNDS", "ENDATA"})
    CHECK(a.str().find(sec) != std::string::npos);
}

TEST_CASE("model optimum equals the exhaustive optimum on small instances") {
  for (const char* name : {"micro_tree", "micro_low", "micro2pp"}) {
    Scenario s = std::string(name) == "micro_tree"  ? fx::micro_tree()
                 : std::string(name) == "micro_low" ? fx::micro_low()
                                                    : fx::micro2pp();
    Instance inst(s, 18);
    for (ObjectiveMode mode : {ObjectiveMode::EnergyMin, ObjectiveMode::FhLatencyMin,
                               ObjectiveMode::LexicographicBiObjective}) {
      CAPTURE(name);
      CAPTURE(to_string(mode));
      OracleResult want = enumerate_optimum(inst, mode);
      REQUIRE(want.status == OracleStatus::Optimal);
      MilpOutcome got = solve_milp(inst, mode);
      REQUIRE(got.status == SolveStatus::Optimal);
      CHECK(got.energy_wh ==
            doctest::Approx(want.energy_wh).epsilon(1e-6));
      CHECK(got.sum_fh_us == doctest::Approx(want.sum_fh_us).epsilon(1e-6).scale(1.0));
      CHECK(check(inst, got.solution).ok);
      CHECK(got.n_vars > 0);
      CHECK(got.n_rows > 0);
    }
  }
}

TEST_CASE("the exactly-filling load level is accepted and one step more is rejected") {
  Scenario s = fx::tight_cell();
  Instance at_cap(s, 10);  // cell compute fits to the GOPS
  OracleResult want = enumerate_optimum(at_cap, ObjectiveMode::EnergyMin);
  REQUIRE(want.status == OracleStatus::Optimal);
  MilpOutcome got = solve_milp(at_cap, ObjectiveMode::EnergyMin);
  REQUIRE(got.status == SolveStatus::Optimal);
  CHECK(got.energy_wh == doctest::Approx(want.energy_wh).epsilon(1e-6));

  Instance over(s, 20);
  CHECK(enumerate_optimum(over, ObjectiveMode::EnergyMin).status == OracleStatus::NoFeasible);
  CHECK(solve_milp(over, ObjectiveMode::EnergyMin).status == SolveStatus::Infeasible);
}

TEST_CASE("decoded solutions are canonical and reproducible") {
  Scenario s = fx::micro2pp();
  Instance inst(s, 18);
  MilpOutcome a = solve_milp(inst, ObjectiveMode::EnergyMin);
  MilpOutcome b = solve_milp(inst, ObjectiveMode::EnergyMin);
  REQUIRE(a.status == SolveStatus::Optimal);
  CHECK(state_hash(inst, a.solution) == state_hash(inst, b.solution));
  for (size_t i = 1; i < a.solution.assigns.size(); ++i) {
    const Assignment& p = a.solution.assigns[i - 1];
    const Assignment& q = a.solution.assigns[i];
    CHECK(std::pair(p.gnb, static_cast<int>(p.slice)) <
          std::pair(q.gnb, static_cast<int>(q.slice)));
  }
}
