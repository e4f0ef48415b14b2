#pragma once

// Desk-scale scenarios shared by the unit and acceptance suites.  Every
// builder assembles a JSON document and runs it through the scenario loader,
// so fixtures exercise the external schema on every construction.

#include <string>
#include <utility>
#include <vector>

#include "xhaul/scenario.hpp"

namespace fx {

// RF profile documents (the three reference radio classes).
nlohmann::json rf_low20();
nlohmann::json rf_mid40();
nlohmann::json rf_wide100();

// 24-value diurnal pattern with repeated levels (night trough, evening peak).
std::vector<double> diurnal_pattern();

// Single gNB on a 4-node chain core - pool - switch - cell; k=2.
// Rich in capacity: every single-split configuration is feasible.
xhaul::Scenario micro_tree();

// micro_tree at a twentieth of the demand, k=1.
xhaul::Scenario micro_low();

// 5-node chain with an intermediate edge pool, enabling the dual splits.
xhaul::Scenario micro2pp();

// 1-CPU cell site under a mid40 radio.  Hour 10 (pattern 0.8) admits exactly
// the lightest-RU configuration for every slice; hour 20 (pattern 0.9) is
// infeasible outright.
xhaul::Scenario tight_cell();

// Two disjoint pool-to-cell routes, one short, one 80 km round.
xhaul::Scenario micro_mesh();

// Two gNBs behind 8 Gbps cell links at high demand: the payload-rate splits
// compete for the link and force mixed configurations.
xhaul::Scenario duo_tight_link();

// Two gNBs with different radio profiles and an intermediate pool.
xhaul::Scenario duo_mixed_rf();

// Mesh with two switch planes between the pools; candidate paths overlap,
// so transport flows interfere and queuing terms matter.
xhaul::Scenario mesh_flows();

// Three gNBs on a star behind one pool.
xhaul::Scenario trio_tree();

// Short 4 km route and an 80 km alternative: the long route breaks the
// URLLC end-to-end budget but not the relaxed slice budgets.
xhaul::Scenario latency_split();

// micro_tree demand curve with a zero-demand hour 0.
xhaul::Scenario zero_hour();

// 1 Gbps cell link that the payload-rate splits cannot fit at peak, while
// the IQ-stream split can.
xhaul::Scenario rate_escape();

// Directory with checked-in fixture files (hier16.json).
std::string fixture_dir();

// 16-node hierarchical scenario, 6 gNBs, mixed radio profiles.
xhaul::Scenario hier16();

// One named (scenario, hour) pair for the cross-solver suites.
struct OracleCase {
  std::string name;
  xhaul::Scenario scen;
  int hour;
};

// The desk-scale cases on which the exhaustive search, the model solver and
// the heuristic must all succeed and agree (acceptance criteria).
std::vector<OracleCase> oracle_cases();

}  // namespace fx
