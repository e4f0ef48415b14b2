#include "fixtures.hpp"

using nlohmann::json;
using xhaul::Scenario;

namespace fx {

namespace {

json node(int id, const char* kind, int cpus) {
  return json{{"id", id}, {"kind", kind}, {"cpus", cpus}};
}

json edge(int a, int b, double gbps, double km) {
  return json{{"a", a}, {"b", b}, {"capacity_gbps", gbps}, {"length_km", km}};
}

json gnb(const std::string& id, int cell, const char* profile, double peak) {
  return json{{"id", id}, {"cell_node", cell}, {"rf_profile", profile}, {"peak_mbps", peak}};
}

// Skeleton document with defaults; builders override topology/gnbs/pattern.
json base_doc(int k_paths) {
  return json{{"schema_version", 1},
              {"rf_profiles", {{"low20", rf_low20()}, {"mid40", rf_mid40()}, {"wide100", rf_wide100()}}},
              {"slice_shares", {{"embb", 0.70}, {"urllc", 0.25}, {"mmtc", 0.05}}},
              {"hourly_pattern", diurnal_pattern()},
              {"solver", {{"k_paths", k_paths}, {"iterations", 3}}}};
}

std::vector<double> flat_pattern(double v) { return std::vector<double>(24, v); }

}  // namespace

json rf_low20() {
  return json{{"bw_mhz", 20},  {"mod_bits", 6}, {"layers", 4},      {"antennas", 4},
              {"coding_rate", 2.0 / 3.0}, {"prb", 100}, {"mu", 0}, {"subcarriers", 1200}};
}

json rf_mid40() {
  return json{{"bw_mhz", 40},  {"mod_bits", 6}, {"layers", 4},      {"antennas", 4},
              {"coding_rate", 0.75}, {"prb", 100}, {"mu", 1}, {"subcarriers", 1200}};
}

json rf_wide100() {
  return json{{"bw_mhz", 100}, {"mod_bits", 8}, {"layers", 8},      {"antennas", 8},
              {"coding_rate", 1.0 / 3.0}, {"prb", 273}, {"mu", 1}, {"subcarriers", 3276}};
}

std::vector<double> diurnal_pattern() {
  return {0.2, 0.2, 0.2, 0.2, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.8,
          0.8, 0.8, 0.7, 0.7, 0.8, 0.9, 1.0, 1.0, 0.9, 0.7, 0.5, 0.3};
}

Scenario micro_tree() {
  json doc = base_doc(2);
  doc["topology"] = {
      {"nodes", {node(0, "core", 0), node(1, "regional_pp", 2), node(2, "switch", 0),
                 node(3, "cell_site_pp", 2)}},
      {"edges", {edge(0, 1, 100, 1), edge(1, 2, 25, 1), edge(2, 3, 25, 2)}}};
  doc["gnbs"] = {gnb("g0", 3, "low20", 200)};
  return xhaul::load_scenario(doc);
}

Scenario micro_low() {
  json doc = base_doc(1);
  doc["topology"] = {
      {"nodes", {node(0, "core", 0), node(1, "regional_pp", 2), node(2, "switch", 0),
                 node(3, "cell_site_pp", 2)}},
      {"edges", {edge(0, 1, 100, 1), edge(1, 2, 25, 1), edge(2, 3, 25, 2)}}};
  doc["gnbs"] = {gnb("g0", 3, "low20", 40)};
  return xhaul::load_scenario(doc);
}

Scenario micro2pp() {
  json doc = base_doc(2);
  doc["topology"] = {
      {"nodes", {node(0, "core", 0), node(1, "regional_pp", 2), node(2, "switch", 0),
                 node(3, "edge_pp", 2), node(4, "cell_site_pp", 2)}},
      {"edges", {edge(0, 1, 100, 1), edge(1, 2, 50, 1), edge(2, 3, 25, 1), edge(3, 4, 25, 2)}}};
  doc["gnbs"] = {gnb("g0", 4, "low20", 400)};
  return xhaul::load_scenario(doc);
}

Scenario tight_cell() {
  json doc = base_doc(1);
  doc["topology"] = {
      {"nodes", {node(0, "core", 0), node(1, "regional_pp", 2), node(2, "switch", 0),
                 node(3, "cell_site_pp", 1)}},
      {"edges", {edge(0, 1, 100, 1), edge(1, 2, 25, 1), edge(2, 3, 25, 1)}}};
  doc["gnbs"] = {gnb("g0", 3, "mid40", 500)};
  std::vector<double> pattern = flat_pattern(0.5);
  pattern[10] = 0.8;  // exactly saturates the 1-CPU cell site
  pattern[20] = 0.9;  // no configuration fits
  doc["hourly_pattern"] = pattern;
  return xhaul::load_scenario(doc);
}

Scenario micro_mesh() {
  json doc = base_doc(2);
  doc["topology"] = {
      {"nodes", {node(0, "core", 0), node(1, "regional_pp", 2), node(2, "switch", 0),
                 node(3, "switch", 0), node(4, "cell_site_pp", 2)}},
      {"edges", {edge(0, 1, 100, 1), edge(1, 2, 25, 1), edge(2, 4, 25, 1), edge(1, 3, 25, 20),
                 edge(3, 4, 25, 20)}}};
  doc["gnbs"] = {gnb("g0", 4, "low20", 300)};
  return xhaul::load_scenario(doc);
}

Scenario duo_tight_link() {
  json doc = base_doc(1);
  doc["topology"] = {
      {"nodes", {node(0, "core", 0), node(1, "regional_pp", 3), node(2, "switch", 0),
                 node(3, "cell_site_pp", 2), node(4, "cell_site_pp", 2)}},
      {"edges", {edge(0, 1, 100, 1), edge(1, 2, 50, 2), edge(2, 3, 8, 1), edge(2, 4, 8, 1)}}};
  doc["gnbs"] = {gnb("g0", 3, "low20", 5000), gnb("g1", 4, "low20", 5000)};
  doc["hourly_pattern"] = flat_pattern(1.0);
  return xhaul::load_scenario(doc);
}

Scenario duo_mixed_rf() {
  json doc = base_doc(1);
  doc["topology"] = {
      {"nodes", {node(0, "core", 0), node(1, "regional_pp", 3), node(2, "switch", 0),
                 node(3, "edge_pp", 2), node(4, "cell_site_pp", 2), node(5, "cell_site_pp", 2)}},
      {"edges", {edge(0, 1, 100, 1), edge(1, 2, 50, 1), edge(2, 3, 25, 1), edge(3, 4, 25, 1),
                 edge(3, 5, 25, 2)}}};
  doc["gnbs"] = {gnb("g0", 4, "low20", 400), gnb("g1", 5, "mid40", 600)};
  return xhaul::load_scenario(doc);
}

Scenario mesh_flows() {
  json doc = base_doc(2);
  doc["topology"] = {
      {"nodes", {node(0, "core", 0), node(1, "regional_pp", 3), node(2, "switch", 0),
                 node(3, "switch", 0), node(4, "edge_pp", 2), node(5, "cell_site_pp", 2)}},
      {"edges", {edge(0, 1, 100, 1), edge(1, 2, 50, 1), edge(1, 3, 50, 4), edge(2, 4, 25, 1),
                 edge(3, 4, 25, 4), edge(4, 5, 25, 1)}}};
  doc["gnbs"] = {gnb("g0", 5, "low20", 400)};
  return xhaul::load_scenario(doc);
}

Scenario trio_tree() {
  json doc = base_doc(1);
  doc["topology"] = {
      {"nodes", {node(0, "core", 0), node(1, "regional_pp", 4), node(2, "switch", 0),
                 node(3, "cell_site_pp", 2), node(4, "cell_site_pp", 2),
                 node(5, "cell_site_pp", 2)}},
      {"edges", {edge(0, 1, 200, 1), edge(1, 2, 50, 1), edge(2, 3, 25, 1), edge(2, 4, 25, 2),
                 edge(2, 5, 25, 3)}}};
  doc["gnbs"] = {gnb("g0", 3, "low20", 300), gnb("g1", 4, "low20", 400),
                 gnb("g2", 5, "low20", 500)};
  return xhaul::load_scenario(doc);
}

Scenario latency_split() {
  json doc = base_doc(2);
  doc["topology"] = {
      {"nodes", {node(0, "core", 0), node(1, "regional_pp", 2), node(2, "switch", 0),
                 node(3, "switch", 0), node(4, "cell_site_pp", 2)}},
      {"edges", {edge(0, 1, 100, 1), edge(1, 2, 25, 2), edge(2, 4, 25, 2), edge(1, 3, 25, 40),
                 edge(3, 4, 25, 40)}}};
  doc["gnbs"] = {gnb("g0", 4, "low20", 300)};
  return xhaul::load_scenario(doc);
}

Scenario zero_hour() {
  json doc = base_doc(2);
  doc["topology"] = {
      {"nodes", {node(0, "core", 0), node(1, "regional_pp", 2), node(2, "switch", 0),
                 node(3, "cell_site_pp", 2)}},
      {"edges", {edge(0, 1, 100, 1), edge(1, 2, 25, 1), edge(2, 3, 25, 2)}}};
  doc["gnbs"] = {gnb("g0", 3, "low20", 500)};
  std::vector<double> pattern = diurnal_pattern();
  pattern[0] = 0.0;
  doc["hourly_pattern"] = pattern;
  return xhaul::load_scenario(doc);
}

Scenario rate_escape() {
  json doc = base_doc(1);
  doc["topology"] = {
      {"nodes", {node(0, "core", 0), node(1, "regional_pp", 2), node(2, "switch", 0),
                 node(3, "cell_site_pp", 2)}},
      {"edges", {edge(0, 1, 100, 1), edge(1, 2, 25, 1), edge(2, 3, 1, 1)}}};
  doc["gnbs"] = {gnb("g0", 3, "low20", 1200)};
  doc["hourly_pattern"] = flat_pattern(1.0);
  return xhaul::load_scenario(doc);
}

std::string fixture_dir() { return XHAUL_FIXTURE_DIR; }

Scenario hier16() { return xhaul::load_scenario_file(fixture_dir() + "/hier16.json"); }

std::vector<OracleCase> oracle_cases() {
  std::vector<OracleCase> out;
  out.push_back({"micro_tree", micro_tree(), 18});
  out.push_back({"micro_low", micro_low(), 18});
  out.push_back({"micro2pp", micro2pp(), 18});
  out.push_back({"micro_mesh", micro_mesh(), 18});
  out.push_back({"duo_tight_link", duo_tight_link(), 0});
  out.push_back({"duo_mixed_rf", duo_mixed_rf(), 18});
  out.push_back({"mesh_flows", mesh_flows(), 18});
  out.push_back({"trio_tree", trio_tree(), 18});
  out.push_back({"latency_split", latency_split(), 18});
  out.push_back({"zero_hour", zero_hour(), 0});
  out.push_back({"rate_escape", rate_escape(), 0});
  return out;
}

}  // namespace fx
