#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "xhaul/phys_models.hpp"
#include "xhaul/topology.hpp"

namespace xhaul {

inline constexpr int kSchemaVersion = 1;

struct Gnb {
  std::string id;
  NodeId cell_node = -1;  // its CellSitePP
  std::string rf_profile;
  double peak_mbps = 0.0;
};

struct LatencyBounds {
  double fh_max_us = 250.0;
  double mh_max_us = 10000.0;
  std::array<double, 3> slice_max_us = {10000.0, 250.0, 10000.0};  // embb, urllc, mmtc
  double slice_max(Slice s) const { return slice_max_us[static_cast<int>(s)]; }
};

struct SolverDefaults {
  int k_paths = 4;       // candidate paths per ordered node pair
  int iterations = 3;    // improvement sweeps of the heuristic
};

struct Scenario {
  int schema_version = kSchemaVersion;
  Topology topology;
  ScenarioConstants constants;
  std::vector<Gnb> gnbs;
  std::map<std::string, RfConfig> rf_profiles;
  std::array<double, 3> slice_shares = {0.70, 0.25, 0.05};  // embb, urllc, mmtc
  std::vector<double> hourly_pattern;                       // 24 fractions of peak
  LatencyBounds bounds;
  SolverDefaults solver;
  uint64_t content_hash = 0;  // FNV-1a over the canonical serialization

  const RfConfig& rf_of(int gnb) const { return rf_profiles.at(gnbs.at(gnb).rf_profile); }
  double share(Slice s) const { return slice_shares[static_cast<int>(s)]; }
  int n_gnbs() const { return static_cast<int>(gnbs.size()); }
};

// Demand of one (gNB, slice) at the given hour, in Mbps:
// peak * hourly_pattern[hour] * slice share.
double demand_at_hour(const Scenario& s, int gnb, Slice slice, int hour);

// Hours carrying identical pattern values, grouped; first member is the
// representative.  Lets a runner solve each distinct load level once.
std::vector<std::vector<int>> dedup_hours(const Scenario& s);

Scenario load_scenario(const nlohmann::json& doc);
Scenario load_scenario_file(const std::string& path);

// Canonical document for hashing / re-emission.
nlohmann::json to_json(const Scenario& s);

uint64_t fnv1a64(const std::string& bytes);

struct GenParams {
  int gnbs = 6;
  std::string topology = "hier";  // "hier" or "mesh"
  uint64_t seed = 1;
};

// Deterministic synthetic scenario: processing pools behind a two-tier
// aggregation, radio mix 50/40/10 across the three reference profiles,
// diurnal 24h pattern.
nlohmann::json gen_scenario(const GenParams& p);

}  // namespace xhaul
