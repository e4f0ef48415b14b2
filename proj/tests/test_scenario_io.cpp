#include <algorithm>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "xhaul/scenario.hpp"

using namespace xhaul;
using nlohmann::json;

namespace {

// Smallest valid document; tests mutate one field at a time.
json minimal_doc() {
  json d;
  d["schema_version"] = 1;
  d["topology"] = {
      {"nodes",
       {json{{"id", 0}, {"kind", "core"}, {"cpus", 0}},
        json{{"id", 1}, {"kind", "regional_pp"}, {"cpus", 2}},
        json{{"id", 2}, {"kind", "cell_site_pp"}, {"cpus", 2}}}},
      {"edges",
       {json{{"a", 0}, {"b", 1}, {"capacity_gbps", 100}, {"length_km", 1}},
        json{{"a", 1}, {"b", 2}, {"capacity_gbps", 25}, {"length_km", 1}}}}};
  d["rf_profiles"] = {{"low20", fx::rf_low20()}};
  d["gnbs"] = {json{{"id", "g0"}, {"cell_node", 2}, {"rf_profile", "low20"}, {"peak_mbps", 200}}};
  d["hourly_pattern"] = std::vector<double>(24, 0.5);
  return d;
}

}  // namespace

TEST_CASE("a minimal document loads with defaulted sections") {
  Scenario s = load_scenario(minimal_doc());
  CHECK(s.schema_version == 1);
  CHECK(s.n_gnbs() == 1);
  CHECK(s.topology.nodes.size() == 3);
  // defaults fill in
  CHECK(s.slice_shares[0] == doctest::Approx(0.70));
  CHECK(s.bounds.fh_max_us == doctest::Approx(250.0));
  CHECK(s.bounds.slice_max(Slice::Urllc) == doctest::Approx(250.0));
  CHECK(s.solver.k_paths == 4);
  CHECK(s.solver.iterations == 3);
  CHECK(s.constants.per_cpu_gops == doctest::Approx(864.0));
  CHECK(s.constants.ref.c_lphy == doctest::Approx(120.0));
  CHECK(s.content_hash != 0);
}

TEST_CASE("document violations are rejected") {
  SUBCASE("wrong schema version") {
    json d = minimal_doc();
    d["schema_version"] = 2;
    CHECK_THROWS_AS(load_scenario(d), SchemaError);
  }
  SUBCASE("missing topology") {
    json d = minimal_doc();
    d.erase("topology");
    CHECK_THROWS_AS(load_scenario(d), SchemaError);
  }
  SUBCASE("missing gnbs") {
    json d = minimal_doc();
    d["gnbs"] = json::array();
    CHECK_THROWS_AS(load_scenario(d), SchemaError);
  }
  SUBCASE("unknown rf profile") {
    json d = minimal_doc();
    d["gnbs"][0]["rf_profile"] = "mystery";
    CHECK_THROWS_AS(load_scenario(d), SchemaError);
  }
  SUBCASE("gnb anchored off a cell site") {
    json d = minimal_doc();
    d["gnbs"][0]["cell_node"] = 1;
    CHECK_THROWS_AS(load_scenario(d), SchemaError);
  }
  SUBCASE("two gnbs on one cell site") {
    json d = minimal_doc();
    d["gnbs"].push_back(
        json{{"id", "g1"}, {"cell_node", 2}, {"rf_profile", "low20"}, {"peak_mbps", 100}});
    CHECK_THROWS_AS(load_scenario(d), SchemaError);
  }
  SUBCASE("unserved cell site") {
    json d = minimal_doc();
    d["topology"]["nodes"].push_back(json{{"id", 3}, {"kind", "cell_site_pp"}, {"cpus", 1}});
    d["topology"]["edges"].push_back(
        json{{"a", 1}, {"b", 3}, {"capacity_gbps", 25}, {"length_km", 1}});
    CHECK_THROWS_AS(load_scenario(d), SchemaError);
  }
  SUBCASE("slice shares must sum to one") {
    json d = minimal_doc();
    d["slice_shares"] = {{"embb", 0.70}, {"urllc", 0.25}, {"mmtc", 0.04}};
    CHECK_THROWS_AS(load_scenario(d), SchemaError);
  }
  SUBCASE("pattern length") {
    json d = minimal_doc();
    d["hourly_pattern"] = std::vector<double>(23, 0.5);
    CHECK_THROWS_AS(load_scenario(d), SchemaError);
  }
  SUBCASE("pattern range") {
    json d = minimal_doc();
    d["hourly_pattern"][7] = 1.5;
    CHECK_THROWS_AS(load_scenario(d), SchemaError);
  }
  SUBCASE("negative peak") {
    json d = minimal_doc();
    d["gnbs"][0]["peak_mbps"] = -10;
    CHECK_THROWS_AS(load_scenario(d), SchemaError);
  }
  SUBCASE("solver parameters out of range") {
    json d = minimal_doc();
    d["solver"] = {{"k_paths", 0}};
    CHECK_THROWS_AS(load_scenario(d), SchemaError);
  }
}

TEST_CASE("modulation accepts either bit count or QAM order") {
  json d = minimal_doc();
  d["rf_profiles"]["low20"].erase("mod_bits");
  d["rf_profiles"]["low20"]["mod_qam"] = 256;
  Scenario s = load_scenario(d);
  CHECK(s.rf_profiles.at("low20").mod_bits == 8);

  d["rf_profiles"]["low20"]["mod_qam"] = 100;  // not a power of two
  CHECK_THROWS_AS(load_scenario(d), SchemaError);
}

TEST_CASE("subcarriers default to twelve per resource block") {
  json d = minimal_doc();
  d["rf_profiles"]["low20"].erase("subcarriers");
  Scenario s = load_scenario(d);
  CHECK(s.rf_profiles.at("low20").subcarriers == s.rf_profiles.at("low20").prb * 12);
}

TEST_CASE("demand combines peak, pattern and slice share linearly") {
  Scenario s = fx::micro_tree();  // peak 200, diurnal pattern
  const double p18 = s.hourly_pattern[18];
  CHECK(p18 == doctest::Approx(1.0));
  CHECK(demand_at_hour(s, 0, Slice::Embb, 18) == doctest::Approx(200 * 0.70));
  CHECK(demand_at_hour(s, 0, Slice::Urllc, 18) == doctest::Approx(200 * 0.25));
  CHECK(demand_at_hour(s, 0, Slice::Mmtc, 18) == doctest::Approx(200 * 0.05));
  // linear in the pattern level
  const double h0 = s.hourly_pattern[0];
  CHECK(demand_at_hour(s, 0, Slice::Embb, 0) ==
        doctest::Approx(demand_at_hour(s, 0, Slice::Embb, 18) * h0 / p18));
  CHECK_THROWS(demand_at_hour(s, 0, Slice::Embb, 24));
}

TEST_CASE("hour grouping joins identical pattern levels") {
  Scenario s = fx::micro_tree();
  auto groups = dedup_hours(s);
  // every hour appears exactly once across groups
  std::set<int> seen;
  size_t total = 0;
  for (const auto& g : groups) {
    REQUIRE(!g.empty());
    total += g.size();
    for (int h : g) {
      CHECK(seen.insert(h).second);
      CHECK(s.hourly_pattern[h] == doctest::Approx(s.hourly_pattern[g.front()]));
    }
    // representative is the earliest hour of its level
    CHECK(g.front() == *std::min_element(g.begin(), g.end()));
  }
  CHECK(total == 24);
  CHECK(groups.size() < 24);  // the diurnal curve repeats levels
}

TEST_CASE("serialization round-trips and hashing is stable") {
  Scenario a = fx::duo_mixed_rf();
  Scenario b = fx::duo_mixed_rf();
  CHECK(a.content_hash == b.content_hash);

  Scenario c = load_scenario(to_json(a));
  CHECK(c.content_hash == a.content_hash);
  CHECK(c.n_gnbs() == a.n_gnbs());
  CHECK(c.topology.edges.size() == a.topology.edges.size());
  CHECK(c.solver.k_paths == a.solver.k_paths);
  CHECK(to_json(c).dump() == to_json(a).dump());

  // different content, different hash
  Scenario d = fx::micro_tree();
  CHECK(d.content_hash != a.content_hash);
}

TEST_CASE("generated scenarios load and validate") {
  for (const char* topo : {"hier", "mesh"}) {
    GenParams p;
    p.topology = topo;
    p.gnbs = 4;
    p.seed = 7;
    Scenario s = load_scenario(gen_scenario(p));
    CHECK(s.n_gnbs() == 4);
    CHECK(s.hourly_pattern.size() == 24);
    // deterministic for a fixed seed
    CHECK(gen_scenario(p).dump() == gen_scenario(p).dump());
  }
  GenParams bad;
  bad.topology = "torus";
  CHECK_THROWS_AS(gen_scenario(bad), SchemaError);
}

TEST_CASE("fixture files load from disk") {
  Scenario s = fx::hier16();
  CHECK(s.n_gnbs() == 6);
  CHECK(s.topology.nodes.size() == 16);
  CHECK(s.solver.k_paths == 2);
  // deployment-scaled reference table comes through the constants block
  CHECK(s.constants.ref.c_lphy == doctest::Approx(12.0));
  CHECK_THROWS_AS(load_scenario_file(fx::fixture_dir() + "/nope.json"), SchemaError);
}
