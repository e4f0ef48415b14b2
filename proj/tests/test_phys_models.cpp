#include <vector>

#include "doctest.h"
#include "xhaul/phys_models.hpp"

using namespace xhaul;
using nlohmann::json;

namespace {

// The reference operating point of the default table.
RfConfig ref_rf() {
  RfConfig rf;
  rf.bw_mhz = 20;
  rf.mod_bits = 6;
  rf.layers = 2;
  rf.antennas = 2;
  rf.prb = 100;
  rf.mu = 0;
  return rf;
}

RfConfig low20() {
  RfConfig rf = ref_rf();
  rf.layers = 4;
  rf.antennas = 4;
  return rf;
}

RfConfig wide100() {
  RfConfig rf;
  rf.bw_mhz = 100;
  rf.mod_bits = 8;
  rf.layers = 8;
  rf.antennas = 8;
  rf.prb = 273;
  rf.mu = 1;
  return rf;
}

// Y-junction: core0 - pool1 - sw2 - {cell3, cell4}; trunk edge 1 at 100 Gbps.
Topology y_topo() {
  json d{{"nodes",
          {json{{"id", 0}, {"kind", "core"}, {"cpus", 0}},
           json{{"id", 1}, {"kind", "regional_pp"}, {"cpus", 2}},
           json{{"id", 2}, {"kind", "switch"}, {"cpus", 0}},
           json{{"id", 3}, {"kind", "cell_site_pp"}, {"cpus", 2}},
           json{{"id", 4}, {"kind", "cell_site_pp"}, {"cpus", 2}}}},
         {"edges",
          {json{{"a", 0}, {"b", 1}, {"capacity_gbps", 100}, {"length_km", 1}},
           json{{"a", 1}, {"b", 2}, {"capacity_gbps", 100}, {"length_km", 2}},
           json{{"a", 2}, {"b", 3}, {"capacity_gbps", 25}, {"length_km", 1}},
           json{{"a", 2}, {"b", 4}, {"capacity_gbps", 25}, {"length_km", 1}}}}};
  return load_topology(d, 864.0);
}

Path make_path(const Topology& t, std::vector<NodeId> nodes, std::vector<EdgeId> edges) {
  Path p;
  p.nodes = std::move(nodes);
  p.edges = std::move(edges);
  for (EdgeId e : p.edges) p.length_km += t.edge(e).length_km;
  return p;
}

RoutedFlow flow(int gnb, Slice sl, Segment seg, Path p) {
  RoutedFlow f;
  f.gnb = gnb;
  f.slice = sl;
  f.seg = seg;
  f.path = std::move(p);
  return f;
}

}  // namespace

TEST_CASE("per-function compute follows the scaling laws") {
  ReferenceTable ref;  // defaults
  RfConfig r = ref_rf();

  // At the reference point each function costs exactly its table entry.
  CHECK(function_gops(RanFunction::RF, r, 1.0, ref) == doctest::Approx(40.0));
  CHECK(function_gops(RanFunction::LPHY, r, 1.0, ref) == doctest::Approx(120.0));
  CHECK(function_gops(RanFunction::HPHY, r, 1.0, ref) == doctest::Approx(60.0));
  CHECK(function_gops(RanFunction::MAC, r, 1.0, ref) == doctest::Approx(20.0));
  CHECK(function_gops(RanFunction::RLC, r, 1.0, ref) == doctest::Approx(10.0));
  CHECK(function_gops(RanFunction::PDCP, r, 1.0, ref) == doctest::Approx(20.0));
  CHECK(function_gops(RanFunction::RRC, r, 1.0, ref) == doctest::Approx(5.0));

  // Doubling the bandwidth doubles the radio-side terms.
  RfConfig bw40 = r;
  bw40.bw_mhz = 40;
  CHECK(function_gops(RanFunction::RF, bw40, 1.0, ref) == doctest::Approx(80.0));
  // Doubling antennas quadruples HPHY (a^2) but only doubles LPHY (a).
  RfConfig a4 = r;
  a4.antennas = 4;
  CHECK(function_gops(RanFunction::HPHY, a4, 1.0, ref) == doctest::Approx(240.0));
  CHECK(function_gops(RanFunction::LPHY, a4, 1.0, ref) == doctest::Approx(240.0));
  CHECK(function_gops(RanFunction::RLC, a4, 1.0, ref) == doctest::Approx(20.0));
  // Modulation enters only the MAC.
  RfConfig m8 = r;
  m8.mod_bits = 8;
  CHECK(function_gops(RanFunction::MAC, m8, 1.0, ref) == doctest::Approx(20.0 * 8 / 6));
  CHECK(function_gops(RanFunction::RF, m8, 1.0, ref) == doctest::Approx(40.0));

  // Load scales only the inner processing chain.
  CHECK(function_gops(RanFunction::LPHY, r, 0.0, ref) == doctest::Approx(0.0));
  CHECK(function_gops(RanFunction::HPHY, r, 0.5, ref) == doctest::Approx(30.0));
  CHECK(function_gops(RanFunction::MAC, r, 0.25, ref) == doctest::Approx(5.0));
  CHECK(function_gops(RanFunction::RF, r, 0.0, ref) == doctest::Approx(40.0));
  CHECK(function_gops(RanFunction::PDCP, r, 0.0, ref) == doctest::Approx(20.0));
}

TEST_CASE("unit compute sums its hosted functions and is chain-complete") {
  ReferenceTable ref;
  RfConfig r = ref_rf();
  CHECK(unit_gops(VcId::VC1, Unit::RU, r, 1.0, ref) == doctest::Approx(160.0));  // RF+LPHY
  CHECK(unit_gops(VcId::VC3, Unit::CU, r, 1.0, ref) == doctest::Approx(25.0));   // PDCP+RRC
  RfConfig a4 = low20();
  CHECK(unit_gops(VcId::VC3, Unit::CU, a4, 0.3, ref) == doctest::Approx(50.0));

  // The chain total is identical across configurations at any load point.
  for (double l : {0.0, 0.35, 1.0}) {
    const double total = unit_gops(VcId::VC1, Unit::CU, a4, l, ref) +
                         unit_gops(VcId::VC1, Unit::DU, a4, l, ref) +
                         unit_gops(VcId::VC1, Unit::RU, a4, l, ref);
    for (VcId id : kAllVcs) {
      double s = 0;
      for (Unit u : {Unit::CU, Unit::DU, Unit::RU}) s += unit_gops(id, u, a4, l, ref);
      CHECK(s == doctest::Approx(total));
    }
  }
}

TEST_CASE("transport rates per split") {
  ScenarioConstants c;  // cr_fraction 0.10, overhead 0.10, 14/4 IQ bits

  SUBCASE("payload split carries the scaled payload") {
    CHECK(segment_bandwidth_mbps(FunctionalSplit::FS2, ref_rf(), 100, 500, c) ==
          doctest::Approx(100.0));
    // low20 doubles the rate through the layer ratio.
    CHECK(segment_bandwidth_mbps(FunctionalSplit::FS2, low20(), 100, 500, c) ==
          doctest::Approx(200.0));
    CHECK(segment_bandwidth_mbps(FunctionalSplit::FS2, low20(), 0, 500, c) ==
          doctest::Approx(0.0));
  }
  SUBCASE("control-plane split adds the control share") {
    const double fs2 = segment_bandwidth_mbps(FunctionalSplit::FS2, low20(), 100, 500, c);
    CHECK(segment_bandwidth_mbps(FunctionalSplit::FS6, low20(), 100, 500, c) ==
          doctest::Approx(fs2 * 1.10));
  }
  SUBCASE("IQ-stream split depends on the PRB share, not the payload rate") {
    CHECK(segment_bandwidth_mbps(FunctionalSplit::FS72x, low20(), 500, 500, c) ==
          doctest::Approx(151.36));
    CHECK(segment_bandwidth_mbps(FunctionalSplit::FS72x, low20(), 250, 500, c) ==
          doctest::Approx(75.68));
    CHECK(segment_bandwidth_mbps(FunctionalSplit::FS72x, low20(), 0, 500, c) ==
          doctest::Approx(0.0));
    CHECK(segment_bandwidth_mbps(FunctionalSplit::FS72x, wide100(), 700, 700, c) ==
          doctest::Approx(1652.8512));
    // same share, different absolute demand: identical IQ rate
    CHECK(segment_bandwidth_mbps(FunctionalSplit::FS72x, low20(), 50, 100, c) ==
          doctest::Approx(segment_bandwidth_mbps(FunctionalSplit::FS72x, low20(), 250, 500, c)));
  }
  SUBCASE("rates are monotone in demand and the control split dominates") {
    for (double d : {10.0, 200.0, 499.0}) {
      CHECK(segment_bandwidth_mbps(FunctionalSplit::FS6, low20(), d, 500, c) >=
            segment_bandwidth_mbps(FunctionalSplit::FS2, low20(), d, 500, c));
    }
  }
}

TEST_CASE("frame transmission and static path latency") {
  ScenarioConstants c;
  CHECK(transmission_delay_us(1542, 100) == doctest::Approx(0.12336).epsilon(1e-12));
  CHECK(transmission_delay_us(1542, 25) == doctest::Approx(0.49344).epsilon(1e-12));

  Topology t = y_topo();
  Path none = make_path(t, {1}, {});
  CHECK(static_latency_us(none, t, c) == doctest::Approx(0.0));
  Path one = make_path(t, {1, 2}, {1});  // 2 km: 2*5 + 5
  CHECK(static_latency_us(one, t, c) == doctest::Approx(15.0));
  Path two = make_path(t, {1, 2, 3}, {1, 2});  // + 1 km hop: 10
  CHECK(static_latency_us(two, t, c) == doctest::Approx(25.0));
}

TEST_CASE("same-class interference counts distinct-ingress flows") {
  ScenarioConstants c;
  Topology t = y_topo();
  const Edge& trunk = t.edge(1);  // 100 Gbps: one frame = 0.12336 us
  const double dtr = transmission_delay_us(c.frame_bytes, trunk.capacity_gbps);

  Path from3 = make_path(t, {3, 2, 1}, {2, 1});
  Path from4 = make_path(t, {4, 2, 1}, {3, 1});
  Path at2 = make_path(t, {2, 1}, {1});

  SUBCASE("a lone flow never queues behind itself") {
    RoutedFlow a = flow(0, Slice::Embb, Segment::MH, from3);
    CHECK(self_queuing_us(a, trunk, {a}, c) == doctest::Approx(0.0));
  }
  SUBCASE("two flows merging from different branches each wait one frame") {
    RoutedFlow a = flow(0, Slice::Embb, Segment::MH, from3);
    RoutedFlow b = flow(1, Slice::Embb, Segment::MH, from4);
    std::vector<RoutedFlow> cls{a, b};
    CHECK(self_queuing_us(a, trunk, cls, c) == doctest::Approx(dtr));
    CHECK(self_queuing_us(b, trunk, cls, c) == doctest::Approx(dtr));
  }
  SUBCASE("a shared ingress edge does not interfere") {
    RoutedFlow a = flow(0, Slice::Embb, Segment::MH, from3);
    RoutedFlow b = flow(1, Slice::Urllc, Segment::MH, from3);
    std::vector<RoutedFlow> cls{a, b};
    CHECK(self_queuing_us(a, trunk, cls, c) == doctest::Approx(0.0));
  }
  SUBCASE("first hops always count as distinct ingress ports") {
    RoutedFlow a = flow(0, Slice::Embb, Segment::MH, at2);
    RoutedFlow b = flow(1, Slice::Embb, Segment::MH, at2);
    std::vector<RoutedFlow> cls{a, b};
    CHECK(self_queuing_us(a, trunk, cls, c) == doctest::Approx(dtr));
  }
  SUBCASE("flows not on the edge contribute nothing") {
    RoutedFlow a = flow(0, Slice::Embb, Segment::MH, from3);
    RoutedFlow off = flow(1, Slice::Embb, Segment::MH, make_path(t, {4, 2}, {3}));
    std::vector<RoutedFlow> cls{a, off};
    CHECK(self_queuing_us(a, trunk, cls, c) == doctest::Approx(0.0));
    CHECK(self_queuing_us(off, trunk, cls, c) == doctest::Approx(0.0));
  }
}

TEST_CASE("cross-class interference is asymmetric between priorities") {
  ScenarioConstants c;
  Topology t = y_topo();
  const Edge& trunk = t.edge(1);
  const double dtr = transmission_delay_us(c.frame_bytes, trunk.capacity_gbps);

  Path from3 = make_path(t, {3, 2, 1}, {2, 1});
  Path from4 = make_path(t, {4, 2, 1}, {3, 1});

  RoutedFlow fh1 = flow(0, Slice::Embb, Segment::FH, from3);
  RoutedFlow fh2 = flow(1, Slice::Urllc, Segment::FH, from4);
  RoutedFlow mh1 = flow(0, Slice::Mmtc, Segment::MH, from3);
  RoutedFlow mh2 = flow(1, Slice::Embb, Segment::MH, from4);

  SUBCASE("a high-priority flow waits at most one lower-priority frame") {
    CHECK(queuing_us(fh1, trunk, {fh1}, {}, c) == doctest::Approx(0.0));
    CHECK(queuing_us(fh1, trunk, {fh1}, {mh1}, c) == doctest::Approx(dtr));
    CHECK(queuing_us(fh1, trunk, {fh1}, {mh1, mh2}, c) == doctest::Approx(dtr));
  }
  SUBCASE("a lower-priority flow waits for every sharer") {
    // two high-priority flows + one other medium flow = three frames
    CHECK(queuing_us(mh1, trunk, {fh1, fh2}, {mh1, mh2}, c) == doctest::Approx(3 * dtr));
    CHECK(queuing_us(mh1, trunk, {}, {mh1}, c) == doctest::Approx(0.0));
    CHECK(queuing_us(mh1, trunk, {fh1}, {mh1}, c) == doctest::Approx(dtr));
  }
  SUBCASE("edges off the flow's path contribute nothing") {
    const Edge& cell4 = t.edge(3);
    CHECK(queuing_us(fh1, cell4, {fh1, fh2}, {mh1, mh2}, c) == doctest::Approx(0.0));
  }
}

TEST_CASE("energy building blocks") {
  ScenarioConstants c;  // 343 W full, 52.4 W idle, 1 h period

  SUBCASE("dynamic pool power is linear in utilization") {
    CHECK(pp_energy_wh(2, 1728.0, 1728.0, c) == doctest::Approx(581.2));
    CHECK(pp_energy_wh(5, 2160.0, 4320.0, c) == doctest::Approx(726.5));
    CHECK(pp_energy_wh(2, 0.0, 1728.0, c) == doctest::Approx(0.0));
    CHECK(pp_energy_wh(0, 0.0, 0.0, c) == doctest::Approx(0.0));
  }
  SUBCASE("idle floor is charged per CPU") {
    CHECK(pp_infra_wh(2, c) == doctest::Approx(104.8));
    CHECK(pp_infra_wh(0, c) == doctest::Approx(0.0));
  }
  SUBCASE("switch power is chassis + linecards + ports") {
    CHECK(switch_energy_wh(1, 4, c) == doctest::Approx(2124.0));
    CHECK(switch_energy_wh(0, 0, c) == doctest::Approx(940.0));
    CHECK(switch_energy_wh(1, 0, c) == doctest::Approx(2110.0));
  }
  SUBCASE("the accounting period scales all terms") {
    ScenarioConstants c2 = c;
    c2.period_h = 2.0;
    CHECK(pp_energy_wh(2, 1728.0, 1728.0, c2) == doctest::Approx(2 * 581.2));
    CHECK(pp_infra_wh(2, c2) == doctest::Approx(2 * 104.8));
    CHECK(switch_energy_wh(1, 4, c2) == doctest::Approx(2 * 2124.0));
  }
}

TEST_CASE("latency breakdown totals its parts") {
  LatencyBreakdown b;
  b.static_us = 10.0;
  b.queuing_us = 1.5;
  b.self_queuing_us = 0.5;
  CHECK(b.total() == doctest::Approx(12.0));
}
