#pragma once

#include <vector>

#include "xhaul/topology.hpp"
#include "xhaul/vc_catalog.hpp"

namespace xhaul {

enum class Slice { Embb, Urllc, Mmtc };
inline constexpr std::array<Slice, 3> kAllSlices = {Slice::Embb, Slice::Urllc, Slice::Mmtc};
const char* to_string(Slice s);
Slice slice_from_string(const std::string& s);

// Radio configuration of one RU.
struct RfConfig {
  double bw_mhz = 20.0;
  int mod_bits = 6;          // bits per symbol (64-QAM = 6, 256-QAM = 8)
  int layers = 4;            // spatial layers
  int antennas = 4;
  double coding_rate = 0.75;
  int prb = 100;
  int mu = 0;                // numerology; slot = 1ms / 2^mu
  int subcarriers = 1200;
};

// Reference operating point for the per-function GOPS scaling laws.  c_* are
// GOPS at the reference configuration and full reference load; values are
// deployment inputs, and every derived figure in the tests is relative to
// whatever table the scenario declares.
struct ReferenceTable {
  double c_rf = 40.0;
  double c_lphy = 120.0;
  double c_hphy = 60.0;
  double c_mac = 20.0;
  double c_rlc = 10.0;
  double c_pdcp = 20.0;
  double c_rrc = 5.0;
  double bw_ref_mhz = 20.0;
  double a_ref = 2.0;   // antennas
  double l_ref = 1.0;   // load fraction
  double m_ref = 6.0;   // modulation bits
  double nl_ref = 2.0;  // spatial layers (transport-rate scaling)
};

struct ScenarioConstants {
  double per_cpu_gops = 864.0;
  double w_full = 343.0;       // W per CPU at full load
  double w_idle = 52.4;        // W per CPU idle
  double w_chassis = 940.0;    // switch chassis W
  double w_linecard = 1170.0;  // per active linecard W
  double w_port = 3.5;         // per active port W
  double sw_infra_w = 0.0;     // extra W per active switch
  double frame_bytes = 1542.0;
  double prop_us_per_km = 5.0;
  double sf_us = 5.0;           // store-and-forward cost per hop
  double cr_fraction = 0.10;    // control rate as a share of the payload rate
  double overhead_c = 0.10;     // low-split encapsulation overhead
  double n_mant = 14.0;         // IQ mantissa bits
  double n_ex = 4.0;            // IQ exponent bits
  double period_h = 1.0;        // accounting period for energy
  ReferenceTable ref;
};

// GOPS demanded by one chain function.  `load_fraction` is the slice demand
// relative to the RU peak.  Only LPHY/HPHY/MAC scale with load; RF scales
// with bandwidth and antennas, the upper functions with antennas alone.
double function_gops(RanFunction f, const RfConfig& rf, double load_fraction,
                     const ReferenceTable& ref);

// Sum over the functions hosted by `u` under configuration `id`.
double unit_gops(VcId id, Unit u, const RfConfig& rf, double load_fraction,
                 const ReferenceTable& ref);

// Transport rate of one slice flow on the given segment split, in Mbps.
// FS2 carries the payload rate, FS6 adds the control share, and the low-PHY
// split carries an IQ stream proportional to the slice's PRB share
// (demand_mbps / peak_mbps).
double segment_bandwidth_mbps(FunctionalSplit split, const RfConfig& rf, double demand_mbps,
                              double peak_mbps, const ScenarioConstants& c);

// One maximum-size frame on the wire, in microseconds.
double transmission_delay_us(double frame_bytes, double link_gbps);

// Propagation plus per-hop store-and-forward over the path.
double static_latency_us(const Path& p, const Topology& t, const ScenarioConstants& c);

// One routed transport flow.  (gnb, slice, seg) identifies it; priority class
// follows the segment (FH is the high-priority class, MH the medium one).
struct RoutedFlow {
  int gnb = -1;
  Slice slice = Slice::Embb;
  Segment seg = Segment::FH;
  Path path;
  bool same_flow(const RoutedFlow& o) const {
    return gnb == o.gnb && slice == o.slice && seg == o.seg;
  }
};

// Same-class interference on `e`: one frame delay per other same-class flow
// crossing `e` that arrived over a different previous edge.  A flow's first
// hop counts as a distinct ingress port.
double self_queuing_us(const RoutedFlow& f, const Edge& e, const std::vector<RoutedFlow>& same_class,
                       const ScenarioConstants& c);

// Cross-class interference on `e`.  A high-priority (FH) flow waits at most
// one lower-priority frame: d_tr when any MH flow shares the edge.  An MH
// flow waits one frame per co-resident FH flow plus one per other MH flow.
double queuing_us(const RoutedFlow& f, const Edge& e, const std::vector<RoutedFlow>& fh_flows,
                  const std::vector<RoutedFlow>& mh_flows, const ScenarioConstants& c);

// Dynamic energy of a processing node over the accounting period; the
// idle floor is charged separately (pp_infra_wh) once the node is active.
double pp_energy_wh(int n_cpus, double used_gops, double capacity_gops,
                    const ScenarioConstants& c);
double pp_infra_wh(int n_cpus, const ScenarioConstants& c);

// Energy of an active switch over the accounting period.
double switch_energy_wh(int linecards, int ports, const ScenarioConstants& c);

struct LatencyBreakdown {
  double static_us = 0.0;
  double queuing_us = 0.0;
  double self_queuing_us = 0.0;
  double total() const { return static_us + queuing_us + self_queuing_us; }
};

}  // namespace xhaul
