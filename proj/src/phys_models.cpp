#include "xhaul/phys_models.hpp"

#include <cmath>
#include <stdexcept>

namespace xhaul {

const char* to_string(Slice s) {
  switch (s) {
    case Slice::Embb: return "embb";
    case Slice::Urllc: return "urllc";
    case Slice::Mmtc: return "mmtc";
  }
  return "?";
}

Slice slice_from_string(const std::string& s) {
  if (s == "embb") return Slice::Embb;
  if (s == "urllc") return Slice::Urllc;
  if (s == "mmtc") return Slice::Mmtc;
  throw SchemaError("unknown slice '" + s + "'");
}

double function_gops(RanFunction f, const RfConfig& rf, double load_fraction,
                     const ReferenceTable& ref) {
  const double bw = rf.bw_mhz / ref.bw_ref_mhz;
  const double a = rf.antennas / ref.a_ref;
  const double l = load_fraction / ref.l_ref;
  const double m = rf.mod_bits / ref.m_ref;
  switch (f) {
    case RanFunction::RF: return ref.c_rf * bw * a;
    case RanFunction::LPHY: return ref.c_lphy * bw * a * l;
    case RanFunction::HPHY: return ref.c_hphy * bw * a * a * l;
    case RanFunction::MAC: return ref.c_mac * bw * a * m * l;
    case RanFunction::RLC: return ref.c_rlc * a;
    case RanFunction::PDCP: return ref.c_pdcp * a;
    case RanFunction::RRC: return ref.c_rrc * a;
  }
  throw std::logic_error("bad function");
}

double unit_gops(VcId id, Unit u, const RfConfig& rf, double load_fraction,
                 const ReferenceTable& ref) {
  double total = 0;
  for (RanFunction f : functions_of(id, u)) total += function_gops(f, rf, load_fraction, ref);
  return total;
}

double segment_bandwidth_mbps(FunctionalSplit split, const RfConfig& rf, double demand_mbps,
                              double peak_mbps, const ScenarioConstants& c) {
  const ReferenceTable& ref = c.ref;
  const double scale =
      (rf.bw_mhz / ref.bw_ref_mhz) * (rf.layers / ref.nl_ref) * (rf.mod_bits / ref.m_ref);
  switch (split) {
    case FunctionalSplit::FS2:
      return demand_mbps * scale;
    case FunctionalSplit::FS6:
      return demand_mbps * (1.0 + c.cr_fraction) * scale;
    case FunctionalSplit::FS72x: {
      // IQ stream: bits per slot across the slice's PRB share, with the
      // encapsulation overhead.  The base expression yields Gbps.
      const double share = peak_mbps > 0 ? demand_mbps / peak_mbps : 0.0;
      const double slot_s = 1e-3 / std::pow(2.0, rf.mu);
      const double gbps =
          2e-9 * (1.0 + c.overhead_c) * rf.layers * rf.prb * share * (12.0 * c.n_mant + c.n_ex) /
          slot_s;
      return gbps * 1000.0;
    }
  }
  throw std::logic_error("bad split");
}

double transmission_delay_us(double frame_bytes, double link_gbps) {
  // bytes*8 bits over gbps*1000 bits/us.
  return frame_bytes * 8.0 / (link_gbps * 1000.0);
}

double static_latency_us(const Path& p, const Topology& t, const ScenarioConstants& c) {
  double us = 0;
  for (EdgeId e : p.edges) us += t.edge(e).length_km * c.prop_us_per_km + c.sf_us;
  return us;
}

namespace {

// Both flows cross `e` and their ingress differs.  First hops never share an
// ingress port.
bool different_ingress(const RoutedFlow& f, const RoutedFlow& g, EdgeId e) {
  EdgeId pf = f.path.prev_edge(e);
  EdgeId pg = g.path.prev_edge(e);
  return pf == -1 || pg == -1 || pf != pg;
}

}  // namespace

double self_queuing_us(const RoutedFlow& f, const Edge& e, const std::vector<RoutedFlow>& same_class,
                       const ScenarioConstants& c) {
  if (!f.path.uses_edge(e.id)) return 0;
  int n = 0;
  for (const RoutedFlow& g : same_class) {
    if (g.same_flow(f) || !g.path.uses_edge(e.id)) continue;
    if (different_ingress(f, g, e.id)) ++n;
  }
  return n * transmission_delay_us(c.frame_bytes, e.capacity_gbps);
}

double queuing_us(const RoutedFlow& f, const Edge& e, const std::vector<RoutedFlow>& fh_flows,
                  const std::vector<RoutedFlow>& mh_flows, const ScenarioConstants& c) {
  if (!f.path.uses_edge(e.id)) return 0;
  const double dtr = transmission_delay_us(c.frame_bytes, e.capacity_gbps);
  if (f.seg == Segment::FH) {
    for (const RoutedFlow& g : mh_flows)
      if (g.path.uses_edge(e.id)) return dtr;  // one lower-priority frame at most
    return 0;
  }
  int n = 0;
  for (const RoutedFlow& g : fh_flows)
    if (g.path.uses_edge(e.id)) ++n;
  for (const RoutedFlow& g : mh_flows)
    if (!g.same_flow(f) && g.path.uses_edge(e.id)) ++n;
  return n * dtr;
}

double pp_energy_wh(int n_cpus, double used_gops, double capacity_gops,
                    const ScenarioConstants& c) {
  if (capacity_gops <= 0) return 0;
  return n_cpus * (used_gops / capacity_gops) * (c.w_full - c.w_idle) * c.period_h;
}

double pp_infra_wh(int n_cpus, const ScenarioConstants& c) {
  return n_cpus * c.w_idle * c.period_h;
}

double switch_energy_wh(int linecards, int ports, const ScenarioConstants& c) {
  return (c.w_chassis + linecards * c.w_linecard + ports * c.w_port + c.sw_infra_w) * c.period_h;
}

}  // namespace xhaul
