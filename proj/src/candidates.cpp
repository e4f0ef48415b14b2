#include "xhaul/candidates.hpp"

namespace xhaul {

Instance::Instance(const Scenario& s, int hour)
    : scen_(&s), hour_(hour), catalog_(s.topology, s.solver.k_paths) {
  demand_.resize(n_flows());
  for (int g = 0; g < n_gnbs(); ++g)
    for (Slice sl : kAllSlices) demand_[flat(g, sl)] = demand_at_hour(s, g, sl, hour);

  for (NodeId v : s.topology.processing_nodes()) {
    const Node& n = s.topology.node(v);
    if (n.kind == NodeKind::CellSitePP) continue;  // cell sites host only their own RU/DU
    du_domain_dual_.push_back(v);
    if (n.core_adjacent) cu_domain_.push_back(v);
  }

  tuples_.resize(n_flows());
  for (int g = 0; g < n_gnbs(); ++g) {
    NodeId ru = ru_of(g);
    for (Slice sl : kAllSlices) {
      auto& out = tuples_[flat(g, sl)];
      for (const VirtualConfig& cfg : vc_catalog()) {
        switch (cfg.colocation) {
          case VcClass::DualSplit:
            for (NodeId du : du_domain_dual_)
              for (NodeId cu : cu_domain_) {
                if (cu == du) continue;
                int nm = static_cast<int>(catalog_.paths(cu, du).size());
                int nf = static_cast<int>(catalog_.paths(du, ru).size());
                for (int m = 0; m < nm; ++m)
                  for (int f = 0; f < nf; ++f) out.push_back({cfg.id, cu, du, m, f});
              }
            break;
          case VcClass::DuWithRu:
            for (NodeId cu : cu_domain_) {
              int nm = static_cast<int>(catalog_.paths(cu, ru).size());
              for (int m = 0; m < nm; ++m) out.push_back({cfg.id, cu, ru, m, 0});
            }
            break;
          case VcClass::DuWithCu:
            for (NodeId cu : cu_domain_) {
              int nf = static_cast<int>(catalog_.paths(cu, ru).size());
              for (int f = 0; f < nf; ++f) out.push_back({cfg.id, cu, cu, 0, f});
            }
            break;
        }
      }
    }
  }
}

double Instance::load_fraction(int gnb, Slice sl) const {
  double peak = scen_->gnbs[gnb].peak_mbps;
  return peak > 0 ? demand_mbps(gnb, sl) / peak : 0.0;
}

double Instance::unit_load_gops(int gnb, Slice sl, VcId vc, Unit u) const {
  return unit_gops(vc, u, scen_->rf_of(gnb), load_fraction(gnb, sl), scen_->constants.ref);
}

double Instance::rate_mbps(int gnb, Slice sl, VcId vc, Segment seg) const {
  const VirtualConfig& cfg = xhaul::vc(vc);
  FunctionalSplit split = seg == Segment::MH ? cfg.high_split : cfg.low_split;
  return segment_bandwidth_mbps(split, scen_->rf_of(gnb), demand_mbps(gnb, sl),
                                scen_->gnbs[gnb].peak_mbps, scen_->constants);
}

}  // namespace xhaul
