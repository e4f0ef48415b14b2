#pragma once

#include <array>
#include <vector>

#include "xhaul/scenario.hpp"

namespace xhaul {

// One point of the per-slice decision space: a configuration, the CU/DU
// placement and one candidate path index per segment.  The RU is implied
// (always the gNB's cell site); colocated segments use the empty self-path
// at index 0.
struct CandidateTuple {
  VcId vc = VcId::VC1;
  NodeId cu = -1;
  NodeId du = -1;
  int mh_idx = 0;
  int fh_idx = 0;
  bool operator==(const CandidateTuple& o) const {
    return vc == o.vc && cu == o.cu && du == o.du && mh_idx == o.mh_idx && fh_idx == o.fh_idx;
  }
  bool operator<(const CandidateTuple& o) const {
    auto key = [](const CandidateTuple& t) {
      return std::tuple(static_cast<int>(t.vc), t.du, t.cu, t.mh_idx, t.fh_idx);
    };
    return key(*this) < key(o);
  }
};

// A scenario frozen at one hour: per-slice demands, the shared candidate path
// sets and the admissible decision tuples every solver enumerates or encodes.
// Tuple order is canonical: catalog order, then DU id, CU id, path indices.
class Instance {
 public:
  Instance(const Scenario& s, int hour);

  const Scenario& scen() const { return *scen_; }
  const Topology& topo() const { return scen_->topology; }
  const PathCatalog& catalog() const { return catalog_; }
  int hour() const { return hour_; }

  int n_gnbs() const { return scen_->n_gnbs(); }
  int n_flows() const { return n_gnbs() * 3; }  // (gnb, slice) pairs
  int flat(int gnb, Slice sl) const { return gnb * 3 + static_cast<int>(sl); }

  NodeId ru_of(int gnb) const { return scen_->gnbs[gnb].cell_node; }
  double demand_mbps(int gnb, Slice sl) const { return demand_[flat(gnb, sl)]; }
  double load_fraction(int gnb, Slice sl) const;  // demand / RU peak

  // GOPS of one unit for (gnb, slice) under `vc` at this hour's load.
  double unit_load_gops(int gnb, Slice sl, VcId vc, Unit u) const;
  // Transport rate of the segment's split for this slice, Mbps.
  double rate_mbps(int gnb, Slice sl, VcId vc, Segment seg) const;

  const std::vector<CandidateTuple>& tuples(int gnb, Slice sl) const {
    return tuples_[flat(gnb, sl)];
  }
  const Path& mh_path([[maybe_unused]] int gnb, const CandidateTuple& t) const {
    return catalog_.paths(t.cu, t.du)[t.mh_idx];
  }
  const Path& fh_path(int gnb, const CandidateTuple& t) const {
    return catalog_.paths(t.du, ru_of(gnb))[t.fh_idx];
  }

  // Placement domains (ascending node ids).
  const std::vector<NodeId>& cu_domain() const { return cu_domain_; }
  const std::vector<NodeId>& du_domain_dual() const { return du_domain_dual_; }

 private:
  const Scenario* scen_;
  int hour_;
  PathCatalog catalog_;
  std::vector<double> demand_;
  std::vector<NodeId> cu_domain_;       // core-adjacent pools, cell sites excluded
  std::vector<NodeId> du_domain_dual_;  // pools available to a dual-split DU
  std::vector<std::vector<CandidateTuple>> tuples_;
};

}  // namespace xhaul
