#pragma once

#include <optional>
#include <set>

#include "xhaul/feasibility.hpp"

namespace xhaul {

struct HeuristicParams {
  int iterations = 3;  // improvement sweeps after construction
};

struct HeuristicStats {
  int passes = 0;           // construction passes until the pending set drained
  long long attempts = 0;   // candidate tuples tried
  int improvements = 0;     // accepted re-configurations
  double construction_energy_wh = 0.0;
};

struct HeuristicResult {
  bool ok = false;
  Solution solution;
  EvalReport eval;
  HeuristicStats stats;
  std::vector<std::pair<int, Slice>> unplaceable;  // set when !ok
};

// Greedy construction + local improvement:
//  construction: slices are configured in canonical order; per slice the
//  configurations are tried in a slice-dependent priority order, units are
//  placed first-fit over candidates ranked (distance to the cell site asc,
//  utilization desc, id asc), and segments routed on the candidate path with
//  the highest reuse of already-active edges.  Routing failures park the
//  slice in a pending set with the failed tuple forbidden and are retried
//  while progress is possible; slices whose queuing-inclusive latency ends up
//  over a bound are evicted the same way.
//  improvement: `iterations` sweeps visit pools from least utilized and try
//  to re-configure each hosted slice with its tuple forbidden, keeping the
//  move only when total energy strictly drops; otherwise the exact snapshot
//  is restored.
HeuristicResult heuristic_run(const Instance& inst, const HeuristicParams& params = {});

namespace heur {

// Configuration priority per slice: URLLC pulls the DU toward the cell site,
// mMTC prefers single-split options, eMBB keeps catalog order at low demand
// and promotes the dual splits once the DU load exceeds half the largest
// free pool capacity.
std::vector<VcId> vc_priority(const Instance& inst, const ResourceState& st, int gnb, Slice sl);

// Placement ranking over `domain` for a slice anchored at cell site `ru`.
std::vector<NodeId> order_nodes(const Instance& inst, const ResourceState& st,
                                const std::vector<NodeId>& domain, NodeId ru);

// Indices of admissible candidates (static latency within `bound_us`, every
// edge able to take `rate_mbps`) ordered by (active-edge reuse desc,
// length asc, edge sequence asc).
std::vector<int> order_paths(const Instance& inst, const ResourceState& st,
                             const std::vector<Path>& cands, double rate_mbps, double bound_us);

}  // namespace heur

}  // namespace xhaul
