#pragma once

#include <optional>
#include <string>
#include <vector>

#include "xhaul/candidates.hpp"

namespace xhaul {

// One slice's complete decision: configuration, placements and routed paths.
// Colocated segments carry the empty path.
struct Assignment {
  int gnb = -1;
  Slice slice = Slice::Embb;
  VcId vc = VcId::VC1;
  NodeId cu = -1, du = -1, ru = -1;
  Path mh_path, fh_path;
};

// A (possibly partial) set of slice assignments, at most one per (gnb, slice).
struct Solution {
  std::vector<Assignment> assigns;
  const Assignment* find(int gnb, Slice sl) const;
  void sort_canonical();  // ascending (gnb, slice)
};

Assignment make_assignment(const Instance& inst, int gnb, Slice sl, const CandidateTuple& t);

struct Violation {
  std::string constraint;  // family id, e.g. "comp_2", "lat_19"
  std::string entity;      // offending slice/node/edge
  double slack = 0.0;      // amount by which the bound is exceeded
};

struct FeasibilityReport {
  bool ok = true;
  std::vector<Violation> violations;
};

// Loads and activity derived from a solution.
struct ResourceState {
  std::vector<double> gops_used;            // per node
  std::vector<double> fh_mbps, mh_mbps;     // per edge
  std::vector<int> fh_count, mh_count;      // flows present per edge
  std::vector<char> active_pp, active_sw;   // per node
};

ResourceState derive_state(const Instance& inst, const Solution& sol);

// All routed transport flows of the solution, split by priority class.
struct FlowSet {
  std::vector<RoutedFlow> fh, mh;
};
FlowSet flows_of(const Solution& sol);

struct SliceEval {
  LatencyBreakdown mh, fh;
  double e2e_us = 0.0;
};

struct EvalReport {
  double energy_wh_total = 0.0;
  std::vector<double> node_energy_wh;  // per node; inactive nodes cost 0
  std::vector<int> sw_ports;           // active ports per node (switches only)
  std::vector<std::optional<SliceEval>> slices;  // indexed by Instance::flat
  ResourceState state;
  double sum_fh_latency_us = 0.0;
  double sum_mh_latency_us = 0.0;
};

// Verifies every constraint family on the assignments present: structure
// (configuration shape, placement domains, path validity), compute and link
// capacities, and all latency bounds including queuing terms.  With
// `require_complete`, every (gnb, slice) must be assigned.  Partial solutions
// can only get *more* constrained as slices are added (loads and interference
// are monotone), so a failed partial check soundly prunes a search branch.
FeasibilityReport check(const Instance& inst, const Solution& sol, bool require_complete = true);

// Energy and latency accounting for a solution (assumed structurally valid).
// Energy: active pools pay dynamic + idle-floor power, active switches pay
// chassis + one linecard + one port per incident flow-carrying edge.
EvalReport evaluate(const Instance& inst, const Solution& sol);

// Order-independent digest of a solution plus derived state; used to prove
// rollback exactness and determinism.
uint64_t state_hash(const Instance& inst, const Solution& sol);

}  // namespace xhaul
