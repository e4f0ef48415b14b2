#include "xhaul/feasibility.hpp"

#include <algorithm>
#include <cstring>
#include <set>
#include <sstream>

namespace xhaul {

namespace {

// Shared slack tolerance for capacity/latency bounds; solvers use the same
// rule so they agree on marginal cases.
bool within(double value, double limit) { return value <= limit + 1e-7 * std::max(1.0, std::abs(limit)); }

std::string slice_tag(int gnb, Slice sl) {
  std::ostringstream os;
  os << "gnb" << gnb << "/" << to_string(sl);
  return os.str();
}

}  // namespace

const Assignment* Solution::find(int gnb, Slice sl) const {
  for (const Assignment& a : assigns)
    if (a.gnb == gnb && a.slice == sl) return &a;
  return nullptr;
}

void Solution::sort_canonical() {
  std::sort(assigns.begin(), assigns.end(), [](const Assignment& x, const Assignment& y) {
    return std::tuple(x.gnb, static_cast<int>(x.slice)) <
           std::tuple(y.gnb, static_cast<int>(y.slice));
  });
}

Assignment make_assignment(const Instance& inst, int gnb, Slice sl, const CandidateTuple& t) {
  Assignment a;
  a.gnb = gnb;
  a.slice = sl;
  a.vc = t.vc;
  a.cu = t.cu;
  a.du = t.du;
  a.ru = inst.ru_of(gnb);
  a.mh_path = inst.mh_path(gnb, t);
  a.fh_path = inst.fh_path(gnb, t);
  return a;
}

ResourceState derive_state(const Instance& inst, const Solution& sol) {
  const Topology& t = inst.topo();
  ResourceState st;
  st.gops_used.assign(t.nodes.size(), 0.0);
  st.fh_mbps.assign(t.edges.size(), 0.0);
  st.mh_mbps.assign(t.edges.size(), 0.0);
  st.fh_count.assign(t.edges.size(), 0);
  st.mh_count.assign(t.edges.size(), 0);
  st.active_pp.assign(t.nodes.size(), 0);
  st.active_sw.assign(t.nodes.size(), 0);

  for (const Assignment& a : sol.assigns) {
    st.gops_used[a.ru] += inst.unit_load_gops(a.gnb, a.slice, a.vc, Unit::RU);
    st.gops_used[a.du] += inst.unit_load_gops(a.gnb, a.slice, a.vc, Unit::DU);
    st.gops_used[a.cu] += inst.unit_load_gops(a.gnb, a.slice, a.vc, Unit::CU);
    st.active_pp[a.ru] = st.active_pp[a.du] = st.active_pp[a.cu] = 1;
    double mh_rate = inst.rate_mbps(a.gnb, a.slice, a.vc, Segment::MH);
    double fh_rate = inst.rate_mbps(a.gnb, a.slice, a.vc, Segment::FH);
    for (EdgeId e : a.mh_path.edges) {
      st.mh_mbps[e] += mh_rate;
      st.mh_count[e] += 1;
    }
    for (EdgeId e : a.fh_path.edges) {
      st.fh_mbps[e] += fh_rate;
      st.fh_count[e] += 1;
    }
    for (const Path* p : {&a.mh_path, &a.fh_path})
      for (NodeId v : p->nodes)
        if (t.node(v).kind == NodeKind::Switch) st.active_sw[v] = 1;
  }
  return st;
}

FlowSet flows_of(const Solution& sol) {
  FlowSet fs;
  for (const Assignment& a : sol.assigns) {
    if (!a.fh_path.empty()) fs.fh.push_back({a.gnb, a.slice, Segment::FH, a.fh_path});
    if (!a.mh_path.empty()) fs.mh.push_back({a.gnb, a.slice, Segment::MH, a.mh_path});
  }
  return fs;
}

namespace {

// Validates one path as an edge sequence: contiguous, loop-free, endpoints as
// required.  Empty paths stand for colocated endpoints.
bool valid_path(const Topology& t, const Path& p, NodeId from, NodeId to, std::string* why) {
  if (p.empty()) {
    if (from != to) {
      *why = "empty path between distinct nodes";
      return false;
    }
    return true;
  }
  if (p.nodes.size() != p.edges.size() + 1) {
    *why = "node/edge count mismatch";
    return false;
  }
  if (p.nodes.front() != from || p.nodes.back() != to) {
    *why = "path endpoints do not match placement";
    return false;
  }
  std::set<NodeId> seen;
  for (size_t i = 0; i < p.edges.size(); ++i) {
    EdgeId e = p.edges[i];
    if (e < 0 || e >= static_cast<EdgeId>(t.edges.size())) {
      *why = "unknown edge";
      return false;
    }
    const Edge& ed = t.edge(e);
    NodeId x = p.nodes[i], y = p.nodes[i + 1];
    if (!((ed.a == x && ed.b == y) || (ed.a == y && ed.b == x))) {
      *why = "edges not contiguous";
      return false;
    }
    if (!seen.insert(x).second) {
      *why = "path revisits a node";
      return false;
    }
  }
  if (!seen.insert(p.nodes.back()).second) {
    *why = "path revisits a node";
    return false;
  }
  return true;
}

struct LatencyEval {
  std::vector<std::optional<SliceEval>> slices;
  double sum_fh = 0.0, sum_mh = 0.0;
};

LatencyEval eval_latencies(const Instance& inst, const Solution& sol) {
  const Topology& t = inst.topo();
  const ScenarioConstants& c = inst.scen().constants;
  FlowSet fs = flows_of(sol);
  LatencyEval out;
  out.slices.resize(inst.n_flows());
  for (const Assignment& a : sol.assigns) {
    SliceEval ev;
    for (Segment seg : {Segment::MH, Segment::FH}) {
      const Path& p = seg == Segment::MH ? a.mh_path : a.fh_path;
      LatencyBreakdown& b = seg == Segment::MH ? ev.mh : ev.fh;
      if (p.empty()) continue;
      RoutedFlow f{a.gnb, a.slice, seg, p};
      b.static_us = static_latency_us(p, t, c);
      const std::vector<RoutedFlow>& same = seg == Segment::FH ? fs.fh : fs.mh;
      for (EdgeId e : p.edges) {
        b.queuing_us += queuing_us(f, t.edge(e), fs.fh, fs.mh, c);
        b.self_queuing_us += self_queuing_us(f, t.edge(e), same, c);
      }
    }
    ev.e2e_us = ev.mh.total() + ev.fh.total();
    out.slices[inst.flat(a.gnb, a.slice)] = ev;
    out.sum_fh += ev.fh.total();
    out.sum_mh += ev.mh.total();
  }
  return out;
}

}  // namespace

FeasibilityReport check(const Instance& inst, const Solution& sol, bool require_complete) {
  const Topology& t = inst.topo();
  FeasibilityReport rep;
  auto fail = [&](const std::string& cons, const std::string& entity, double slack = 0.0) {
    rep.ok = false;
    rep.violations.push_back({cons, entity, slack});
  };

  std::set<std::pair<int, int>> seen;
  for (const Assignment& a : sol.assigns) {
    std::string tag = slice_tag(a.gnb, a.slice);
    if (a.gnb < 0 || a.gnb >= inst.n_gnbs()) {
      fail("vnf_1", tag + ": unknown gnb");
      continue;
    }
    if (!seen.insert({a.gnb, static_cast<int>(a.slice)}).second)
      fail("vnf_1", tag + ": assigned more than once");

    const VirtualConfig& cfg = vc(a.vc);
    if (a.ru != inst.ru_of(a.gnb)) fail("vnf_2", tag + ": RU not at the gnb cell site");
    const Node& cun = t.node(a.cu);
    if (!is_processing(cun.kind) || !cun.core_adjacent || cun.kind == NodeKind::CellSitePP)
      fail("vnf_4", tag + ": CU must sit on a core-adjacent pool");
    const Node& dun = t.node(a.du);
    if (!is_processing(dun.kind)) fail("vnf_3", tag + ": DU not on a processing node");
    if (dun.kind == NodeKind::CellSitePP && a.du != a.ru)
      fail("vnf_3", tag + ": DU on a foreign cell site");
    switch (cfg.colocation) {
      case VcClass::DualSplit:
        if (a.cu == a.du || a.du == a.ru || a.cu == a.ru)
          fail("vnf_5", tag + ": dual split needs three distinct nodes");
        break;
      case VcClass::DuWithRu:
        if (a.du != a.ru) fail("vnf_7", tag + ": DU must share the cell site");
        if (a.cu == a.ru) fail("vnf_6", tag + ": CU may not share the cell site");
        break;
      case VcClass::DuWithCu:
        if (a.cu != a.du) fail("vnf_10", tag + ": CU and DU must be colocated");
        if (a.du == a.ru) fail("vnf_9", tag + ": DU may not share the cell site");
        break;
    }
    std::string why;
    if (!valid_path(t, a.mh_path, a.cu, a.du, &why)) fail("rot_02", tag + " MH: " + why);
    if (!valid_path(t, a.fh_path, a.du, a.ru, &why)) fail("rot_03", tag + " FH: " + why);
    if (cfg.mh_on_wire && a.mh_path.empty()) fail("rot_04", tag + ": MH segment needs a path");
    if (!cfg.mh_on_wire && !a.mh_path.empty()) fail("rot_04", tag + ": unexpected MH path");
    if (cfg.fh_on_wire && a.fh_path.empty()) fail("rot_05", tag + ": FH segment needs a path");
    if (!cfg.fh_on_wire && !a.fh_path.empty()) fail("rot_05", tag + ": unexpected FH path");
  }
  if (require_complete) {
    for (int g = 0; g < inst.n_gnbs(); ++g)
      for (Slice sl : kAllSlices)
        if (!seen.count({g, static_cast<int>(sl)}))
          fail("vnf_1", slice_tag(g, sl) + ": unassigned");
  }
  if (!rep.ok) return rep;  // resource math needs structural validity

  ResourceState st = derive_state(inst, sol);
  for (const Node& n : t.nodes) {
    if (!is_processing(n.kind)) continue;
    if (!within(st.gops_used[n.id], n.capacity_gops))
      fail("comp_2", "node " + std::to_string(n.id),
           st.gops_used[n.id] - n.capacity_gops);
  }
  for (const Edge& e : t.edges) {
    double load = st.fh_mbps[e.id] + st.mh_mbps[e.id];
    if (!within(load, e.capacity_gbps * 1000.0))
      fail("link_4", "edge " + std::to_string(e.id), load - e.capacity_gbps * 1000.0);
  }

  LatencyEval lat = eval_latencies(inst, sol);
  const LatencyBounds& b = inst.scen().bounds;
  for (const Assignment& a : sol.assigns) {
    const SliceEval& ev = *lat.slices[inst.flat(a.gnb, a.slice)];
    std::string tag = slice_tag(a.gnb, a.slice);
    if (!within(ev.mh.total(), b.mh_max_us))
      fail("lat_20", tag + " MH", ev.mh.total() - b.mh_max_us);
    if (!within(ev.fh.total(), b.fh_max_us))
      fail("lat_21", tag + " FH", ev.fh.total() - b.fh_max_us);
    if (!within(ev.e2e_us, b.slice_max(a.slice)))
      fail("lat_19", tag, ev.e2e_us - b.slice_max(a.slice));
  }
  return rep;
}

EvalReport evaluate(const Instance& inst, const Solution& sol) {
  const Topology& t = inst.topo();
  const ScenarioConstants& c = inst.scen().constants;
  EvalReport rep;
  rep.state = derive_state(inst, sol);
  rep.node_energy_wh.assign(t.nodes.size(), 0.0);
  rep.sw_ports.assign(t.nodes.size(), 0);

  for (const Node& n : t.nodes) {
    if (is_processing(n.kind) && rep.state.active_pp[n.id]) {
      rep.node_energy_wh[n.id] =
          pp_energy_wh(n.cpus, rep.state.gops_used[n.id], n.capacity_gops, c) +
          pp_infra_wh(n.cpus, c);
    } else if (n.kind == NodeKind::Switch && rep.state.active_sw[n.id]) {
      int ports = 0;
      for (EdgeId e : t.incident(n.id))
        if (rep.state.fh_count[e] + rep.state.mh_count[e] > 0) ++ports;
      rep.sw_ports[n.id] = ports;
      rep.node_energy_wh[n.id] = switch_energy_wh(1, ports, c);
    }
    rep.energy_wh_total += rep.node_energy_wh[n.id];
  }

  LatencyEval lat = eval_latencies(inst, sol);
  rep.slices = std::move(lat.slices);
  rep.sum_fh_latency_us = lat.sum_fh;
  rep.sum_mh_latency_us = lat.sum_mh;
  return rep;
}

uint64_t state_hash(const Instance& inst, const Solution& sol) {
  Solution copy = sol;
  copy.sort_canonical();
  std::string buf;
  auto put = [&](const void* p, size_t n) { buf.append(static_cast<const char*>(p), n); };
  for (const Assignment& a : copy.assigns) {
    int head[6] = {a.gnb, static_cast<int>(a.slice), static_cast<int>(a.vc), a.cu, a.du, a.ru};
    put(head, sizeof head);
    for (const Path* p : {&a.mh_path, &a.fh_path}) {
      int n = p->hops();
      put(&n, sizeof n);
      for (EdgeId e : p->edges) put(&e, sizeof e);
    }
  }
  // Accumulate from the canonical order so float summation cannot make two
  // permutations of the same assignment hash differently.
  ResourceState st = derive_state(inst, copy);
  put(st.gops_used.data(), st.gops_used.size() * sizeof(double));
  put(st.fh_mbps.data(), st.fh_mbps.size() * sizeof(double));
  put(st.mh_mbps.data(), st.mh_mbps.size() * sizeof(double));
  put(st.fh_count.data(), st.fh_count.size() * sizeof(int));
  put(st.mh_count.data(), st.mh_count.size() * sizeof(int));
  buf.append(st.active_pp.begin(), st.active_pp.end());
  buf.append(st.active_sw.begin(), st.active_sw.end());
  return fnv1a64(buf);
}

}  // namespace xhaul
