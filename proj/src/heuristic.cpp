#include "xhaul/heuristic.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace xhaul {
namespace {

constexpr double kTol = 1e-7;

bool fits(double used, double extra, double cap) {
  return used + extra <= cap + kTol * std::max(1.0, std::abs(cap));
}

// Node triple (vc, cu, du) banned after a routing dead end; exact tuples are
// banned individually after latency evictions and improvement retries.
struct Forbidden {
  std::set<std::tuple<VcId, NodeId, NodeId>> triples;
  std::set<CandidateTuple> exact;

  bool banned(const CandidateTuple& t) const {
    if (triples.count({t.vc, t.cu, t.du})) return true;
    return exact.count(t) != 0;
  }
  std::size_t size() const { return triples.size() + exact.size(); }
};

struct HState {
  Solution sol;
  ResourceState st;
  std::vector<std::optional<CandidateTuple>> chosen;  // by flat flow index
  std::vector<Forbidden> forbidden;                   // by flat flow index

  explicit HState(const Instance& inst)
      : st(derive_state(inst, sol)),
        chosen(inst.n_flows()),
        forbidden(inst.n_flows()) {}
};

void commit(const Instance& inst, HState& s, int gnb, Slice sl, const CandidateTuple& t) {
  s.sol.assigns.push_back(make_assignment(inst, gnb, sl, t));
  s.sol.sort_canonical();
  s.chosen[inst.flat(gnb, sl)] = t;
  s.st = derive_state(inst, s.sol);
}

void remove_slice(const Instance& inst, HState& s, int gnb, Slice sl) {
  auto& as = s.sol.assigns;
  as.erase(std::remove_if(as.begin(), as.end(),
                          [&](const Assignment& a) { return a.gnb == gnb && a.slice == sl; }),
           as.end());
  s.chosen[inst.flat(gnb, sl)].reset();
  s.st = derive_state(inst, s.sol);
}

double utilization(const Instance& inst, const ResourceState& st, NodeId v) {
  double cap = inst.topo().node(v).capacity_gops;
  return cap > 0 ? st.gops_used[v] / cap : 0.0;
}

}  // namespace

namespace heur {

std::vector<VcId> vc_priority(const Instance& inst, const ResourceState& st, int gnb, Slice sl) {
  switch (sl) {
    case Slice::Urllc:
      return {VcId::VC3, VcId::VC1, VcId::VC2, VcId::VC4, VcId::VC5};
    case Slice::Mmtc:
      return {VcId::VC3, VcId::VC4, VcId::VC5, VcId::VC1, VcId::VC2};
    case Slice::Embb: {
      double du_load = inst.unit_load_gops(gnb, sl, VcId::VC1, Unit::DU);
      double max_free = 0.0;
      for (NodeId v : inst.du_domain_dual())
        max_free = std::max(max_free, inst.topo().node(v).capacity_gops - st.gops_used[v]);
      if (du_load > 0.5 * max_free)
        return {VcId::VC1, VcId::VC2, VcId::VC4, VcId::VC5, VcId::VC3};
      return {VcId::VC4, VcId::VC5, VcId::VC1, VcId::VC2, VcId::VC3};
    }
  }
  return {kAllVcs.begin(), kAllVcs.end()};
}

std::vector<NodeId> order_nodes(const Instance& inst, const ResourceState& st,
                                const std::vector<NodeId>& domain, NodeId ru) {
  std::vector<NodeId> out = domain;
  std::stable_sort(out.begin(), out.end(), [&](NodeId a, NodeId b) {
    double da = inst.catalog().dist_km(ru, a), db = inst.catalog().dist_km(ru, b);
    if (std::abs(da - db) > 1e-9) return da < db;
    double ua = utilization(inst, st, a), ub = utilization(inst, st, b);
    if (std::abs(ua - ub) > 1e-12) return ua > ub;  // pack fuller pools first
    return a < b;
  });
  return out;
}

std::vector<int> order_paths(const Instance& inst, const ResourceState& st,
                             const std::vector<Path>& cands, double rate_mbps, double bound_us) {
  const Topology& topo = inst.topo();
  const ScenarioConstants& c = inst.scen().constants;
  struct Scored {
    int idx;
    int reuse;
    double len;
  };
  std::vector<Scored> ok;
  for (int i = 0; i < static_cast<int>(cands.size()); ++i) {
    const Path& p = cands[i];
    double stat = static_latency_us(p, topo, c);
    if (stat > bound_us + kTol * std::max(1.0, bound_us)) continue;
    bool cap_ok = true;
    int reuse = 0;
    for (EdgeId e : p.edges) {
      double used = st.fh_mbps[e] + st.mh_mbps[e];
      if (!fits(used, rate_mbps, topo.edge(e).capacity_gbps * 1000.0)) {
        cap_ok = false;
        break;
      }
      if (st.fh_count[e] + st.mh_count[e] > 0) ++reuse;
    }
    if (!cap_ok) continue;
    ok.push_back({i, reuse, p.length_km});
  }
  std::stable_sort(ok.begin(), ok.end(), [&](const Scored& a, const Scored& b) {
    if (a.reuse != b.reuse) return a.reuse > b.reuse;
    if (std::abs(a.len - b.len) > 1e-9) return a.len < b.len;
    return cands[a.idx].edges < cands[b.idx].edges;
  });
  std::vector<int> out;
  out.reserve(ok.size());
  for (const Scored& s : ok) out.push_back(s.idx);
  return out;
}

}  // namespace heur

namespace {

enum class AttemptOutcome { Placed, Pending, Dead };

// Try to configure one slice against the current state.  Placement walks the
// ranked nodes first-fit per configuration; once units are fixed, routing
// picks the best admissible path pair.  A placement with no routable pair
// bans the node triple and parks the slice (Pending); exhausting every
// configuration yields Dead.
AttemptOutcome attempt_slice(const Instance& inst, HState& s, int gnb, Slice sl,
                             HeuristicStats& stats) {
  const int flat = inst.flat(gnb, sl);
  const NodeId ru = inst.ru_of(gnb);
  const LatencyBounds& b = inst.scen().bounds;
  Forbidden& forb = s.forbidden[flat];
  bool any_placement = false;

  for (VcId vcid : heur::vc_priority(inst, s.st, gnb, sl)) {
    const VirtualConfig& cfg = vc(vcid);
    double ru_g = inst.unit_load_gops(gnb, sl, vcid, Unit::RU);
    double du_g = inst.unit_load_gops(gnb, sl, vcid, Unit::DU);
    double cu_g = inst.unit_load_gops(gnb, sl, vcid, Unit::CU);
    double mh_rate = cfg.mh_on_wire ? inst.rate_mbps(gnb, sl, vcid, Segment::MH) : 0.0;
    double fh_rate = cfg.fh_on_wire ? inst.rate_mbps(gnb, sl, vcid, Segment::FH) : 0.0;
    double cap_ru = inst.topo().node(ru).capacity_gops;

    // Enumerate unit placements for this configuration in preference order.
    std::vector<std::pair<NodeId, NodeId>> placements;  // (cu, du)
    switch (cfg.colocation) {
      case VcClass::DualSplit: {
        if (!fits(s.st.gops_used[ru], ru_g, cap_ru)) break;
        auto dus = heur::order_nodes(inst, s.st, inst.du_domain_dual(), ru);
        auto cus = heur::order_nodes(inst, s.st, inst.cu_domain(), ru);
        for (NodeId du : dus) {
          if (!fits(s.st.gops_used[du], du_g, inst.topo().node(du).capacity_gops)) continue;
          for (NodeId cu : cus) {
            if (cu == du) continue;
            if (!fits(s.st.gops_used[cu], cu_g, inst.topo().node(cu).capacity_gops)) continue;
            placements.push_back({cu, du});
          }
        }
        break;
      }
      case VcClass::DuWithRu: {
        if (!fits(s.st.gops_used[ru], ru_g + du_g, cap_ru)) break;
        for (NodeId cu : heur::order_nodes(inst, s.st, inst.cu_domain(), ru))
          if (fits(s.st.gops_used[cu], cu_g, inst.topo().node(cu).capacity_gops))
            placements.push_back({cu, ru});
        break;
      }
      case VcClass::DuWithCu: {
        if (!fits(s.st.gops_used[ru], ru_g, cap_ru)) break;
        for (NodeId cu : heur::order_nodes(inst, s.st, inst.cu_domain(), ru))
          if (fits(s.st.gops_used[cu], cu_g + du_g, inst.topo().node(cu).capacity_gops))
            placements.push_back({cu, cu});
        break;
      }
    }

    for (auto [cu, du] : placements) {
      if (forb.triples.count({vcid, cu, du})) continue;
      any_placement = true;
      ++stats.attempts;

      // Route: first admissible, non-banned path pair wins.
      const auto& mh_cands = inst.catalog().paths(cu, du);
      const auto& fh_cands = inst.catalog().paths(du, ru);
      std::vector<int> mh_order = cfg.mh_on_wire
                                      ? heur::order_paths(inst, s.st, mh_cands, mh_rate, b.mh_max_us)
                                      : std::vector<int>{0};
      std::vector<int> fh_order = cfg.fh_on_wire
                                      ? heur::order_paths(inst, s.st, fh_cands, fh_rate, b.fh_max_us)
                                      : std::vector<int>{0};
      for (int mi : mh_order) {
        for (int fi : fh_order) {
          CandidateTuple t{vcid, cu, du, mi, fi};
          if (forb.banned(t)) continue;
          commit(inst, s, gnb, sl, t);
          return AttemptOutcome::Placed;
        }
      }
      // Units fit but no path pair is admissible: ban the triple and park the
      // slice; freed-up edges may admit it on a later pass.
      forb.triples.insert({vcid, cu, du});
      return AttemptOutcome::Pending;
    }
  }
  return any_placement ? AttemptOutcome::Pending : AttemptOutcome::Dead;
}

// Evict placed slices whose queuing-inclusive latency breaks a bound, banning
// the exact tuple each held.  Returns the evicted flows.
std::vector<std::pair<int, Slice>> evict_violators(const Instance& inst, HState& s) {
  std::vector<std::pair<int, Slice>> evicted;
  EvalReport ev = evaluate(inst, s.sol);
  const LatencyBounds& b = inst.scen().bounds;
  auto over = [](double v, double lim) { return v > lim + kTol * std::max(1.0, lim); };
  for (int g = 0; g < inst.n_gnbs(); ++g) {
    for (Slice sl : kAllSlices) {
      int flat = inst.flat(g, sl);
      if (!s.chosen[flat] || !ev.slices[flat]) continue;
      const SliceEval& se = *ev.slices[flat];
      if (over(se.mh.total(), b.mh_max_us) || over(se.fh.total(), b.fh_max_us) ||
          over(se.e2e_us, b.slice_max(sl)))
        evicted.push_back({g, sl});
    }
  }
  for (auto [g, sl] : evicted) {
    s.forbidden[inst.flat(g, sl)].exact.insert(*s.chosen[inst.flat(g, sl)]);
    remove_slice(inst, s, g, sl);
  }
  return evicted;
}

// One improvement phase: visit pools from least utilized and try to
// re-configure each hosted slice away from its current tuple, keeping the
// move only on a strict total-energy drop.
void minimize_energy(const Instance& inst, HState& s, int iterations, HeuristicStats& stats) {
  for (int it = 0; it < iterations; ++it) {
    bool improved = false;
    std::vector<NodeId> pools;
    for (NodeId v : inst.topo().processing_nodes())
      if (s.st.active_pp[v]) pools.push_back(v);
    std::stable_sort(pools.begin(), pools.end(), [&](NodeId a, NodeId b) {
      double ua = utilization(inst, s.st, a), ub = utilization(inst, s.st, b);
      if (std::abs(ua - ub) > 1e-12) return ua < ub;
      return a < b;
    });
    for (NodeId v : pools) {
      std::vector<std::pair<int, Slice>> hosted;
      for (const Assignment& a : s.sol.assigns)
        if (a.cu == v || a.du == v || a.ru == v) hosted.push_back({a.gnb, a.slice});
      for (auto [g, sl] : hosted) {
        const auto& cur = s.chosen[inst.flat(g, sl)];
        if (!cur) continue;  // moved away earlier in this sweep
        const Assignment* a = s.sol.find(g, sl);
        if (!a || (a->cu != v && a->du != v && a->ru != v)) continue;

        HState snapshot = s;
        std::uint64_t h0 = state_hash(inst, s.sol);
        double e0 = evaluate(inst, s.sol).energy_wh_total;

        CandidateTuple old = *cur;
        remove_slice(inst, s, g, sl);
        s.forbidden[inst.flat(g, sl)].exact.insert(old);

        bool keep = false;
        if (attempt_slice(inst, s, g, sl, stats) == AttemptOutcome::Placed) {
          FeasibilityReport rep = check(inst, s.sol, true);
          if (rep.ok) {
            double e1 = evaluate(inst, s.sol).energy_wh_total;
            if (e1 < e0 - 1e-9 * std::max(1.0, e0)) keep = true;
          }
        }
        if (keep) {
          improved = true;
          ++stats.improvements;
        } else {
          s = snapshot;
          if (state_hash(inst, s.sol) != h0)
            throw std::logic_error("snapshot rollback changed state");
        }
      }
    }
    if (!improved) break;
  }
}

}  // namespace

HeuristicResult heuristic_run(const Instance& inst, const HeuristicParams& params) {
  HState s(inst);
  HeuristicResult res;

  std::vector<std::pair<int, Slice>> pending;
  for (int g = 0; g < inst.n_gnbs(); ++g)
    for (Slice sl : kAllSlices) pending.push_back({g, sl});

  while (!pending.empty()) {
    ++res.stats.passes;
    std::size_t forb0 = 0;
    for (const Forbidden& f : s.forbidden) forb0 += f.size();

    std::vector<std::pair<int, Slice>> next;
    int placed_now = 0;
    std::vector<std::pair<int, Slice>> dead;
    for (auto [g, sl] : pending) {
      switch (attempt_slice(inst, s, g, sl, res.stats)) {
        case AttemptOutcome::Placed:
          ++placed_now;
          break;
        case AttemptOutcome::Pending:
          next.push_back({g, sl});
          break;
        case AttemptOutcome::Dead:
          dead.push_back({g, sl});
          break;
      }
    }
    for (auto [g, sl] : evict_violators(inst, s)) next.push_back({g, sl});
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());

    std::size_t forb1 = 0;
    for (const Forbidden& f : s.forbidden) forb1 += f.size();

    if (!dead.empty() || (next.size() >= pending.size() && placed_now == 0 && forb1 == forb0)) {
      res.ok = false;
      res.unplaceable = dead.empty() ? next : dead;
      res.solution = s.sol;
      return res;
    }
    pending = std::move(next);
    if (res.stats.passes > 10000) throw std::logic_error("construction failed to converge");
  }

  res.stats.construction_energy_wh = evaluate(inst, s.sol).energy_wh_total;
  minimize_energy(inst, s, params.iterations, res.stats);

  FeasibilityReport rep = check(inst, s.sol, true);
  if (!rep.ok) throw std::logic_error("heuristic produced infeasible solution: " +
                                      (rep.violations.empty() ? std::string("?")
                                                              : rep.violations[0].constraint));
  res.ok = true;
  res.solution = s.sol;
  res.solution.sort_canonical();
  res.eval = evaluate(inst, res.solution);
  return res;
}

}  // namespace xhaul
