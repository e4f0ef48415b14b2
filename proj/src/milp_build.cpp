#include "xhaul/milp.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace xhaul {

int MilpModel::add_var(const std::string& name, VarType type, double lb, double ub) {
  int id = static_cast<int>(vars.size());
  if (!var_index.emplace(name, id).second)
    throw std::logic_error("duplicate variable name " + name);
  vars.push_back({name, type, lb, ub});
  return id;
}

void MilpModel::add_row(const std::string& name, const std::string& tag, LinExpr lhs, Sense sense,
                        double rhs, double tol_scale) {
  rows.push_back({name, tag, std::move(lhs), sense, rhs, tol_scale});
}

int MilpModel::find_var(const std::string& name) const {
  auto it = var_index.find(name);
  return it == var_index.end() ? -1 : it->second;
}

const LinExpr& MilpModel::objective() const {
  return mode == ObjectiveMode::FhLatencyMin ? obj_fh_latency : obj_energy;
}

std::vector<int> MilpModel::rows_by_tag(const std::string& tag) const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(rows.size()); ++i)
    if (rows[i].tag == tag) out.push_back(i);
  return out;
}

int MilpModel::n_binary() const {
  int n = 0;
  for (const VarDef& v : vars) n += v.type == VarType::Binary;
  return n;
}

int MilpModel::n_continuous() const { return static_cast<int>(vars.size()) - n_binary(); }

double eval_expr(const LinExpr& e, const std::vector<double>& values) {
  double s = e.constant;
  for (const LinTerm& t : e.terms) s += t.coef * values[t.var];
  return s;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string cat(const std::string& a, int b) { return a + std::to_string(b); }

// Per-flow variable bookkeeping while the model is being emitted.
struct FlowVars {
  std::vector<int> x;                                    // per candidate tuple
  std::map<int, int> vc;                                 // vc ordinal -> var
  std::map<NodeId, int> cu, du;                          // placement marginals
  int ru = -1;
  std::vector<std::tuple<int, NodeId, NodeId, int>> cd_keys;  // (vc, cu, du, mh_idx)
  std::vector<std::tuple<int, NodeId, int>> dr_keys;          // (vc, du, fh_idx)
  std::map<std::tuple<int, NodeId, NodeId, int>, int> cd;     // key -> var
  std::map<std::tuple<int, NodeId, int>, int> dr;
  std::map<EdgeId, int> pmh, pfh;                        // edge projections
  std::map<std::pair<EdgeId, EdgeId>, int> qmh, qfh;     // (edge, prev edge)
  int lfh = -1, lmh = -1, le2e = -1;
};

struct Builder {
  const Instance& inst;
  const BuildOptions& opts;
  MilpModel m;

  const Topology& topo;
  const ScenarioConstants& c;
  int F;  // flows

  std::vector<FlowVars> fv;
  std::map<std::tuple<int, int, EdgeId>, int> fm;              // (fh flow, mh flow, e)
  std::map<std::tuple<int, int, EdgeId>, int> ffp, mmp;        // unordered pair (f<f'), e
  std::map<std::tuple<int, int, EdgeId, EdgeId>, int> spf, spm;  // pair, e, shared prev
  std::map<std::pair<int, EdgeId>, int> anymh;

  std::vector<int> pp, app, qpp, ypp;        // per node (-1 when not a pool)
  std::vector<int> edge_used;                // per edge (-1 when never used)
  std::vector<int> load_mh, load_fh, load_t; // per edge
  std::vector<int> asw, qsw, zsw;            // per node (-1 when not a switch)

  Builder(const Instance& i, const BuildOptions& o)
      : inst(i), opts(o), topo(i.topo()), c(i.scen().constants), F(i.n_flows()) {}

  int var(const std::string& name, VarType t, double lb, double ub) {
    if (m.vars.size() >= opts.max_variables)
      throw BuildBudgetError("variable budget exceeded at " + name + " (limit " +
                             std::to_string(opts.max_variables) + ")");
    return m.add_var(name, t, lb, ub);
  }
  int bin(const std::string& name) { return var(name, VarType::Binary, 0.0, 1.0); }

  double dtr(EdgeId e) const { return transmission_delay_us(c.frame_bytes, topo.edge(e).capacity_gbps); }
  double static_coef(EdgeId e) const {
    return topo.edge(e).length_km * c.prop_us_per_km + c.sf_us;
  }

  int flow_gnb(int f) const { return f / 3; }
  Slice flow_slice(int f) const { return static_cast<Slice>(f % 3); }

  const Path& cd_path([[maybe_unused]] int f, const std::tuple<int, NodeId, NodeId, int>& k) const {
    return inst.catalog().paths(std::get<1>(k), std::get<2>(k))[std::get<3>(k)];
  }
  const Path& dr_path(int f, const std::tuple<int, NodeId, int>& k) const {
    return inst.catalog().paths(std::get<1>(k), inst.ru_of(flow_gnb(f)))[std::get<2>(k)];
  }

  void build();
  void emit_flow_vars();
  void emit_pair_vars();
  void emit_infra_vars();
  void emit_assignment_rows();
  void emit_projection_rows();
  void emit_product_rows();
  void emit_latency_rows();
  void emit_link_rows();
  void emit_compute_rows();
  void emit_switch_rows();
  void emit_energy_rows();
  void emit_objectives();
  void emit_groups();
};

void Builder::emit_flow_vars() {
  fv.resize(F);
  for (int f = 0; f < F; ++f) {
    FlowVars& v = fv[f];
    int g = flow_gnb(f);
    Slice sl = flow_slice(f);
    const auto& ts = inst.tuples(g, sl);

    std::set<int> vcs;
    std::set<NodeId> cus, dus;
    std::set<std::tuple<int, NodeId, NodeId, int>> cdk;
    std::set<std::tuple<int, NodeId, int>> drk;
    for (const CandidateTuple& t : ts) {
      const VirtualConfig& cfg = ::xhaul::vc(t.vc);
      vcs.insert(static_cast<int>(t.vc));
      cus.insert(t.cu);
      dus.insert(t.du);
      if (cfg.mh_on_wire) cdk.insert({static_cast<int>(t.vc), t.cu, t.du, t.mh_idx});
      if (cfg.fh_on_wire) drk.insert({static_cast<int>(t.vc), t.du, t.fh_idx});
    }

    v.x.reserve(ts.size());
    for (int ti = 0; ti < static_cast<int>(ts.size()); ++ti)
      v.x.push_back(bin(cat(cat("X_f", f) + "_t", ti)));
    for (int k : vcs) v.vc[k] = bin(cat(cat("VC_f", f) + "_k", k));
    for (NodeId n : cus) v.cu[n] = bin(cat(cat("CU_f", f) + "_n", n));
    for (NodeId n : dus) v.du[n] = bin(cat(cat("DU_f", f) + "_n", n));
    v.ru = bin(cat("RU_f", f));
    v.cd_keys.assign(cdk.begin(), cdk.end());
    v.dr_keys.assign(drk.begin(), drk.end());
    for (int i = 0; i < static_cast<int>(v.cd_keys.size()); ++i)
      v.cd[v.cd_keys[i]] = bin(cat(cat("CD_f", f) + "_i", i));
    for (int i = 0; i < static_cast<int>(v.dr_keys.size()); ++i)
      v.dr[v.dr_keys[i]] = bin(cat(cat("DR_f", f) + "_i", i));

    std::set<EdgeId> me, fe;
    std::set<std::pair<EdgeId, EdgeId>> mq, fq;
    for (const auto& k : v.cd_keys)
      for (EdgeId e : cd_path(f, k).edges) {
        me.insert(e);
        EdgeId p = cd_path(f, k).prev_edge(e);
        if (p != -1) mq.insert({e, p});
      }
    for (const auto& k : v.dr_keys)
      for (EdgeId e : dr_path(f, k).edges) {
        fe.insert(e);
        EdgeId p = dr_path(f, k).prev_edge(e);
        if (p != -1) fq.insert({e, p});
      }
    for (EdgeId e : me) v.pmh[e] = bin(cat(cat("PM_f", f) + "_e", e));
    for (EdgeId e : fe) v.pfh[e] = bin(cat(cat("PF_f", f) + "_e", e));
    for (auto [e, p] : mq) v.qmh[{e, p}] = bin(cat(cat(cat("QM_f", f) + "_e", e) + "_p", p));
    for (auto [e, p] : fq) v.qfh[{e, p}] = bin(cat(cat(cat("QF_f", f) + "_e", e) + "_p", p));

    v.lfh = var(cat("LF_f", f), VarType::Continuous, 0.0, kInf);
    v.lmh = var(cat("LM_f", f), VarType::Continuous, 0.0, kInf);
    v.le2e = var(cat("LE_f", f), VarType::Continuous, 0.0, kInf);
  }
}

void Builder::emit_pair_vars() {
  // Interaction products exist only where both sides can traverse the edge.
  for (int f = 0; f < F; ++f)
    for (auto& kv : fv[f].pfh)
      for (int f2 = 0; f2 < F; ++f2)
        if (fv[f2].pmh.count(kv.first))
          fm[{f, f2, kv.first}] = bin(cat(cat(cat("FM_f", f) + "_f", f2) + "_e", kv.first));
  for (int f = 0; f < F; ++f)
    for (int f2 = f + 1; f2 < F; ++f2) {
      for (auto& kv : fv[f].pfh)
        if (fv[f2].pfh.count(kv.first))
          ffp[{f, f2, kv.first}] = bin(cat(cat(cat("FF_f", f) + "_f", f2) + "_e", kv.first));
      for (auto& kv : fv[f].pmh)
        if (fv[f2].pmh.count(kv.first))
          mmp[{f, f2, kv.first}] = bin(cat(cat(cat("MM_f", f) + "_f", f2) + "_e", kv.first));
    }
  for (int f = 0; f < F; ++f)
    for (int f2 = f + 1; f2 < F; ++f2) {
      for (auto& kv : fv[f].qfh)
        if (fv[f2].qfh.count(kv.first))
          spf[{f, f2, kv.first.first, kv.first.second}] = bin(
              cat(cat(cat(cat("SF_f", f) + "_f", f2) + "_e", kv.first.first) + "_p",
                  kv.first.second));
      for (auto& kv : fv[f].qmh)
        if (fv[f2].qmh.count(kv.first))
          spm[{f, f2, kv.first.first, kv.first.second}] = bin(
              cat(cat(cat(cat("SM_f", f) + "_f", f2) + "_e", kv.first.first) + "_p",
                  kv.first.second));
    }
  for (int f = 0; f < F; ++f)
    for (auto& kv : fv[f].pfh) {
      EdgeId e = kv.first;
      bool any = false;
      for (int f2 = 0; f2 < F && !any; ++f2) any = fm.count({f, f2, e}) != 0;
      if (any) anymh[{f, e}] = bin(cat(cat("AM_f", f) + "_e", e));
    }
}

void Builder::emit_infra_vars() {
  int N = static_cast<int>(topo.nodes.size());
  int E = static_cast<int>(topo.edges.size());
  pp.assign(N, -1);
  app.assign(N, -1);
  qpp.assign(N, -1);
  ypp.assign(N, -1);
  asw.assign(N, -1);
  qsw.assign(N, -1);
  zsw.assign(N, -1);
  edge_used.assign(E, -1);
  load_mh.assign(E, -1);
  load_fh.assign(E, -1);
  load_t.assign(E, -1);

  for (const Node& n : topo.nodes) {
    if (is_processing(n.kind)) {
      double cap = n.capacity_gops;
      double mx = n.cpus * c.w_full * c.period_h;
      pp[n.id] = var(cat("PP_n", n.id), VarType::Continuous, 0.0, std::max(cap, 0.0));
      app[n.id] = bin(cat("APP_n", n.id));
      qpp[n.id] = var(cat("QP_n", n.id), VarType::Continuous, 0.0, mx);
      ypp[n.id] = var(cat("Y_n", n.id), VarType::Continuous, 0.0, mx);
    }
  }
  for (const Edge& e : topo.edges) {
    bool touched = false;
    for (int f = 0; f < F && !touched; ++f)
      touched = fv[f].pmh.count(e.id) || fv[f].pfh.count(e.id);
    if (touched) edge_used[e.id] = bin(cat("EU_e", e.id));
    load_mh[e.id] = var(cat("LDM_e", e.id), VarType::Continuous, 0.0, kInf);
    load_fh[e.id] = var(cat("LDF_e", e.id), VarType::Continuous, 0.0, kInf);
    load_t[e.id] = var(cat("LD_e", e.id), VarType::Continuous, 0.0, kInf);
  }
  for (const Node& n : topo.nodes) {
    if (n.kind != NodeKind::Switch) continue;
    int deg_used = 0;
    for (EdgeId e : topo.incident(n.id))
      if (edge_used[e] != -1) ++deg_used;
    double mx = (c.w_chassis + c.w_linecard + c.sw_infra_w + deg_used * c.w_port) * c.period_h;
    asw[n.id] = bin(cat("ASW_n", n.id));
    qsw[n.id] = var(cat("QS_n", n.id), VarType::Continuous, 0.0, mx);
    zsw[n.id] = var(cat("Z_n", n.id), VarType::Continuous, 0.0, mx);
  }
}

void Builder::emit_assignment_rows() {
  for (int f = 0; f < F; ++f) {
    FlowVars& v = fv[f];
    int g = flow_gnb(f);
    Slice sl = flow_slice(f);
    const auto& ts = inst.tuples(g, sl);

    LinExpr one;
    for (int x : v.x) one.terms.push_back({x, 1.0});
    m.add_row(cat("vnf_1[f", f) + "]", "vnf_1", std::move(one), Sense::Eq, 1.0);
    m.add_row(cat("vnf_2[f", f) + "]", "vnf_2", LinExpr{{{v.ru, 1.0}}, 0.0}, Sense::Eq, 1.0);

    auto def = [&](int lhs_var, const std::string& name, const std::string& tag, auto member) {
      LinExpr e;
      e.terms.push_back({lhs_var, 1.0});
      for (int ti = 0; ti < static_cast<int>(ts.size()); ++ti)
        if (member(ts[ti])) e.terms.push_back({v.x[ti], -1.0});
      m.add_row(name, tag, std::move(e), Sense::Eq, 0.0);
    };
    for (auto& [k, vid] : v.vc)
      def(vid, cat(cat("def_vc[f", f) + "_k", k) + "]", "def_vc",
          [&](const CandidateTuple& t) { return static_cast<int>(t.vc) == k; });
    for (auto& [n, vid] : v.cu)
      def(vid, cat(cat("def_cu[f", f) + "_n", n) + "]", "def_cu",
          [&](const CandidateTuple& t) { return t.cu == n; });
    for (auto& [n, vid] : v.du)
      def(vid, cat(cat("def_du[f", f) + "_n", n) + "]", "def_du",
          [&](const CandidateTuple& t) { return t.du == n; });
    for (int i = 0; i < static_cast<int>(v.cd_keys.size()); ++i) {
      const auto& k = v.cd_keys[i];
      def(v.cd.at(k), cat(cat("def_cd[f", f) + "_i", i) + "]", "def_cd",
          [&](const CandidateTuple& t) {
            return ::xhaul::vc(t.vc).mh_on_wire &&
                   std::tuple(static_cast<int>(t.vc), t.cu, t.du, t.mh_idx) == k;
          });
    }
    for (int i = 0; i < static_cast<int>(v.dr_keys.size()); ++i) {
      const auto& k = v.dr_keys[i];
      def(v.dr.at(k), cat(cat("def_dr[f", f) + "_i", i) + "]", "def_dr",
          [&](const CandidateTuple& t) {
            return ::xhaul::vc(t.vc).fh_on_wire &&
                   std::tuple(static_cast<int>(t.vc), t.du, t.fh_idx) == k;
          });
    }
  }
}

void Builder::emit_projection_rows() {
  for (int f = 0; f < F; ++f) {
    FlowVars& v = fv[f];
    for (auto& [e, pvar] : v.pmh) {
      LinExpr ex;
      ex.terms.push_back({pvar, 1.0});
      for (const auto& k : v.cd_keys)
        if (cd_path(f, k).uses_edge(e)) ex.terms.push_back({v.cd.at(k), -1.0});
      m.add_row(cat(cat("rot_10[f", f) + "_e", e) + "]", "rot_10", std::move(ex), Sense::Eq, 0.0);
    }
    for (auto& [e, pvar] : v.pfh) {
      LinExpr ex;
      ex.terms.push_back({pvar, 1.0});
      for (const auto& k : v.dr_keys)
        if (dr_path(f, k).uses_edge(e)) ex.terms.push_back({v.dr.at(k), -1.0});
      m.add_row(cat(cat("rot_11[f", f) + "_e", e) + "]", "rot_11", std::move(ex), Sense::Eq, 0.0);
    }
    for (auto& [ep, qvar] : v.qmh) {
      LinExpr ex;
      ex.terms.push_back({qvar, 1.0});
      for (const auto& k : v.cd_keys)
        if (cd_path(f, k).uses_edge(ep.first) && cd_path(f, k).prev_edge(ep.first) == ep.second)
          ex.terms.push_back({v.cd.at(k), -1.0});
      m.add_row(cat(cat(cat("lat_02[f", f) + "_e", ep.first) + "_p", ep.second) + "]", "lat_02",
                std::move(ex), Sense::Eq, 0.0);
    }
    for (auto& [ep, qvar] : v.qfh) {
      LinExpr ex;
      ex.terms.push_back({qvar, 1.0});
      for (const auto& k : v.dr_keys)
        if (dr_path(f, k).uses_edge(ep.first) && dr_path(f, k).prev_edge(ep.first) == ep.second)
          ex.terms.push_back({v.dr.at(k), -1.0});
      m.add_row(cat(cat(cat("lat_01[f", f) + "_e", ep.first) + "_p", ep.second) + "]", "lat_01",
                std::move(ex), Sense::Eq, 0.0);
    }
  }
}

void Builder::emit_product_rows() {
  auto product = [&](int z, int x, int y, const std::string& zn) {
    m.add_row("pl_2[" + zn + "]", "pl_2", LinExpr{{{z, 1.0}, {x, -1.0}}, 0.0}, Sense::Le, 0.0);
    m.add_row("pl_3[" + zn + "]", "pl_3", LinExpr{{{z, 1.0}, {y, -1.0}}, 0.0}, Sense::Le, 0.0);
    m.add_row("pl_4[" + zn + "]", "pl_4", LinExpr{{{z, 1.0}, {x, -1.0}, {y, -1.0}}, 0.0}, Sense::Ge,
              -1.0);
    m.products.push_back({z, x, y});
  };
  for (auto& [k, z] : fm)
    product(z, fv[std::get<0>(k)].pfh.at(std::get<2>(k)), fv[std::get<1>(k)].pmh.at(std::get<2>(k)),
            m.vars[z].name);
  for (auto& [k, z] : ffp)
    product(z, fv[std::get<0>(k)].pfh.at(std::get<2>(k)), fv[std::get<1>(k)].pfh.at(std::get<2>(k)),
            m.vars[z].name);
  for (auto& [k, z] : mmp)
    product(z, fv[std::get<0>(k)].pmh.at(std::get<2>(k)), fv[std::get<1>(k)].pmh.at(std::get<2>(k)),
            m.vars[z].name);
  for (auto& [k, z] : spf)
    product(z, fv[std::get<0>(k)].qfh.at({std::get<2>(k), std::get<3>(k)}),
            fv[std::get<1>(k)].qfh.at({std::get<2>(k), std::get<3>(k)}), m.vars[z].name);
  for (auto& [k, z] : spm)
    product(z, fv[std::get<0>(k)].qmh.at({std::get<2>(k), std::get<3>(k)}),
            fv[std::get<1>(k)].qmh.at({std::get<2>(k), std::get<3>(k)}), m.vars[z].name);

  for (auto& [key, am] : anymh) {
    auto [f, e] = key;
    LinExpr ub;
    ub.terms.push_back({am, 1.0});
    for (int f2 = 0; f2 < F; ++f2) {
      auto it = fm.find({f, f2, e});
      if (it == fm.end()) continue;
      m.add_row(cat(cat(cat("lat_10[f", f) + "_e", e) + "_f", f2) + "]", "lat_10",
                LinExpr{{{am, 1.0}, {it->second, -1.0}}, 0.0}, Sense::Ge, 0.0);
      ub.terms.push_back({it->second, -1.0});
    }
    m.add_row(cat(cat("lat_11[f", f) + "_e", e) + "]", "lat_11", std::move(ub), Sense::Le, 0.0);
  }
}

void Builder::emit_latency_rows() {
  for (int f = 0; f < F; ++f) {
    FlowVars& v = fv[f];

    // Fronthaul latency: static + one lower-class slot when any midhaul flow
    // shares the edge + one slot per same-class flow entering by another port.
    LinExpr lf;
    lf.terms.push_back({v.lfh, 1.0});
    for (auto& [e, pvar] : v.pfh) lf.terms.push_back({pvar, -static_coef(e)});
    for (auto& [key, am] : anymh)
      if (key.first == f) lf.terms.push_back({am, -dtr(key.second)});
    for (auto& [k, z] : ffp)
      if (std::get<0>(k) == f || std::get<1>(k) == f)
        lf.terms.push_back({z, -dtr(std::get<2>(k))});
    for (auto& [k, z] : spf)
      if (std::get<0>(k) == f || std::get<1>(k) == f)
        lf.terms.push_back({z, dtr(std::get<2>(k))});
    m.add_row(cat("lat_14[f", f) + "]", "lat_14", std::move(lf), Sense::Eq, 0.0);

    // Midhaul latency: static + one slot per fronthaul flow on the edge + two
    // interactions per other midhaul flow (one queue slot always, one more
    // unless it enters by the same port).
    LinExpr lm;
    lm.terms.push_back({v.lmh, 1.0});
    for (auto& [e, pvar] : v.pmh) lm.terms.push_back({pvar, -static_coef(e)});
    for (auto& [k, z] : fm)
      if (std::get<1>(k) == f) lm.terms.push_back({z, -dtr(std::get<2>(k))});
    for (auto& [k, z] : mmp)
      if (std::get<0>(k) == f || std::get<1>(k) == f)
        lm.terms.push_back({z, -2.0 * dtr(std::get<2>(k))});
    for (auto& [k, z] : spm)
      if (std::get<0>(k) == f || std::get<1>(k) == f)
        lm.terms.push_back({z, dtr(std::get<2>(k))});
    m.add_row(cat("lat_15[f", f) + "]", "lat_15", std::move(lm), Sense::Eq, 0.0);

    m.add_row(cat("lat_16[f", f) + "]", "lat_16",
              LinExpr{{{v.le2e, 1.0}, {v.lfh, -1.0}, {v.lmh, -1.0}}, 0.0}, Sense::Eq, 0.0);
  }

  // Bounds are emitted in expanded form (same terms as the definitions) so a
  // partially known sum can already reject a branch.
  const LatencyBounds& b = inst.scen().bounds;
  for (int f = 0; f < F; ++f) {
    FlowVars& v = fv[f];
    LinExpr fh_terms, mh_terms;
    for (auto& [e, pvar] : v.pfh) fh_terms.terms.push_back({pvar, static_coef(e)});
    for (auto& [key, am] : anymh)
      if (key.first == f) fh_terms.terms.push_back({am, dtr(key.second)});
    for (auto& [k, z] : ffp)
      if (std::get<0>(k) == f || std::get<1>(k) == f)
        fh_terms.terms.push_back({z, dtr(std::get<2>(k))});
    for (auto& [k, z] : spf)
      if (std::get<0>(k) == f || std::get<1>(k) == f)
        fh_terms.terms.push_back({z, -dtr(std::get<2>(k))});
    for (auto& [e, pvar] : v.pmh) mh_terms.terms.push_back({pvar, static_coef(e)});
    for (auto& [k, z] : fm)
      if (std::get<1>(k) == f) mh_terms.terms.push_back({z, dtr(std::get<2>(k))});
    for (auto& [k, z] : mmp)
      if (std::get<0>(k) == f || std::get<1>(k) == f)
        mh_terms.terms.push_back({z, 2.0 * dtr(std::get<2>(k))});
    for (auto& [k, z] : spm)
      if (std::get<0>(k) == f || std::get<1>(k) == f)
        mh_terms.terms.push_back({z, -dtr(std::get<2>(k))});

    LinExpr e2e = fh_terms;
    for (const LinTerm& t : mh_terms.terms) e2e.terms.push_back(t);
    m.add_row(cat("lat_20[f", f) + "]", "lat_20", std::move(mh_terms), Sense::Le, b.mh_max_us);
    m.add_row(cat("lat_21[f", f) + "]", "lat_21", std::move(fh_terms), Sense::Le, b.fh_max_us);
    m.add_row(cat("lat_19[f", f) + "]", "lat_19", std::move(e2e), Sense::Le,
              b.slice_max(flow_slice(f)));
  }
}

void Builder::emit_link_rows() {
  for (const Edge& e : topo.edges) {
    LinExpr lm, lf, cap;
    lm.terms.push_back({load_mh[e.id], 1.0});
    lf.terms.push_back({load_fh[e.id], 1.0});
    for (int f = 0; f < F; ++f) {
      int g = flow_gnb(f);
      Slice sl = flow_slice(f);
      for (const auto& k : fv[f].cd_keys)
        if (cd_path(f, k).uses_edge(e.id)) {
          double r = inst.rate_mbps(g, sl, static_cast<VcId>(std::get<0>(k)), Segment::MH);
          lm.terms.push_back({fv[f].cd.at(k), -r});
          cap.terms.push_back({fv[f].cd.at(k), r});
        }
      for (const auto& k : fv[f].dr_keys)
        if (dr_path(f, k).uses_edge(e.id)) {
          double r = inst.rate_mbps(g, sl, static_cast<VcId>(std::get<0>(k)), Segment::FH);
          lf.terms.push_back({fv[f].dr.at(k), -r});
          cap.terms.push_back({fv[f].dr.at(k), r});
        }
    }
    m.add_row(cat("link_1[e", e.id) + "]", "link_1", std::move(lm), Sense::Eq, 0.0);
    m.add_row(cat("link_2[e", e.id) + "]", "link_2", std::move(lf), Sense::Eq, 0.0);
    m.add_row(cat("link_3[e", e.id) + "]", "link_3",
              LinExpr{{{load_t[e.id], 1.0}, {load_mh[e.id], -1.0}, {load_fh[e.id], -1.0}}, 0.0},
              Sense::Eq, 0.0);
    m.add_row(cat("link_4[e", e.id) + "]", "link_4", std::move(cap), Sense::Le,
              e.capacity_gbps * 1000.0);
  }
}

void Builder::emit_compute_rows() {
  for (const Node& n : topo.nodes) {
    if (!is_processing(n.kind)) continue;
    LinExpr def, capr;
    def.terms.push_back({pp[n.id], 1.0});
    for (int f = 0; f < F; ++f) {
      int g = flow_gnb(f);
      Slice sl = flow_slice(f);
      NodeId ru = inst.ru_of(g);
      const auto& ts = inst.tuples(g, sl);
      for (int ti = 0; ti < static_cast<int>(ts.size()); ++ti) {
        const CandidateTuple& t = ts[ti];
        double load = 0.0;
        if (ru == n.id) load += inst.unit_load_gops(g, sl, t.vc, Unit::RU);
        if (t.du == n.id) load += inst.unit_load_gops(g, sl, t.vc, Unit::DU);
        if (t.cu == n.id) load += inst.unit_load_gops(g, sl, t.vc, Unit::CU);
        if (load != 0.0) {
          def.terms.push_back({fv[f].x[ti], -load});
          capr.terms.push_back({fv[f].x[ti], load});
        }
      }
    }
    m.add_row(cat("comp_1[n", n.id) + "]", "comp_1", std::move(def), Sense::Eq, 0.0);
    capr.terms.push_back({app[n.id], -n.capacity_gops});
    m.add_row(cat("comp_2[n", n.id) + "]", "comp_2", std::move(capr), Sense::Le, 0.0,
              std::max(1.0, n.capacity_gops));
  }
  for (int f = 0; f < F; ++f) {
    for (auto& [n, vid] : fv[f].cu)
      m.add_row(cat(cat("comp_3[f", f) + "_n", n) + "]", "comp_3",
                LinExpr{{{app[n], 1.0}, {vid, -1.0}}, 0.0}, Sense::Ge, 0.0);
    for (auto& [n, vid] : fv[f].du)
      m.add_row(cat(cat("comp_4[f", f) + "_n", n) + "]", "comp_4",
                LinExpr{{{app[n], 1.0}, {vid, -1.0}}, 0.0}, Sense::Ge, 0.0);
    NodeId ru = inst.ru_of(flow_gnb(f));
    m.add_row(cat("comp_5[f", f) + "]", "comp_5",
              LinExpr{{{app[ru], 1.0}, {fv[f].ru, -1.0}}, 0.0}, Sense::Ge, 0.0);
  }
}

void Builder::emit_switch_rows() {
  // A flow's segment passing through a switch requires it active.
  for (int f = 0; f < F; ++f) {
    for (const Node& n : topo.nodes) {
      if (n.kind != NodeKind::Switch) continue;
      LinExpr cd_thru, dr_thru;
      for (const auto& k : fv[f].cd_keys) {
        const Path& p = cd_path(f, k);
        if (std::find(p.nodes.begin(), p.nodes.end(), n.id) != p.nodes.end())
          cd_thru.terms.push_back({fv[f].cd.at(k), 1.0});
      }
      for (const auto& k : fv[f].dr_keys) {
        const Path& p = dr_path(f, k);
        if (std::find(p.nodes.begin(), p.nodes.end(), n.id) != p.nodes.end())
          dr_thru.terms.push_back({fv[f].dr.at(k), 1.0});
      }
      if (!cd_thru.terms.empty()) {
        cd_thru.terms.push_back({asw[n.id], -1.0});
        m.add_row(cat(cat("enr_2a[f", f) + "_n", n.id) + "]", "enr_2a", std::move(cd_thru),
                  Sense::Le, 0.0);
      }
      if (!dr_thru.terms.empty()) {
        dr_thru.terms.push_back({asw[n.id], -1.0});
        m.add_row(cat(cat("enr_2b[f", f) + "_n", n.id) + "]", "enr_2b", std::move(dr_thru),
                  Sense::Le, 0.0);
      }
    }
  }

  // Edge activity is the union of all per-flow presences.
  for (const Edge& e : topo.edges) {
    if (edge_used[e.id] == -1) continue;
    LinExpr ub;
    ub.terms.push_back({edge_used[e.id], 1.0});
    for (int f = 0; f < F; ++f) {
      for (auto& [ed, pvar] : fv[f].pmh)
        if (ed == e.id) {
          m.add_row(cat(cat("enr_3a[e", e.id) + "_PM_f", f) + "]", "enr_3a",
                    LinExpr{{{edge_used[e.id], 1.0}, {pvar, -1.0}}, 0.0}, Sense::Ge, 0.0);
          ub.terms.push_back({pvar, -1.0});
        }
      for (auto& [ed, pvar] : fv[f].pfh)
        if (ed == e.id) {
          m.add_row(cat(cat("enr_3a[e", e.id) + "_PF_f", f) + "]", "enr_3a",
                    LinExpr{{{edge_used[e.id], 1.0}, {pvar, -1.0}}, 0.0}, Sense::Ge, 0.0);
          ub.terms.push_back({pvar, -1.0});
        }
    }
    m.add_row(cat("enr_3b[e", e.id) + "]", "enr_3b", std::move(ub), Sense::Le, 0.0);
  }

  // Switch activity is the union of its incident edges' activity.
  for (const Node& n : topo.nodes) {
    if (n.kind != NodeKind::Switch) continue;
    LinExpr ub;
    ub.terms.push_back({asw[n.id], 1.0});
    for (EdgeId e : topo.incident(n.id)) {
      if (edge_used[e] == -1) continue;
      m.add_row(cat(cat("enr_4a[n", n.id) + "_e", e) + "]", "enr_4a",
                LinExpr{{{asw[n.id], 1.0}, {edge_used[e], -1.0}}, 0.0}, Sense::Ge, 0.0);
      ub.terms.push_back({edge_used[e], -1.0});
    }
    m.add_row(cat("enr_4b[n", n.id) + "]", "enr_4b", std::move(ub), Sense::Le, 0.0);
  }
}

void Builder::emit_energy_rows() {
  for (const Node& n : topo.nodes) {
    if (is_processing(n.kind)) {
      double slope =
          n.capacity_gops > 0 ? n.cpus * (c.w_full - c.w_idle) * c.period_h / n.capacity_gops : 0.0;
      double idle = n.cpus * c.w_idle * c.period_h;
      double big_m = n.cpus * c.w_full * c.period_h;
      m.add_row(cat("enr_1q[n", n.id) + "]", "enr_1q",
                LinExpr{{{qpp[n.id], 1.0}, {pp[n.id], -slope}}, 0.0}, Sense::Eq, idle);
      m.add_row(cat("enr_1a[n", n.id) + "]", "enr_1a",
                LinExpr{{{ypp[n.id], 1.0}, {app[n.id], -big_m}}, 0.0}, Sense::Le, 0.0,
                std::max(1.0, big_m));
      m.add_row(cat("enr_1b[n", n.id) + "]", "enr_1b",
                LinExpr{{{ypp[n.id], 1.0}, {qpp[n.id], -1.0}}, 0.0}, Sense::Le, 0.0,
                std::max(1.0, big_m));
      m.add_row(cat("enr_1c[n", n.id) + "]", "enr_1c",
                LinExpr{{{ypp[n.id], 1.0}, {qpp[n.id], -1.0}, {app[n.id], -big_m}}, 0.0}, Sense::Ge,
                -big_m, std::max(1.0, big_m));
      m.bigms.push_back({ypp[n.id], qpp[n.id], app[n.id], big_m});
    } else if (n.kind == NodeKind::Switch) {
      double fixed = (c.w_chassis + c.w_linecard + c.sw_infra_w) * c.period_h;
      int deg_used = 0;
      LinExpr q;
      q.terms.push_back({qsw[n.id], 1.0});
      for (EdgeId e : topo.incident(n.id))
        if (edge_used[e] != -1) {
          q.terms.push_back({edge_used[e], -c.w_port * c.period_h});
          ++deg_used;
        }
      double big_m = fixed + deg_used * c.w_port * c.period_h;
      m.add_row(cat("enr_5q[n", n.id) + "]", "enr_5q", std::move(q), Sense::Eq, fixed);
      m.add_row(cat("enr_6a[n", n.id) + "]", "enr_6a",
                LinExpr{{{zsw[n.id], 1.0}, {asw[n.id], -big_m}}, 0.0}, Sense::Le, 0.0,
                std::max(1.0, big_m));
      m.add_row(cat("enr_6b[n", n.id) + "]", "enr_6b",
                LinExpr{{{zsw[n.id], 1.0}, {qsw[n.id], -1.0}}, 0.0}, Sense::Le, 0.0,
                std::max(1.0, big_m));
      m.add_row(cat("enr_6c[n", n.id) + "]", "enr_6c",
                LinExpr{{{zsw[n.id], 1.0}, {qsw[n.id], -1.0}, {asw[n.id], -big_m}}, 0.0}, Sense::Ge,
                -big_m, std::max(1.0, big_m));
      m.bigms.push_back({zsw[n.id], qsw[n.id], asw[n.id], big_m});
    }
  }
}

void Builder::emit_objectives() {
  for (const Node& n : topo.nodes) {
    if (ypp[n.id] != -1) m.obj_energy.terms.push_back({ypp[n.id], 1.0});
    if (zsw[n.id] != -1) m.obj_energy.terms.push_back({zsw[n.id], 1.0});
  }
  for (int f = 0; f < F; ++f) m.obj_fh_latency.terms.push_back({fv[f].lfh, 1.0});
  if (std::isfinite(opts.lex_energy_cap)) {
    LinExpr capx = m.obj_energy;
    m.add_row("lex_energy_cap", "lex_energy_cap", std::move(capx), Sense::Le, opts.lex_energy_cap,
              std::max(1.0, opts.lex_energy_cap));
  }
}

void Builder::emit_groups() {
  for (int f = 0; f < F; ++f) {
    DecisionGroup g;
    g.gnb = flow_gnb(f);
    g.slice = flow_slice(f);
    const auto& ts = inst.tuples(g.gnb, g.slice);
    for (int ti = 0; ti < static_cast<int>(ts.size()); ++ti)
      g.atoms.push_back({ts[ti], {fv[f].x[ti]}});
    m.groups.push_back(std::move(g));
  }
}

void Builder::build() {
  m.mode = opts.mode;
  emit_flow_vars();
  emit_pair_vars();
  emit_infra_vars();
  emit_assignment_rows();
  emit_projection_rows();
  emit_product_rows();
  emit_latency_rows();
  emit_link_rows();
  emit_compute_rows();
  emit_switch_rows();
  emit_energy_rows();
  emit_objectives();
  emit_groups();
}

}  // namespace

MilpModel build_milp(const Instance& inst, const BuildOptions& opts) {
  Builder b(inst, opts);
  b.build();
  return std::move(b.m);
}

}  // namespace xhaul
