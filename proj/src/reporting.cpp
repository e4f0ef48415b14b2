#include "xhaul/reporting.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <thread>

#include "json.hpp"
#include "xhaul/oracle.hpp"

namespace xhaul {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string solver_name(const SolverSpec& s) {
  switch (s.kind) {
    case SolverKind::Heuristic: return "heuristic";
    case SolverKind::Milp:
      switch (s.mode) {
        case ObjectiveMode::EnergyMin: return "milp-energy";
        case ObjectiveMode::FhLatencyMin: return "milp-fh";
        case ObjectiveMode::LexicographicBiObjective: return "milp-lex";
      }
      break;
    case SolverKind::Oracle:
      switch (s.mode) {
        case ObjectiveMode::EnergyMin: return "oracle-energy";
        case ObjectiveMode::FhLatencyMin: return "oracle-fh";
        case ObjectiveMode::LexicographicBiObjective: return "oracle-lex";
      }
      break;
  }
  return "?";
}

namespace {

RunRecord run_one(const Scenario& s, const SolverSpec& spec, int hour, const RunConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.solver = solver_name(spec);
  rec.mode = spec.mode;
  rec.hour = hour;
  Instance inst(s, hour);

  switch (spec.kind) {
    case SolverKind::Heuristic: {
      HeuristicResult r = heuristic_run(inst, cfg.heur);
      rec.ok = r.ok;
      rec.status = r.ok ? "optimal" : "unplaceable";
      if (r.ok) {
        rec.solution = r.solution;
        rec.eval = r.eval;
        rec.objective = r.eval.energy_wh_total;
      }
      rec.nodes = r.stats.attempts;
      break;
    }
    case SolverKind::Milp: {
      MilpOutcome r = solve_milp(inst, spec.mode, cfg.budget);
      rec.ok = r.status == SolveStatus::Optimal;
      rec.status = to_string(r.status);
      if (rec.ok) {
        rec.solution = r.solution;
        rec.eval = evaluate(inst, r.solution);
        rec.objective = r.objective;
      }
      rec.nodes = r.stats.nodes;
      break;
    }
    case SolverKind::Oracle: {
      OracleResult r = enumerate_optimum(inst, spec.mode, cfg.budget);
      rec.ok = r.status == OracleStatus::Optimal;
      rec.status = r.status == OracleStatus::Optimal      ? "optimal"
                   : r.status == OracleStatus::NoFeasible ? "infeasible"
                                                          : "budget_exceeded";
      if (rec.ok) {
        rec.solution = r.best;
        rec.eval = evaluate(inst, r.best);
        rec.objective = spec.mode == ObjectiveMode::EnergyMin ? r.energy_wh : r.sum_fh_us;
      }
      rec.nodes = r.nodes_explored;
      break;
    }
  }
  rec.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

int pool_size(const RunConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  if (const char* env = std::getenv("XHAULOPT_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

std::vector<RunRecord> run_solvers(const Scenario& s, const RunConfig& cfg) {
  std::vector<int> hours = cfg.hours;
  if (hours.empty())
    for (int h = 0; h < 24; ++h) hours.push_back(h);

  // With identical demand levels the whole instance is identical: solve one
  // representative hour per level and copy the record for its siblings.
  std::map<int, std::vector<int>> level_hours;  // representative -> hours
  if (cfg.dedup_hours) {
    std::map<double, int> rep_by_level;
    for (int h : hours) {
      double level = s.hourly_pattern[h];
      auto [it, fresh] = rep_by_level.emplace(level, h);
      level_hours[it->second].push_back(h);
      (void)fresh;
    }
  } else {
    for (int h : hours) level_hours[h].push_back(h);
  }

  struct Item {
    int spec;
    int rep_hour;
  };
  std::vector<Item> items;
  for (int sp = 0; sp < static_cast<int>(cfg.solvers.size()); ++sp)
    for (auto& [rep, hs] : level_hours) items.push_back({sp, rep});

  std::vector<RunRecord> reps(items.size());
  std::atomic<size_t> next{0};
  int n_threads = std::min(pool_size(cfg), std::max(1, static_cast<int>(items.size())));
  auto worker = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= items.size()) return;
      reps[i] = run_one(s, cfg.solvers[items[i].spec], items[i].rep_hour, cfg);
    }
  };
  std::vector<std::thread> threads;
  for (int t = 0; t < n_threads; ++t) threads.emplace_back(worker);
  for (std::thread& t : threads) t.join();

  std::vector<RunRecord> out;
  for (size_t i = 0; i < items.size(); ++i) {
    for (int h : level_hours[items[i].rep_hour]) {
      RunRecord r = reps[i];
      r.hour = h;
      out.push_back(std::move(r));
    }
  }
  std::stable_sort(out.begin(), out.end(), [&](const RunRecord& a, const RunRecord& b) {
    auto order = [&](const RunRecord& r) {
      for (size_t sp = 0; sp < cfg.solvers.size(); ++sp)
        if (solver_name(cfg.solvers[sp]) == r.solver) return sp;
      return cfg.solvers.size();
    };
    if (a.hour != b.hour) return a.hour < b.hour;
    return order(a) < order(b);
  });
  return out;
}

namespace {

void write_energy_table(const Scenario& s, const std::vector<RunRecord>& rs, std::ostream& os) {
  os << "solver,hour,energy_wh_total,pp_energy_wh,sw_energy_wh\n";
  for (const RunRecord& r : rs) {
    if (!r.ok) continue;
    double pp = 0, sw = 0;
    for (const Node& n : s.topology.nodes) {
      if (is_processing(n.kind)) pp += r.eval.node_energy_wh[n.id];
      if (n.kind == NodeKind::Switch) sw += r.eval.node_energy_wh[n.id];
    }
    os << r.solver << "," << r.hour << "," << format_double(r.eval.energy_wh_total) << ","
       << format_double(pp) << "," << format_double(sw) << "\n";
  }
}

void write_latency_cdf(const Scenario& s, const std::vector<RunRecord>& rs, std::ostream& os) {
  os << "solver,slice,segment,latency_us,cum_fraction\n";
  std::vector<std::string> solvers;
  for (const RunRecord& r : rs)
    if (std::find(solvers.begin(), solvers.end(), r.solver) == solvers.end())
      solvers.push_back(r.solver);
  for (const std::string& sol : solvers) {
    for (Slice sl : kAllSlices) {
      for (Segment seg : {Segment::MH, Segment::FH}) {
        std::vector<double> vals;
        for (const RunRecord& r : rs) {
          if (!r.ok || r.solver != sol) continue;
          for (int g = 0; g < s.n_gnbs(); ++g) {
            const auto& ev = r.eval.slices[g * 3 + static_cast<int>(sl)];
            if (!ev) continue;
            vals.push_back(seg == Segment::MH ? ev->mh.total() : ev->fh.total());
          }
        }
        std::sort(vals.begin(), vals.end());
        for (size_t i = 0; i < vals.size(); ++i)
          os << sol << "," << to_string(sl) << "," << (seg == Segment::MH ? "mh" : "fh") << ","
             << format_double(vals[i]) << ","
             << format_double(static_cast<double>(i + 1) / vals.size()) << "\n";
      }
    }
  }
}

void write_vc_table(const std::vector<RunRecord>& rs, std::ostream& os) {
  os << "solver,hour,gnb,slice,vc\n";
  for (const RunRecord& r : rs) {
    if (!r.ok) continue;
    for (const Assignment& a : r.solution.assigns)
      os << r.solver << "," << r.hour << "," << a.gnb << "," << to_string(a.slice) << ","
         << to_string(a.vc) << "\n";
  }
}

void write_pp_table(const Scenario& s, const std::vector<RunRecord>& rs, std::ostream& os) {
  os << "solver,hour,node,gops_used,capacity_gops,utilization,active\n";
  for (const RunRecord& r : rs) {
    if (!r.ok) continue;
    for (const Node& n : s.topology.nodes) {
      if (!is_processing(n.kind)) continue;
      double used = r.eval.state.gops_used[n.id];
      double util = n.capacity_gops > 0 ? used / n.capacity_gops : 0.0;
      os << r.solver << "," << r.hour << "," << n.id << "," << format_double(used) << ","
         << format_double(n.capacity_gops) << "," << format_double(util) << ","
         << int(r.eval.state.active_pp[n.id]) << "\n";
    }
  }
}

void write_edge_table(const Scenario& s, const std::vector<RunRecord>& rs, std::ostream& os) {
  os << "solver,hour,edge,node_a,node_b,mh_mbps,fh_mbps,total_mbps,capacity_mbps\n";
  for (const RunRecord& r : rs) {
    if (!r.ok) continue;
    for (const Edge& e : s.topology.edges) {
      double mh = r.eval.state.mh_mbps[e.id], fh = r.eval.state.fh_mbps[e.id];
      os << r.solver << "," << r.hour << "," << e.id << "," << e.a << "," << e.b << ","
         << format_double(mh) << "," << format_double(fh) << "," << format_double(mh + fh) << ","
         << format_double(e.capacity_gbps * 1000.0) << "\n";
    }
  }
}

}  // namespace

void write_reports(const Scenario& s, const std::vector<RunRecord>& records,
                   const std::string& out_dir, const RunConfig& cfg) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  auto open = [&](const char* name) {
    std::ofstream f(fs::path(out_dir) / name, std::ios::binary);
    if (!f) throw std::runtime_error(std::string("cannot write ") + name);
    return f;
  };
  {
    auto f = open("energy_by_hour.csv");
    write_energy_table(s, records, f);
  }
  {
    auto f = open("latency_cdf_points.csv");
    write_latency_cdf(s, records, f);
  }
  {
    auto f = open("vc_selection_by_hour.csv");
    write_vc_table(records, f);
  }
  {
    auto f = open("pp_utilization_by_hour.csv");
    write_pp_table(s, records, f);
  }
  {
    auto f = open("edge_load_by_hour.csv");
    write_edge_table(s, records, f);
  }

  json man;
  man["schema_version"] = 1;
  char hex[32];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(s.content_hash));
  man["scenario_hash"] = hex;
  man["k_paths"] = s.solver.k_paths;
  man["iterations"] = cfg.heur.iterations;
  man["dedup_hours"] = cfg.dedup_hours;
  json solvers = json::array();
  for (const SolverSpec& sp : cfg.solvers) solvers.push_back(solver_name(sp));
  man["solvers"] = solvers;
  json recs = json::array();
  for (const RunRecord& r : records) {
    json jr;
    jr["solver"] = r.solver;
    jr["hour"] = r.hour;
    jr["status"] = r.status;
    jr["ok"] = r.ok;
    if (r.ok) {
      jr["objective"] = r.objective;
      jr["energy_wh"] = r.eval.energy_wh_total;
      jr["sum_fh_us"] = r.eval.sum_fh_latency_us;
      jr["sum_mh_us"] = r.eval.sum_mh_latency_us;
      json ne = json::array();
      for (double v : r.eval.node_energy_wh) ne.push_back(v);
      jr["node_energy_wh"] = ne;
    }
    jr["nodes"] = r.nodes;
    jr["wall_ms"] = r.wall_ms;
    recs.push_back(std::move(jr));
  }
  man["records"] = std::move(recs);
  auto f = open("manifest.json");
  f << man.dump(2) << "\n";
}

std::vector<CompareRow> compare_rows(const std::vector<RunRecord>& records) {
  std::map<int, double> best;
  for (const RunRecord& r : records)
    if (r.ok) {
      auto it = best.find(r.hour);
      double e = r.eval.energy_wh_total;
      if (it == best.end() || e < it->second) best[r.hour] = e;
    }
  std::vector<CompareRow> out;
  for (const RunRecord& r : records) {
    if (!r.ok) continue;
    double b = best.at(r.hour);
    double e = r.eval.energy_wh_total;
    out.push_back({r.hour, r.solver, e, b, b > 0 ? (e - b) / b : 0.0});
  }
  return out;
}

void write_compare_csv(const std::vector<CompareRow>& rows, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "hour,solver,energy_wh,best_energy_wh,gap_frac\n";
  for (const CompareRow& r : rows)
    f << r.hour << "," << r.solver << "," << format_double(r.energy_wh) << ","
      << format_double(r.best_energy_wh) << "," << format_double(r.gap_frac) << "\n";
}

}  // namespace xhaul
