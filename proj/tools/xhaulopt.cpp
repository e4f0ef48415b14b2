#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "xhaul/milp.hpp"
#include "xhaul/reporting.hpp"

using namespace xhaul;

namespace {

ObjectiveMode parse_mode(const std::string& s) {
  if (s == "energy") return ObjectiveMode::EnergyMin;
  if (s == "fh") return ObjectiveMode::FhLatencyMin;
  if (s == "lex") return ObjectiveMode::LexicographicBiObjective;
  throw CLI::ValidationError("--mode", "expected energy|fh|lex");
}

SolverSpec parse_solver(const std::string& s) {
  if (s == "heuristic") return {SolverKind::Heuristic, ObjectiveMode::EnergyMin};
  auto dash = s.find('-');
  std::string kind = s.substr(0, dash);
  std::string mode = dash == std::string::npos ? "energy" : s.substr(dash + 1);
  SolverSpec spec;
  if (kind == "milp")
    spec.kind = SolverKind::Milp;
  else if (kind == "oracle")
    spec.kind = SolverKind::Oracle;
  else
    throw CLI::ValidationError("--solver", "expected heuristic|milp[-MODE]|oracle[-MODE]");
  spec.mode = parse_mode(mode);
  return spec;
}

Scenario load_with_overrides(const std::string& path, int k_paths, int iterations) {
  Scenario s = load_scenario_file(path);
  if (k_paths > 0) s.solver.k_paths = k_paths;
  if (iterations > 0) s.solver.iterations = iterations;
  return s;
}

int run_and_report(const Scenario& s, RunConfig& cfg, const std::string& out_dir, bool compare) {
  cfg.heur.iterations = s.solver.iterations;
  std::vector<RunRecord> records = run_solvers(s, cfg);
  write_reports(s, records, out_dir, cfg);
  if (compare)
    write_compare_csv(compare_rows(records), out_dir + "/compare.csv");
  bool all_ok = true;
  for (const RunRecord& r : records) {
    if (!r.ok) {
      all_ok = false;
      std::cerr << r.solver << " hour " << r.hour << ": " << r.status << "\n";
    }
  }
  std::cout << "wrote " << records.size() << " run records to " << out_dir << "\n";
  return all_ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"energy/latency-optimal virtual configuration planner"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir = "out", out_file, format = "lp", topology = "hier";
  std::vector<std::string> solver_tokens;
  std::string mode_token = "energy";
  std::vector<int> hours;
  int k_paths = 0, iterations = 0, hour = 0, gnbs = 6;
  long long budget = EnumerationBudget{}.max_nodes;
  int threads = 0;
  unsigned long long seed = 1;
  bool dedup = false;

  CLI::App* solve = app.add_subcommand("solve", "solve a scenario and write report tables");
  solve->add_option("--scenario", scenario_path, "scenario json")->required();
  solve->add_option("--out", out_dir, "output directory");
  solve->add_option("--solver", solver_tokens,
                    "heuristic, milp-{energy,fh,lex} or oracle-{energy,fh,lex}; repeatable");
  solve->add_option("--hours", hours, "hours to solve (default all 24)");
  solve->add_option("--k-paths", k_paths, "override candidate paths per node pair");
  solve->add_option("--iterations", iterations, "override improvement sweeps");
  solve->add_option("--budget", budget, "enumeration node budget");
  solve->add_option("--threads", threads, "worker pool cap (or env XHAULOPT_THREADS)");
  solve->add_flag("--dedup", dedup, "solve one representative hour per repeated demand level");

  CLI::App* compare = app.add_subcommand("compare", "run several solvers and tabulate gaps");
  compare->add_option("--scenario", scenario_path, "scenario json")->required();
  compare->add_option("--out", out_dir, "output directory");
  compare->add_option("--solver", solver_tokens, "solvers to compare; repeatable")->required();
  compare->add_option("--hours", hours, "hours to solve (default all 24)");
  compare->add_option("--k-paths", k_paths, "override candidate paths per node pair");
  compare->add_option("--iterations", iterations, "override improvement sweeps");
  compare->add_option("--budget", budget, "enumeration node budget");
  compare->add_option("--threads", threads, "worker pool cap");
  compare->add_flag("--dedup", dedup, "solve one representative hour per repeated demand level");

  CLI::App* exportc = app.add_subcommand("export-milp", "write the model for one hour");
  exportc->add_option("--scenario", scenario_path, "scenario json")->required();
  exportc->add_option("--hour", hour, "hour of day")->check(CLI::Range(0, 23));
  exportc->add_option("--mode", mode_token, "energy|fh|lex");
  exportc->add_option("--format", format, "lp|mps");
  exportc->add_option("--out", out_file, "output file")->required();
  exportc->add_option("--k-paths", k_paths, "override candidate paths per node pair");

  CLI::App* gen = app.add_subcommand("gen-scenario", "emit a synthetic scenario");
  gen->add_option("--gnbs", gnbs, "number of gNBs");
  gen->add_option("--topology", topology, "hier|mesh");
  gen->add_option("--seed", seed, "rng seed");
  gen->add_option("--out", out_file, "output file")->required();

  CLI::App* validate = app.add_subcommand("validate", "check a scenario file");
  validate->add_option("--scenario", scenario_path, "scenario json")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed() || compare->parsed()) {
      Scenario s = load_with_overrides(scenario_path, k_paths, iterations);
      RunConfig cfg;
      if (solver_tokens.empty()) solver_tokens = {"heuristic"};
      for (const std::string& t : solver_tokens) cfg.solvers.push_back(parse_solver(t));
      cfg.hours = hours;
      cfg.budget.max_nodes = budget;
      cfg.threads = threads;
      cfg.dedup_hours = dedup;
      return run_and_report(s, cfg, out_dir, compare->parsed());
    }
    if (exportc->parsed()) {
      Scenario s = load_with_overrides(scenario_path, k_paths, 0);
      Instance inst(s, hour);
      BuildOptions opts;
      opts.mode = parse_mode(mode_token);
      MilpModel m = build_milp(inst, opts);
      std::ofstream f(out_file, std::ios::binary);
      if (!f) throw std::runtime_error("cannot write " + out_file);
      if (format == "lp")
        write_lp(m, f);
      else if (format == "mps")
        write_mps(m, f);
      else
        throw CLI::ValidationError("--format", "expected lp|mps");
      std::cout << "wrote " << m.vars.size() << " variables, " << m.rows.size() << " rows\n";
      return 0;
    }
    if (gen->parsed()) {
      GenParams p;
      p.gnbs = gnbs;
      p.topology = topology;
      p.seed = seed;
      nlohmann::json doc = gen_scenario(p);
      std::ofstream f(out_file, std::ios::binary);
      if (!f) throw std::runtime_error("cannot write " + out_file);
      f << doc.dump(2) << "\n";
      std::cout << "wrote " << out_file << "\n";
      return 0;
    }
    if (validate->parsed()) {
      Scenario s = load_scenario_file(scenario_path);
      char hex[32];
      std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(s.content_hash));
      std::cout << "ok: " << s.n_gnbs() << " gnbs, " << s.topology.nodes.size() << " nodes, hash "
                << hex << "\n";
      return 0;
    }
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
