#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <nlohmann/json.hpp>

#include "drl/coupling.hpp"
#include "drl/pipeline.hpp"
#include "drl/preprocess.hpp"
#include "drl/report.hpp"
#include "drl/scenario.hpp"
#include "drl/validator.hpp"

using nlohmann::json;

namespace {

struct ModelFlags {
  std::string backend = "highs";
  double time_limit = 600.0;
  double gap = 1e-4;
  int sides = 8;
  int seed = 0;
  std::string demand_term = "real";
  std::string assign = "minimal";
  bool no_preassign = false;
  bool no_node_reduction = false;
  bool crews_only = false;
  bool sources_only = false;
  bool no_repair_once_cut = false;
  bool verbose = false;
  std::string tasks_file;
  std::string nodes_file;
};

void add_model_flags(CLI::App* cmd, ModelFlags& f) {
  cmd->add_option("--backend", f.backend, "MILP backend (env DRL_BACKEND overrides the default)");
  cmd->add_option("--time-limit", f.time_limit, "Solver time limit in seconds");
  cmd->add_option("--gap", f.gap, "Relative MIP gap target");
  cmd->add_option("--sides", f.sides, "Polygon sides for the capacity cuts")->check(CLI::IsMember({4, 8, 12, 16}));
  cmd->add_option("--seed", f.seed, "Backend random seed");
  cmd->add_option("--demand-term", f.demand_term, "Objective load term")->check(CLI::IsMember({"real", "reactive"}));
  cmd->add_option("--assign", f.assign, "Pre-assignment mode")->check(CLI::IsMember({"minimal", "all"}));
  cmd->add_flag("--no-preassign", f.no_preassign, "Let every crew consider every damaged component");
  cmd->add_flag("--no-node-reduction", f.no_node_reduction, "Use every candidate node");
  cmd->add_flag("--crews-only", f.crews_only, "Disable mobile sources");
  cmd->add_flag("--sources-only", f.sources_only, "Disable repair crews");
  cmd->add_flag("--no-repair-once-cut", f.no_repair_once_cut, "Drop the repair-once tightening cut");
  cmd->add_option("--tasks", f.tasks_file, "Pre-assignment JSON from `preassign`")->check(CLI::ExistingFile);
  cmd->add_option("--nodes", f.nodes_file, "Candidate selection JSON from `select-nodes`")->check(CLI::ExistingFile);
  cmd->add_flag("-v,--verbose", f.verbose, "Show solver output");
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return json::parse(in);
}

drl::RunConfig run_config(const drl::Scenario& s, const std::string& scenario, const ModelFlags& f) {
  drl::RunConfig cfg;
  cfg.scenario = scenario;
  cfg.backend = f.backend;
  cfg.solve.time_limit = f.time_limit;
  cfg.solve.mip_gap = f.gap;
  cfg.solve.seed = f.seed;
  cfg.solve.verbose = f.verbose;
  cfg.sides = f.sides;
  cfg.demand_term = f.demand_term == "reactive" ? drl::DemandTerm::Reactive : drl::DemandTerm::Real;
  cfg.assign_mode = f.assign == "all" ? drl::AssignMode::All : drl::AssignMode::Minimal;
  cfg.preassign = !f.no_preassign;
  cfg.node_reduction = !f.no_node_reduction;
  cfg.crews = !f.sources_only;
  cfg.sources = !f.crews_only;
  cfg.repair_once_cut = !f.no_repair_once_cut;
  if (!f.tasks_file.empty()) {
    drl::TaskAssignment tasks(s.depots.size());
    for (const auto& a : read_json(f.tasks_file).at("assignment")) {
      const int depot = s.depot_index(a.at("depot").get<int>());
      const int comp = a.at("component").get<int>();
      int m = -1;
      for (std::size_t k = 0; k < s.damaged.size(); ++k)
        if (s.damaged[k].id == comp) m = static_cast<int>(k);
      if (depot < 0 || m < 0) throw std::runtime_error("tasks file does not match the scenario");
      tasks[depot].push_back(m);
    }
    cfg.tasks = tasks;
  }
  if (!f.nodes_file.empty()) {
    std::vector<int> nodes;
    for (const auto& id : read_json(f.nodes_file).at("selected")) {
      const int i = s.node_index(id.get<int>());
      if (i < 0) throw std::runtime_error("nodes file does not match the scenario");
      nodes.push_back(i);
    }
    cfg.candidate_nodes = nodes;
  }
  return cfg;
}

drl::PreprocessOptions preprocess_options(const std::string& backend) {
  drl::PreprocessOptions o;
  o.backend = backend;
  return o;
}

void emit(const json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(out);
  if (!f) throw std::runtime_error("cannot write " + out);
  f << j.dump(2) << "\n";
}

std::vector<int> ids(const drl::Scenario& s, const std::vector<int>& nodes) {
  std::vector<int> out;
  for (int i : nodes) out.push_back(s.nodes[i].id);
  return out;
}

void print_summary(const drl::Scenario& s, const drl::RunOutcome& r) {
  fmt::print("status: {}\n", drl::to_string(r.status));
  if (!r.message.empty()) fmt::print("{}\n", r.message);
  fmt::print("binaries: {}  constraints: {}  solve time: {:.2f} s\n", r.binaries, r.constraints, r.wall_time);
  if (!r.plan) return;
  const auto& plan = *r.plan;
  fmt::print("objective: {:.6f}  gap: {:.2e}\n\n", plan.objective, plan.mip_gap);
  fmt::print("crew routes\n{}\n", drl::render_routes(s, drl::routes_from_positions(s, plan.crew_at)));
  if (!plan.source_at.empty())
    fmt::print("source itineraries\n{}\n", drl::render_itineraries(s, drl::schedules_of(s, plan)));
  fmt::print("switch actions\n{}\n", drl::render_switches(s, plan.closed));
  fmt::print("restored load\n{}\n", drl::restored_csv(s, plan));
  if (r.report) fmt::print("validation\n{}", drl::format_report(*r.report));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Post-disaster distribution restoration with repair crews and mobile power sources"};
  app.require_subcommand(1);
  std::string default_backend = "highs";
  if (const char* env = std::getenv("DRL_BACKEND"); env && *env) default_backend = env;

  std::string scenario, plan_path, out, mode = "minimal";
  double tolerance = 1e-6;
  ModelFlags flags;
  flags.backend = default_backend;
  std::vector<std::string> strategies{"both", "crews-only", "sources-only"};

  auto* pre = app.add_subcommand("preassign", "Pre-assign a minimal set of repair tasks to depots");
  pre->add_option("scenario", scenario)->required()->check(CLI::ExistingFile);
  pre->add_option("--mode", mode)->check(CLI::IsMember({"minimal", "all"}));
  pre->add_option("-o,--out", out, "Write JSON here instead of stdout");

  auto* isl = app.add_subcommand("islands", "List physical islands and their candidate nodes");
  isl->add_option("scenario", scenario)->required()->check(CLI::ExistingFile);
  isl->add_option("-o,--out", out);

  auto* sel = app.add_subcommand("select-nodes", "Select one candidate node per island");
  sel->add_option("scenario", scenario)->required()->check(CLI::ExistingFile);
  sel->add_option("-o,--out", out);

  auto* sol = app.add_subcommand("solve", "Solve the co-optimization and write the plan and reports");
  sol->add_option("scenario", scenario)->required()->check(CLI::ExistingFile);
  sol->add_option("-o,--out", out, "Output directory");
  add_model_flags(sol, flags);

  auto* val = app.add_subcommand("validate", "Check a plan file against a scenario");
  val->add_option("scenario", scenario)->required()->check(CLI::ExistingFile);
  val->add_option("plan", plan_path)->required()->check(CLI::ExistingFile);
  val->add_option("--tolerance", tolerance);

  auto* cmp = app.add_subcommand("compare", "Restored-load curves for several logistics strategies");
  cmp->add_option("scenario", scenario)->required()->check(CLI::ExistingFile);
  cmp->add_option("--strategies", strategies)->delimiter(',')->check(CLI::IsMember({"both", "crews-only", "sources-only"}));
  cmp->add_option("-o,--out", out, "CSV path");
  add_model_flags(cmp, flags);

  auto* lp = app.add_subcommand("export-lp", "Write the co-optimization model in LP format");
  lp->add_option("scenario", scenario)->required()->check(CLI::ExistingFile);
  lp->add_option("-o,--out", out)->required();
  add_model_flags(lp, flags);

  CLI11_PARSE(app, argc, argv);

  try {
    const drl::Scenario s = drl::load_scenario(scenario);
    if (pre->parsed()) {
      const auto mode_enum = mode == "all" ? drl::AssignMode::All : drl::AssignMode::Minimal;
      const auto pa = drl::preassign_min_repairs(s, mode_enum, preprocess_options(default_backend));
      json j{{"mode", mode}, {"total_distance", pa.total_distance}, {"assignment", json::array()},
             {"unassigned", json::array()}};
      for (int m : pa.assigned)
        j["assignment"].push_back({{"component", s.damaged[m].id},
                                   {"branch", s.branch_label(s.damaged[m].branch)},
                                   {"depot", s.depots[pa.depot_of[m]].id}});
      for (int m : pa.unassigned)
        j["unassigned"].push_back({{"component", s.damaged[m].id}, {"branch", s.branch_label(s.damaged[m].branch)}});
      emit(j, out);
      return 0;
    }
    if (isl->parsed()) {
      const auto part = drl::detect_islands(s);
      json j{{"islands", json::array()}};
      for (std::size_t k = 0; k < part.islands.size(); ++k)
        j["islands"].push_back({{"nodes", ids(s, part.islands[k])}, {"candidates", ids(s, part.candidate_sets[k])}});
      emit(j, out);
      return 0;
    }
    if (sel->parsed()) {
      const auto selection = drl::select_candidates(s, drl::detect_islands(s), preprocess_options(default_backend));
      emit(json{{"selected", ids(s, selection.selected)}, {"total_distance", selection.total_distance}}, out);
      return 0;
    }
    if (sol->parsed()) {
      auto cfg = run_config(s, scenario, flags);
      if (!out.empty()) cfg.out_dir = out;
      const auto r = drl::run_solve(s, cfg);
      print_summary(s, r);
      return r.exit_code;
    }
    if (val->parsed()) {
      const auto report = drl::validate_plan(s, drl::load_plan(plan_path), tolerance);
      std::cout << drl::format_report(report);
      return report.feasible ? drl::kExitOk : drl::kExitInvalid;
    }
    if (cmp->parsed()) {
      std::vector<drl::NamedConfig> configs;
      for (const auto& name : strategies) {
        ModelFlags f = flags;
        f.crews_only = name == "crews-only";
        f.sources_only = name == "sources-only";
        configs.push_back({name, run_config(s, scenario, f)});
      }
      const auto c = drl::run_compare(configs);
      const std::string csv = drl::compare_csv(c.names, c.served_kw);
      if (out.empty()) std::cout << csv;
      else std::ofstream(out) << csv;
      int code = drl::kExitOk;
      for (const auto& o : c.outcomes) code = std::max(code, o.exit_code);
      return code;
    }
    if (lp->parsed()) {
      const auto cfg = run_config(s, scenario, flags);
      const auto model = drl::build_coopt_model(s, drl::coopt_config(s, cfg));
      std::ofstream f(out);
      if (!f) throw std::runtime_error("cannot write " + out);
      drl::write_lp(model.model, f);
      fmt::print("{} variables ({} binary), {} constraints\n", model.model.num_vars(), model.model.num_binaries(),
                 model.model.num_constraints());
      return 0;
    }
  } catch (const drl::ScenarioError& e) {
    fmt::print(stderr, "scenario error: {}\n", e.what());
    return drl::kExitError;
  } catch (const drl::PreprocessError& e) {
    fmt::print(stderr, "preprocessing failed: {}\n", e.what());
    return drl::kExitInfeasible;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return drl::kExitError;
  }
  return drl::kExitError;
}
