#include "drl/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <stdexcept>

#include <fmt/core.h>

#include "drl/report.hpp"

namespace drl {

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

CoOptConfig coopt_config(const Scenario& s, const RunConfig& cfg, RunOutcome* outcome) {
  CoOptConfig cc;
  cc.enable_crews = cfg.crews;
  cc.enable_sources = cfg.sources;
  cc.sides = cfg.sides;
  cc.demand_term = cfg.demand_term;
  cc.repair_once_cut = cfg.repair_once_cut;
  PreprocessOptions popts;
  popts.solve = cfg.solve;
  popts.solve.time_limit = kInf;
  popts.backend = cfg.backend;
  popts.sides = cfg.sides;
  if (cfg.crews && cfg.tasks) {
    cc.tasks = cfg.tasks;
  } else if (cfg.crews && cfg.preassign) {
    PreAssignment pa = preassign_min_repairs(s, cfg.assign_mode, popts);
    cc.tasks = pa.tasks(s.depots.size());
    if (outcome) outcome->assignment = std::move(pa);
  }
  if (cfg.sources && cfg.candidate_nodes) {
    cc.candidate_nodes = cfg.candidate_nodes;
  } else if (cfg.sources && cfg.node_reduction && !s.sources.empty()) {
    const auto islands = detect_islands(s);
    CandidateSelection sel = select_candidates(s, islands, popts);
    cc.candidate_nodes = sel.selected;
    if (outcome) outcome->selection = std::move(sel);
  }
  return cc;
}

RunOutcome run_solve(const Scenario& s, const RunConfig& cfg) {
  RunOutcome out;
  CoOptConfig cc;
  try {
    cc = coopt_config(s, cfg, &out);
  } catch (const PreprocessError& e) {
    out.status = SolveStatus::Infeasible;
    out.exit_code = kExitInfeasible;
    out.message = std::string("preprocessing: ") + e.what();
    return out;
  }
  const CoOptModel model = build_coopt_model(s, cc);
  out.binaries = model.model.num_binaries();
  out.constraints = model.model.num_constraints();
  const SolveResult r = solve(model.model, cfg.solve, cfg.backend);
  out.status = r.status;
  out.wall_time = r.wall_time;
  if (!r.has_solution()) {
    out.message = r.message;
    out.exit_code = r.status == SolveStatus::Error ? kExitError : kExitInfeasible;
    return out;
  }
  out.plan = decode_plan(s, model, r);
  out.report = validate_plan(s, *out.plan, cfg.tolerance);
  if (!out.report->feasible) out.exit_code = kExitInvalid;
  else out.exit_code = r.status == SolveStatus::Optimal ? kExitOk : kExitNotOptimal;
  if (cfg.out_dir) write_outputs(s, out, *cfg.out_dir);
  return out;
}

RunOutcome run_solve(const RunConfig& cfg) { return run_solve(load_scenario(cfg.scenario), cfg); }

void write_outputs(const Scenario& s, const RunOutcome& outcome, const std::filesystem::path& dir) {
  if (!outcome.plan) return;
  std::filesystem::create_directories(dir);
  const auto& plan = *outcome.plan;
  save_plan(plan, dir / "plan.json");
  write_text(dir / "routes.txt", render_routes(s, routes_from_positions(s, plan.crew_at)));
  write_text(dir / "itineraries.txt", render_itineraries(s, schedules_of(s, plan)));
  write_text(dir / "switches.txt", render_switches(s, plan.closed));
  write_text(dir / "restored.csv", restored_csv(s, plan));
  write_text(dir / "power.csv", power_csv(s, plan));
  if (outcome.report) write_text(dir / "report.txt", format_report(*outcome.report));
}

Comparison run_compare(const std::vector<NamedConfig>& configs) {
  Comparison out;
  int periods = -1;
  std::vector<Scenario> scenarios;
  for (const auto& nc : configs) {
    scenarios.push_back(load_scenario(nc.config.scenario));
    if (periods >= 0 && scenarios.back().periods() != periods)
      throw std::invalid_argument(fmt::format("config {}: horizon differs from the first config", nc.name));
    periods = scenarios.back().periods();
  }
  for (std::size_t k = 0; k < configs.size(); ++k) {
    RunOutcome r = run_solve(scenarios[k], configs[k].config);
    out.names.push_back(configs[k].name);
    out.served_kw.push_back(r.plan ? served_kw(scenarios[k], r.plan->restored) : std::vector<double>(periods, 0.0));
    out.outcomes.push_back(std::move(r));
  }
  return out;
}

}  // namespace drl
