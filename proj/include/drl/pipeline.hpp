#ifndef DRL_PIPELINE_HPP
#define DRL_PIPELINE_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "drl/coupling.hpp"
#include "drl/milp.hpp"
#include "drl/plan.hpp"
#include "drl/preprocess.hpp"
#include "drl/scenario.hpp"
#include "drl/validator.hpp"

namespace drl {

enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,
  kExitNotOptimal = 2,
  kExitInfeasible = 3,
  kExitInvalid = 4,
};

struct RunConfig {
  std::filesystem::path scenario;
  std::string backend = "highs";
  SolveOptions solve;
  int sides = 8;
  DemandTerm demand_term = DemandTerm::Real;
  bool preassign = true;
  AssignMode assign_mode = AssignMode::Minimal;
  bool node_reduction = true;
  bool crews = true;
  bool sources = true;
  bool repair_once_cut = true;
  double tolerance = 1e-6;
  std::optional<std::filesystem::path> out_dir;
  // Precomputed preprocessing results; they take precedence over the toggles.
  std::optional<TaskAssignment> tasks;
  std::optional<std::vector<int>> candidate_nodes;
};

struct RunOutcome {
  SolveStatus status = SolveStatus::Error;
  std::optional<RestorationPlan> plan;
  std::optional<ViolationReport> report;
  std::optional<PreAssignment> assignment;
  std::optional<CandidateSelection> selection;
  std::size_t binaries = 0;
  std::size_t constraints = 0;
  double wall_time = 0.0;  // seconds, model solve only
  int exit_code = kExitError;
  std::string message;  // why no plan was produced
};

CoOptConfig coopt_config(const Scenario& s, const RunConfig& cfg, RunOutcome* outcome = nullptr);

RunOutcome run_solve(const Scenario& s, const RunConfig& cfg);
RunOutcome run_solve(const RunConfig& cfg);

// Writes plan.json, routes.txt, itineraries.txt, switches.txt, restored.csv,
// power.csv and report.txt.
void write_outputs(const Scenario& s, const RunOutcome& outcome, const std::filesystem::path& dir);

struct NamedConfig {
  std::string name;
  RunConfig config;
};

struct Comparison {
  std::vector<std::string> names;
  std::vector<std::vector<double>> served_kw;  // [config][t]
  std::vector<RunOutcome> outcomes;
};

// Throws std::invalid_argument when the scenarios' horizons differ.
Comparison run_compare(const std::vector<NamedConfig>& configs);

}  // namespace drl

#endif  // DRL_PIPELINE_HPP
