#ifndef DRL_COUPLING_HPP
#define DRL_COUPLING_HPP

#include <optional>
#include <vector>

#include "drl/grid_restoration.hpp"
#include "drl/milp.hpp"
#include "drl/mps_dispatch.hpp"
#include "drl/rc_dispatch.hpp"
#include "drl/scenario.hpp"

namespace drl {

enum class DemandTerm { Real, Reactive };

struct ObjectiveConfig {
  DemandTerm demand_term = DemandTerm::Real;
  std::optional<double> epsilon;  // falls back to the scenario's effective epsilon
};

void build_objective(Model& model, const Scenario& s, const RcVariables& rc, const MpsVariables& mps,
                     const GridVariables& grid, const ObjectiveConfig& cfg = {});

void build_interdependence(Model& model, const Scenario& s, const RcVariables& rc, const MpsVariables& mps,
                           const GridVariables& grid);

struct CoOptConfig {
  std::optional<TaskAssignment> tasks;  // unrestricted when empty
  std::optional<std::vector<int>> candidate_nodes;  // every candidate when empty
  bool enable_crews = true;
  bool enable_sources = true;
  int sides = 8;
  DemandTerm demand_term = DemandTerm::Real;
  bool repair_once_cut = true;
  bool mps_window_from_t = false;
};

struct CoOptModel {
  CoOptConfig config;
  Model model;
  RcVariables rc;
  MpsVariables mps;
  GridVariables grid;
  TaskAssignment tasks;
  std::vector<int> candidate_nodes;
};

CoOptModel build_coopt_model(const Scenario& s, const CoOptConfig& cfg = {});

}  // namespace drl

#endif  // DRL_COUPLING_HPP
