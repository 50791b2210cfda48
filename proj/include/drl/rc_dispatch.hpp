#ifndef DRL_RC_DISPATCH_HPP
#define DRL_RC_DISPATCH_HPP

#include <vector>

#include "drl/milp.hpp"
#include "drl/scenario.hpp"

namespace drl {

// Damaged components each depot's crews may repair, indexed by depot.
using TaskAssignment = std::vector<std::vector<int>>;

// Every depot with crew capacity may take every task.
TaskAssignment unrestricted_tasks(const Scenario& s);

struct CrewVariables {
  int crew = 0;
  std::vector<int> vertices;  // eligible vertices; the depot is last
  std::vector<std::vector<VarId>> at;  // [vertex slot][t]: crew is at the vertex
  std::vector<VarId> traveling;  // [t]
  std::vector<int> tasks;  // damaged components, same order as vertices
  std::vector<std::vector<VarId>> repaired;  // [task slot][t]

  int slot_of_vertex(int vertex) const;
  int slot_of_task(int m) const;
};

struct RcVariables {
  std::vector<CrewVariables> crews;

  // Repair variables of every crew for component m at period index t.
  std::vector<VarId> repair_vars(int m, int t) const;
};

struct RcOptions {
  bool repair_once_cut = true;  // sum_k z <= 1, redundant for optimality
};

RcVariables build_rc_constraints(Model& model, const Scenario& s, const TaskAssignment& allowed,
                                 const RcOptions& opts = {});

enum class RouteCellKind { Depot, Component, Traveling, Stopped };

struct RouteCell {
  RouteCellKind kind = RouteCellKind::Traveling;
  int vertex = -1;  // set for Depot and Component
  bool operator==(const RouteCell&) const = default;
};

struct CrewRoute {
  int crew = 0;
  std::vector<RouteCell> cells;  // periods 1..T
  bool operator==(const CrewRoute&) const = default;
};

// Per-period crew positions: vertex index or -1 while traveling.
using PositionMatrix = std::vector<std::vector<int>>;

PositionMatrix crew_positions(const RcVariables& vars, const SolveResult& result);
std::vector<CrewRoute> routes_from_positions(const Scenario& s, const PositionMatrix& positions);
std::vector<CrewRoute> extract_routes(const Scenario& s, const RcVariables& vars, const SolveResult& result);

}  // namespace drl

#endif  // DRL_RC_DISPATCH_HPP
