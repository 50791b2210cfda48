#ifndef DRL_GRID_RESTORATION_HPP
#define DRL_GRID_RESTORATION_HPP

#include <vector>

#include "drl/milp.hpp"
#include "drl/scenario.hpp"

namespace drl {

template <class T>
using PerPeriod = std::vector<std::vector<T>>;  // [entity][t]

struct GridVariables {
  PerPeriod<VarId> restored;  // delta[i][t]
  PerPeriod<VarId> closed;  // lambda[b][t]
  PerPeriod<VarId> operable;  // u[b][t]
  PerPeriod<VarId> tree;  // e[b][t], fictitious spanning tree
  PerPeriod<VarId> tree_flow;  // single-commodity flow on the fictitious network
  PerPeriod<VarId> pf, qf;  // [b][t]
  PerPeriod<VarId> v;  // squared voltage [i][t]
  PerPeriod<VarId> P, Q;  // mobile-source injection [i][t]
  PerPeriod<VarId> Pg, Qg;  // substation injection [i][t]; invalid ids off-substation
  std::vector<double> big_m;  // per branch
  int sides = 8;
};

struct GridOptions {
  int sides = 8;
};

GridVariables add_grid_variables(Model& model, const Scenario& s, const GridOptions& opts = {});

// Voltage-drop deactivation constant per branch (or the global maximum).
std::vector<double> big_m_constants(const Scenario& s);

// Throws ScenarioError if the damage-free network is disconnected or has
// more than one substation.
void build_radiality(Model& model, const Scenario& s, const GridVariables& g);

void build_distflow(Model& model, const Scenario& s, const GridVariables& g);

}  // namespace drl

#endif  // DRL_GRID_RESTORATION_HPP
