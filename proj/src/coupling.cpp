#include "drl/coupling.hpp"

#include <algorithm>

#include <fmt/core.h>

namespace drl {

void build_objective(Model& model, const Scenario& s, const RcVariables& rc, const MpsVariables& mps,
                     const GridVariables& grid, const ObjectiveConfig& cfg) {
  const int T = s.periods();
  const double eps = cfg.epsilon.value_or(s.effective_epsilon());
  if (!(eps > 0.0)) throw ModelError("objective epsilon must be positive");
  LinExpr obj;
  for (int i = 0; i < static_cast<int>(s.nodes.size()); ++i) {
    const auto& node = s.nodes[i];
    const auto& demand = cfg.demand_term == DemandTerm::Real ? node.p_demand : node.q_demand;
    for (int t = 0; t < T; ++t) obj.add(grid.restored[i][t], node.weight * demand[t]);
  }
  for (const auto& c : rc.crews)
    for (VarId b : c.traveling) obj.add(b, -eps);
  for (const auto& sv : mps.sources)
    for (VarId b : sv.traveling) obj.add(b, -eps);
  model.set_objective(obj, ObjSense::Maximize);
}

void build_interdependence(Model& model, const Scenario& s, const RcVariables& rc, const MpsVariables& mps,
                           const GridVariables& grid) {
  const int T = s.periods();
  for (int b = 0; b < static_cast<int>(s.branches.size()); ++b) {
    const auto& br = s.branches[b];
    const std::string label = s.branch_label(b);
    if (!br.damaged) {
      for (int t = 0; t < T; ++t) {
        model.fix(grid.operable[b][t], 1.0);
        if (!br.has_switch) model.fix(grid.closed[b][t], 1.0);
      }
      continue;
    }
    const int m = *s.damaged_of_branch(b);
    model.fix(grid.operable[b][0], 0.0);
    for (int t = 1; t < T; ++t) {
      LinExpr repaired;
      for (VarId z : rc.repair_vars(m, t - 1)) repaired.add(z, 1.0);
      model.add_le(grid.operable[b][t], repaired, fmt::format("operable_after_repair[{}][{}]", label, t + 1));
    }
  }

  for (int i = 0; i < static_cast<int>(s.nodes.size()); ++i) {
    const int slot = mps.slot_of_node(i);
    const auto& id = s.nodes[i].id;
    for (int t = 0; t < T; ++t) {
      if (slot < 0) {
        model.fix(grid.P[i][t], 0.0);
        model.fix(grid.Q[i][t], 0.0);
        continue;
      }
      LinExpr p, q;
      for (const auto& sv : mps.sources) {
        const auto& src = s.sources[sv.source];
        const VarId alpha = sv.connected[slot][t];
        const std::string tag = fmt::format("{}][{}][{}", src.id, id, t + 1);
        q.add(mccormick_product(model, alpha, sv.gq[t], fmt::format("w_gq[{}]", tag)), 1.0);
        if (src.is_mess()) {
          p.add(mccormick_product(model, alpha, sv.dp[t], fmt::format("w_dp[{}]", tag)), 1.0);
          p.add(mccormick_product(model, alpha, sv.cp[t], fmt::format("w_cp[{}]", tag)), -1.0);
        } else {
          p.add(mccormick_product(model, alpha, sv.gp[t], fmt::format("w_gp[{}]", tag)), 1.0);
        }
      }
      model.add_eq(grid.P[i][t], p, fmt::format("mps_p[{}][{}]", id, t + 1));
      model.add_eq(grid.Q[i][t], q, fmt::format("mps_q[{}][{}]", id, t + 1));
    }
  }
}

CoOptModel build_coopt_model(const Scenario& s, const CoOptConfig& cfg) {
  CoOptModel out;
  out.config = cfg;
  if (!cfg.enable_crews) out.tasks.assign(s.depots.size(), {});
  else out.tasks = cfg.tasks.value_or(unrestricted_tasks(s));

  if (cfg.enable_sources && !s.sources.empty()) {
    out.candidate_nodes = cfg.candidate_nodes.value_or(s.candidate_nodes());
    for (const auto& src : s.sources)
      if (src.initial_node) out.candidate_nodes.push_back(*src.initial_node);
    std::sort(out.candidate_nodes.begin(), out.candidate_nodes.end());
    out.candidate_nodes.erase(std::unique(out.candidate_nodes.begin(), out.candidate_nodes.end()),
                              out.candidate_nodes.end());
  }

  out.rc = build_rc_constraints(out.model, s, out.tasks, RcOptions{cfg.repair_once_cut});
  if (cfg.enable_sources && !s.sources.empty())
    out.mps = build_mps_constraints(out.model, s, out.candidate_nodes, MpsOptions{cfg.mps_window_from_t});
  out.grid = add_grid_variables(out.model, s, GridOptions{cfg.sides});
  build_radiality(out.model, s, out.grid);
  build_distflow(out.model, s, out.grid);
  build_interdependence(out.model, s, out.rc, out.mps, out.grid);
  build_objective(out.model, s, out.rc, out.mps, out.grid, ObjectiveConfig{cfg.demand_term, s.horizon.epsilon});
  return out;
}

}  // namespace drl
