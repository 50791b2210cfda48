#include "drl/mps_dispatch.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

namespace drl {

int MpsVariables::slot_of_node(int node) const {
  auto it = std::find(nodes.begin(), nodes.end(), node);
  return it == nodes.end() ? -1 : static_cast<int>(it - nodes.begin());
}

MpsVariables build_mps_constraints(Model& model, const Scenario& s, std::span<const int> candidate_nodes,
                                   const MpsOptions& opts) {
  const int T = s.periods();
  MpsVariables out;
  out.nodes.assign(candidate_nodes.begin(), candidate_nodes.end());
  std::sort(out.nodes.begin(), out.nodes.end());
  out.nodes.erase(std::unique(out.nodes.begin(), out.nodes.end()), out.nodes.end());
  if (!s.sources.empty() && out.nodes.empty()) throw ModelError("mobile sources need at least one candidate node");
  for (int i : out.nodes)
    if (s.candidate_position(i) < 0) throw ModelError(fmt::format("node {} is not a candidate node", s.nodes.at(i).id));

  const int nn = static_cast<int>(out.nodes.size());
  auto travel = [&](int from_node, int to_node) {
    return s.transport.mps_travel[s.candidate_position(from_node)][s.candidate_position(to_node)];
  };

  for (int idx = 0; idx < static_cast<int>(s.sources.size()); ++idx) {
    const auto& src = s.sources[idx];
    if (src.is_mess() && (src.eta_c <= 0.0 || src.eta_d <= 0.0))
      throw ModelError(fmt::format("MESS {} has zero efficiency", src.id));
    SourceVariables sv;
    sv.source = idx;
    for (int i : out.nodes) {
      std::vector<VarId> row;
      for (int t = 1; t <= T; ++t)
        row.push_back(model.add_binary(fmt::format("alpha[{}][{}][{}]", src.id, s.nodes[i].id, t)));
      sv.connected.push_back(std::move(row));
    }

    std::vector<LinExpr> connected_at(T);
    for (int t = 1; t <= T; ++t) {
      for (const auto& row : sv.connected) connected_at[t - 1].add(row[t - 1], 1.0);
      model.add_le(connected_at[t - 1], 1.0, fmt::format("mps_one_node[{}][{}]", src.id, t));
      sv.traveling.push_back(model.add_continuous(0.0, 1.0, fmt::format("beta_mps[{}][{}]", src.id, t)));
      model.add_eq(sv.traveling.back(), 1.0 - connected_at[t - 1], fmt::format("mps_beta[{}][{}]", src.id, t));
    }

    if (src.initial_node) {
      const int start = *src.initial_node;
      for (int j = 0; j < nn; ++j) {
        if (out.nodes[j] == start) continue;
        const int last = std::min(travel(start, out.nodes[j]), T);
        if (last < 1) continue;
        LinExpr window;
        for (int tau = 1; tau <= last; ++tau) window.add(sv.connected[j][tau - 1], 1.0);
        model.add_le(window, 0.0, fmt::format("mps_travel0[{}][{}]", src.id, s.nodes[out.nodes[j]].id));
      }
    }
    for (int i = 0; i < nn; ++i) {
      for (int j = 0; j < nn; ++j) {
        if (i == j) continue;
        const int tr = travel(out.nodes[i], out.nodes[j]);
        for (int t = 1; t <= T; ++t) {
          const int width = std::min(tr, T - t);
          const int first = opts.window_from_t ? t : t + 1;
          const int last = std::min(t + tr, T);
          if (last < first || (width < 1 && !opts.window_from_t)) continue;
          LinExpr window;
          for (int tau = first; tau <= last; ++tau) window.add(sv.connected[j][tau - 1], 1.0);
          model.add_le(window, width * (1.0 - LinExpr(sv.connected[i][t - 1])),
                       fmt::format("mps_travel[{}][{}][{}][{}]", src.id, i, j, t));
        }
      }
    }

    for (int t = 1; t <= T; ++t) {
      const LinExpr& on = connected_at[t - 1];
      sv.gq.push_back(model.add_continuous(0.0, src.gq_max, fmt::format("gq[{}][{}]", src.id, t)));
      if (!src.is_mess()) {
        sv.gp.push_back(model.add_continuous(0.0, src.gp_max, fmt::format("gp[{}][{}]", src.id, t)));
        model.add_le(sv.gp.back(), src.gp_max * on, fmt::format("meg_p_cap[{}][{}]", src.id, t));
        model.add_le(sv.gq.back(), src.gq_max * on, fmt::format("meg_q_cap[{}][{}]", src.id, t));
        continue;
      }
      sv.charging.push_back(model.add_binary(fmt::format("c[{}][{}]", src.id, t)));
      sv.discharging.push_back(model.add_binary(fmt::format("d[{}][{}]", src.id, t)));
      sv.cp.push_back(model.add_continuous(0.0, src.cp_max, fmt::format("cp[{}][{}]", src.id, t)));
      sv.dp.push_back(model.add_continuous(0.0, src.dp_max, fmt::format("dp[{}][{}]", src.id, t)));
      sv.soc.push_back(model.add_continuous(src.soc_min, src.soc_max, fmt::format("soc[{}][{}]", src.id, t)));
      const LinExpr active = LinExpr(sv.charging.back()) + LinExpr(sv.discharging.back());
      model.add_le(active, on, fmt::format("mess_mode[{}][{}]", src.id, t));
      model.add_le(sv.cp.back(), src.cp_max * LinExpr(sv.charging.back()), fmt::format("mess_cp_cap[{}][{}]", src.id, t));
      model.add_le(sv.dp.back(), src.dp_max * LinExpr(sv.discharging.back()), fmt::format("mess_dp_cap[{}][{}]", src.id, t));
      model.add_le(sv.gq.back(), src.gq_max * active, fmt::format("mess_q_cap[{}][{}]", src.id, t));
      // soc_t = soc_{t-1} + (cp_t * eta_c - dp_t / eta_d) * dt, soc_0 = soc_init
      LinExpr previous = t == 1 ? LinExpr(src.soc_init) : LinExpr(sv.soc[t - 2]);
      LinExpr next = previous;
      next.add(sv.cp.back(), src.eta_c * s.horizon.dt).add(sv.dp.back(), -s.horizon.dt / src.eta_d);
      model.add_eq(sv.soc.back(), next, fmt::format("mess_soc[{}][{}]", src.id, t));
    }
    out.sources.push_back(std::move(sv));
  }

  for (int j = 0; j < nn; ++j) {
    const int node = out.nodes[j];
    for (int t = 1; t <= T; ++t) {
      LinExpr attached;
      for (const auto& sv : out.sources) attached.add(sv.connected[j][t - 1], 1.0);
      if (attached.terms().empty()) continue;
      model.add_le(attached, static_cast<double>(s.nodes[node].vol), fmt::format("mps_vol[{}][{}]", s.nodes[node].id, t));
    }
  }
  return out;
}

std::vector<ItineraryCell> itinerary_from_positions(int start, std::span<const int> positions,
                                                    std::span<const double> real_power,
                                                    std::span<const double> reactive_power) {
  constexpr double kIdle = 1e-6;
  const int T = static_cast<int>(positions.size());
  int settled = T;
  while (settled > 0 && positions[settled - 1] >= 0 && positions[settled - 1] == positions[T - 1] &&
         std::abs(real_power[settled - 1]) < kIdle && std::abs(reactive_power[settled - 1]) < kIdle)
    --settled;
  std::vector<ItineraryCell> cells;
  for (int t = 0; t < T; ++t) {
    if (positions[t] < 0) cells.push_back({StopKind::Traveling, -1});
    else if (t >= settled && (t == 0 ? start : positions[t - 1]) == positions[t]) cells.push_back({StopKind::Stopped, -1});
    else cells.push_back({StopKind::Node, positions[t]});
  }
  return cells;
}

std::vector<SourceSchedule> extract_mps_schedule(const Scenario& s, const MpsVariables& vars, const SolveResult& result) {
  if (!result.has_solution()) throw DecodeError("extract_mps_schedule: result has no solution");
  const int T = s.periods();
  std::vector<SourceSchedule> out;
  for (const auto& sv : vars.sources) {
    const auto& src = s.sources[sv.source];
    SourceSchedule sched;
    sched.source = sv.source;
    std::vector<int> pos(T, -1);
    std::vector<double> q(T, 0.0);
    for (int t = 0; t < T; ++t) {
      for (std::size_t j = 0; j < vars.nodes.size(); ++j) {
        if (!result.is_one(sv.connected[j][t])) continue;
        if (pos[t] >= 0) throw DecodeError(fmt::format("source {} connected at two nodes in period {}", src.id, t + 1));
        pos[t] = vars.nodes[j];
      }
      q[t] = result.value(sv.gq[t]);
      if (src.is_mess()) {
        if (result.is_one(sv.charging[t]) && result.is_one(sv.discharging[t]))
          throw DecodeError(fmt::format("MESS {} charges and discharges in period {}", src.id, t + 1));
        sched.real_power.push_back(result.value(sv.dp[t]) - result.value(sv.cp[t]));
        sched.soc.push_back(result.value(sv.soc[t]));
      } else {
        sched.real_power.push_back(result.value(sv.gp[t]));
      }
    }
    sched.cells = itinerary_from_positions(src.initial_node.value_or(-1), pos, sched.real_power, q);
    out.push_back(std::move(sched));
  }
  return out;
}

}  // namespace drl
