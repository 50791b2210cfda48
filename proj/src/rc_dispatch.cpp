#include "drl/rc_dispatch.hpp"

#include <algorithm>

#include <fmt/core.h>

namespace drl {

TaskAssignment unrestricted_tasks(const Scenario& s) {
  TaskAssignment out(s.depots.size());
  for (int n = 0; n < static_cast<int>(s.depots.size()); ++n) {
    double cap = 0.0;
    for (int k : s.crews_of_depot(n)) cap += s.crews[k].capacity;
    if (cap <= 0.0) continue;
    for (int m = 0; m < static_cast<int>(s.damaged.size()); ++m) out[n].push_back(m);
  }
  return out;
}

int CrewVariables::slot_of_vertex(int vertex) const {
  auto it = std::find(vertices.begin(), vertices.end(), vertex);
  return it == vertices.end() ? -1 : static_cast<int>(it - vertices.begin());
}

int CrewVariables::slot_of_task(int m) const {
  auto it = std::find(tasks.begin(), tasks.end(), m);
  return it == tasks.end() ? -1 : static_cast<int>(it - tasks.begin());
}

std::vector<VarId> RcVariables::repair_vars(int m, int t) const {
  std::vector<VarId> out;
  for (const auto& c : crews) {
    const int slot = c.slot_of_task(m);
    if (slot >= 0) out.push_back(c.repaired[slot][t]);
  }
  return out;
}

RcVariables build_rc_constraints(Model& model, const Scenario& s, const TaskAssignment& allowed,
                                 const RcOptions& opts) {
  const int T = s.periods();
  const int n_damaged = static_cast<int>(s.damaged.size());
  if (allowed.size() != s.depots.size())
    throw ModelError(fmt::format("task assignment covers {} depots, scenario has {}", allowed.size(), s.depots.size()));
  for (int n = 0; n < static_cast<int>(allowed.size()); ++n) {
    double cap = 0.0;
    for (int k : s.crews_of_depot(n)) cap += s.crews[k].capacity;
    for (int m : allowed[n]) {
      if (m < 0 || m >= n_damaged) throw ModelError(fmt::format("depot {}: task {} is not a damaged component", s.depots[n].id, m));
    }
    if (!allowed[n].empty() && cap <= 0.0)
      throw ModelError(fmt::format("depot {} has tasks but zero total crew capacity", s.depots[n].id));
  }

  RcVariables out;
  for (int k = 0; k < static_cast<int>(s.crews.size()); ++k) {
    const auto& crew = s.crews[k];
    CrewVariables cv;
    cv.crew = k;
    cv.tasks = allowed[crew.depot];
    std::sort(cv.tasks.begin(), cv.tasks.end());
    cv.vertices = cv.tasks;
    const int depot_vertex = s.depot_vertex(crew.depot);
    cv.vertices.push_back(depot_vertex);

    for (int v : cv.vertices) {
      std::vector<VarId> row;
      for (int t = 1; t <= T; ++t)
        row.push_back(model.add_binary(fmt::format("a[{}][{}][{}]", crew.id, s.vertex_label(v), t)));
      cv.at.push_back(std::move(row));
    }
    for (int t = 1; t <= T; ++t) {
      cv.traveling.push_back(model.add_continuous(0.0, 1.0, fmt::format("beta_rc[{}][{}]", crew.id, t)));
      LinExpr occupied;
      for (const auto& row : cv.at) occupied.add(row[t - 1], 1.0);
      model.add_le(occupied, 1.0, fmt::format("rc_one_place[{}][{}]", crew.id, t));
      model.add_eq(cv.traveling[t - 1], 1.0 - occupied, fmt::format("rc_beta[{}][{}]", crew.id, t));
    }

    // Travel windows; t = 0 is the depot.
    const int nv = static_cast<int>(cv.vertices.size());
    for (int j = 0; j < nv; ++j) {
      const int n = cv.vertices[j];
      if (n == depot_vertex) continue;
      const int tr = s.transport.crew_travel[depot_vertex][n];
      const int last = std::min(tr, T);
      if (last < 1) continue;
      LinExpr window;
      for (int tau = 1; tau <= last; ++tau) window.add(cv.at[j][tau - 1], 1.0);
      model.add_le(window, 0.0, fmt::format("rc_travel0[{}][{}]", crew.id, s.vertex_label(n)));
    }
    for (int i = 0; i < nv; ++i) {
      for (int j = 0; j < nv; ++j) {
        if (i == j) continue;
        const int tr = s.transport.crew_travel[cv.vertices[i]][cv.vertices[j]];
        for (int t = 1; t < T; ++t) {
          const int width = std::min(tr, T - t);
          if (width < 1) continue;
          LinExpr window;
          for (int tau = t + 1; tau <= t + width; ++tau) window.add(cv.at[j][tau - 1], 1.0);
          model.add_le(window, width * (1.0 - LinExpr(cv.at[i][t - 1])),
                       fmt::format("rc_travel[{}][{}][{}][{}]", crew.id, i, j, t));
        }
      }
    }

    for (int slot = 0; slot < static_cast<int>(cv.tasks.size()); ++slot) {
      const int m = cv.tasks[slot];
      const int rt = crew.repair_time[m];
      std::vector<VarId> row;
      LinExpr visits;
      for (int t = 1; t <= T; ++t) {
        row.push_back(model.add_binary(fmt::format("z[{}][{}][{}]", crew.id, s.vertex_label(m), t)));
        visits.add(cv.at[slot][t - 1], 1.0);
        model.add_le(static_cast<double>(rt) * LinExpr(row.back()), visits,
                     fmt::format("rc_progress[{}][{}][{}]", crew.id, m, t));
        if (t > 1) model.add_le(row[t - 2], row[t - 1], fmt::format("rc_monotone[{}][{}][{}]", crew.id, m, t));
      }
      cv.repaired.push_back(std::move(row));
    }

    if (!cv.tasks.empty()) {
      LinExpr used;
      for (int slot = 0; slot < static_cast<int>(cv.tasks.size()); ++slot)
        used.add(cv.repaired[slot][T - 1], s.damaged[cv.tasks[slot]].rs);
      model.add_le(used, crew.capacity, fmt::format("rc_resources[{}]", crew.id));
    }
    out.crews.push_back(std::move(cv));
  }

  if (opts.repair_once_cut) {
    for (int m = 0; m < n_damaged; ++m) {
      for (int t = 0; t < T; ++t) {
        const auto vars = out.repair_vars(m, t);
        if (vars.size() < 2) continue;
        LinExpr sum;
        for (VarId v : vars) sum.add(v, 1.0);
        model.add_le(sum, 1.0, fmt::format("rc_once[{}][{}]", m, t + 1));
      }
    }
  }
  return out;
}

PositionMatrix crew_positions(const RcVariables& vars, const SolveResult& result) {
  if (!result.has_solution()) throw DecodeError("crew_positions: result has no solution");
  PositionMatrix out;
  for (const auto& c : vars.crews) {
    const std::size_t T = c.traveling.size();
    std::vector<int> row(T, -1);
    for (std::size_t t = 0; t < T; ++t) {
      for (std::size_t slot = 0; slot < c.vertices.size(); ++slot) {
        if (!result.is_one(c.at[slot][t])) continue;
        if (row[t] >= 0)
          throw DecodeError(fmt::format("crew {} occupies two vertices in period {}", c.crew, t + 1));
        row[t] = c.vertices[slot];
      }
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<CrewRoute> routes_from_positions(const Scenario& s, const PositionMatrix& positions) {
  const int n_damaged = static_cast<int>(s.damaged.size());
  std::vector<CrewRoute> out;
  for (std::size_t k = 0; k < positions.size(); ++k) {
    const auto& pos = positions[k];
    const int T = static_cast<int>(pos.size());
    CrewRoute route;
    route.crew = static_cast<int>(k);
    // First period from which the crew never moves again.
    int settled = T;
    while (settled > 0 && pos[settled - 1] >= 0 && pos[settled - 1] == pos[T - 1]) --settled;
    for (int t = 0; t < T; ++t) {
      const int v = pos[t];
      if (v < 0) {
        route.cells.push_back({RouteCellKind::Traveling, -1});
        continue;
      }
      const int previous = t == 0 ? s.depot_vertex(s.crews[k].depot) : pos[t - 1];
      bool done = false;
      if (t >= settled && previous == v) {
        if (v >= n_damaged) {
          done = true;
        } else {
          const int visits_before = static_cast<int>(std::count(pos.begin(), pos.begin() + t, v));
          done = visits_before >= s.crews[k].repair_time[v];
        }
      }
      if (done) route.cells.push_back({RouteCellKind::Stopped, -1});
      else route.cells.push_back({v >= n_damaged ? RouteCellKind::Depot : RouteCellKind::Component, v});
    }
    out.push_back(std::move(route));
  }
  return out;
}

std::vector<CrewRoute> extract_routes(const Scenario& s, const RcVariables& vars, const SolveResult& result) {
  return routes_from_positions(s, crew_positions(vars, result));
}

}  // namespace drl
