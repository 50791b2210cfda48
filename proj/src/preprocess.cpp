#include "drl/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include <fmt/core.h>

#include "drl/grid_restoration.hpp"

namespace drl {

namespace {

Scenario peak_snapshot(const Scenario& s) {
  Scenario out = s;
  out.horizon.periods = 1;
  for (auto& n : out.nodes) {
    n.p_demand = {n.peak_p()};
    n.q_demand = {n.peak_q()};
  }
  out.sources.clear();
  return out;
}

// Single-period grid model serving every load from the substation alone.
// Returns the operable variable of each branch.
std::vector<VarId> add_full_supply_grid(Model& m, const Scenario& peak, int sides) {
  GridVariables g = add_grid_variables(m, peak, GridOptions{sides});
  build_radiality(m, peak, g);
  build_distflow(m, peak, g);
  std::vector<VarId> operable;
  for (std::size_t i = 0; i < peak.nodes.size(); ++i) {
    m.fix(g.restored[i][0], 1.0);
    m.fix(g.P[i][0], 0.0);
    m.fix(g.Q[i][0], 0.0);
  }
  for (std::size_t b = 0; b < peak.branches.size(); ++b) {
    const auto& br = peak.branches[b];
    if (!br.damaged) {
      m.fix(g.operable[b][0], 1.0);
      if (!br.has_switch) m.fix(g.closed[b][0], 1.0);
    }
    operable.push_back(g.operable[b][0]);
  }
  return operable;
}

double depot_capacity(const Scenario& s, int depot) {
  double cap = 0.0;
  for (int k : s.crews_of_depot(depot)) cap += s.crews[k].capacity;
  return cap;
}

bool feasible(const Model& m, const PreprocessOptions& opts, SolveResult* out = nullptr) {
  SolveResult r = solve(m, opts.solve, opts.backend);
  if (r.status == SolveStatus::Error) throw BackendError("preprocess solve failed: " + r.message);
  const bool ok = r.has_solution();
  if (out) *out = std::move(r);
  return ok;
}

double tie_tolerance(double optimum) { return 1e-6 * std::max(1.0, std::abs(optimum)); }

}  // namespace

TaskAssignment PreAssignment::tasks(std::size_t num_depots) const {
  TaskAssignment out(num_depots);
  for (int m = 0; m < static_cast<int>(depot_of.size()); ++m)
    if (depot_of[m] >= 0) out.at(depot_of[m]).push_back(m);
  return out;
}

bool supports_full_supply(const Scenario& s, const std::vector<int>& repaired, const PreprocessOptions& opts) {
  const Scenario peak = peak_snapshot(s);
  Model m;
  const auto operable = add_full_supply_grid(m, peak, opts.sides);
  for (std::size_t k = 0; k < s.damaged.size(); ++k) {
    const bool on = std::find(repaired.begin(), repaired.end(), static_cast<int>(k)) != repaired.end();
    m.fix(operable[s.damaged[k].branch], on ? 1.0 : 0.0);
  }
  return feasible(m, opts);
}

PreAssignment preassign_min_repairs(const Scenario& s, AssignMode mode, const PreprocessOptions& opts) {
  const int n_damaged = static_cast<int>(s.damaged.size());
  const int n_depots = static_cast<int>(s.depots.size());
  Model m;
  std::vector<std::vector<VarId>> psi(n_damaged, std::vector<VarId>(n_depots));
  LinExpr distance;
  for (int k = 0; k < n_damaged; ++k) {
    for (int n = 0; n < n_depots; ++n) {
      if (depot_capacity(s, n) <= 0.0) continue;
      psi[k][n] = m.add_binary(fmt::format("psi[{}][{}]", s.vertex_label(k), s.depots[n].id));
      distance.add(psi[k][n], s.transport.crew_dist[k][s.depot_vertex(n)]);
    }
  }
  for (int n = 0; n < n_depots; ++n) {
    LinExpr used;
    for (int k = 0; k < n_damaged; ++k)
      if (psi[k][n].valid()) used.add(psi[k][n], s.damaged[k].rs);
    if (!used.terms().empty()) m.add_le(used, depot_capacity(s, n), fmt::format("pa_resources[{}]", s.depots[n].id));
  }
  std::vector<LinExpr> chosen(n_damaged);
  for (int k = 0; k < n_damaged; ++k) {
    for (VarId v : psi[k])
      if (v.valid()) chosen[k].add(v, 1.0);
    if (mode == AssignMode::All) {
      if (chosen[k].terms().empty())
        throw PreprocessError(fmt::format("no depot with crew capacity can take {}", s.vertex_label(k)));
      m.add_eq(chosen[k], 1.0, fmt::format("pa_all[{}]", k));
    } else if (chosen[k].terms().size() > 1) {
      m.add_le(chosen[k], 1.0, fmt::format("pa_once[{}]", k));
    }
  }
  if (mode == AssignMode::Minimal) {
    const Scenario peak = peak_snapshot(s);
    const auto operable = add_full_supply_grid(m, peak, opts.sides);
    for (int k = 0; k < n_damaged; ++k)
      m.add_le(operable[s.damaged[k].branch], chosen[k], fmt::format("pa_operable[{}]", k));
  }
  m.set_objective(distance, ObjSense::Minimize);

  SolveResult best;
  if (!feasible(m, opts, &best)) {
    throw PreprocessError(mode == AssignMode::Minimal
                              ? "no set of repairs lets the substation serve all loads"
                              : "crew resources cannot cover every damaged component");
  }

  std::vector<int> depot_of(n_damaged, -1);
  auto read = [&](const SolveResult& r) {
    for (int k = 0; k < n_damaged; ++k) {
      depot_of[k] = -1;
      for (int n = 0; n < n_depots; ++n)
        if (psi[k][n].valid() && r.is_one(psi[k][n])) depot_of[k] = n;
    }
  };
  read(best);

  if (opts.tie_break && n_damaged > 0) {
    const double optimum = best.objective;
    m.add_le(distance, optimum + tie_tolerance(optimum), "pa_optimal");
    for (int k = 0; k < n_damaged; ++k) {
      const int current = depot_of[k];
      // Options in order: unassigned, depot 0, depot 1, ...
      for (int option = -1; option < n_depots; ++option) {
        if (option == -1 && mode == AssignMode::All) continue;
        if (option >= 0 && !psi[k][option].valid()) continue;
        Model trial = m;
        for (int n = 0; n < n_depots; ++n)
          if (psi[k][n].valid()) trial.fix(psi[k][n], n == option ? 1.0 : 0.0);
        SolveResult r;
        const bool ok = option == current || feasible(trial, opts, &r);
        if (!ok) continue;
        m = std::move(trial);
        if (option != current) read(r);
        break;
      }
    }
  }

  PreAssignment out;
  out.depot_of = depot_of;
  for (int k = 0; k < n_damaged; ++k) {
    if (depot_of[k] >= 0) {
      out.assigned.push_back(k);
      out.total_distance += s.transport.crew_dist[k][s.depot_vertex(depot_of[k])];
    } else {
      out.unassigned.push_back(k);
    }
  }
  return out;
}

int IslandPartition::island_of(int node) const {
  for (int k = 0; k < static_cast<int>(islands.size()); ++k)
    if (std::binary_search(islands[k].begin(), islands[k].end(), node)) return k;
  return -1;
}

IslandPartition detect_islands(const Scenario& s) {
  const int n_nodes = static_cast<int>(s.nodes.size());
  std::vector<std::vector<int>> adj(n_nodes);
  for (const auto& b : s.branches) {
    if (b.damaged) continue;
    adj[b.from].push_back(b.to);
    adj[b.to].push_back(b.from);
  }
  IslandPartition out;
  std::vector<char> seen(n_nodes, 0);
  for (int start = 0; start < n_nodes; ++start) {
    if (seen[start]) continue;
    std::vector<int> island{start};
    std::queue<int> frontier;
    frontier.push(start);
    seen[start] = 1;
    while (!frontier.empty()) {
      const int i = frontier.front();
      frontier.pop();
      for (int j : adj[i]) {
        if (seen[j]) continue;
        seen[j] = 1;
        island.push_back(j);
        frontier.push(j);
      }
    }
    std::sort(island.begin(), island.end());
    std::vector<int> cands;
    for (int i : island)
      if (s.nodes[i].is_candidate) cands.push_back(i);
    out.islands.push_back(std::move(island));
    out.candidate_sets.push_back(std::move(cands));
  }
  return out;
}

double selection_distance(const Scenario& s, const std::vector<int>& nodes) {
  double total = 0.0;
  for (std::size_t a = 0; a < nodes.size(); ++a)
    for (std::size_t b = a + 1; b < nodes.size(); ++b)
      total += s.transport.node_dist[s.candidate_position(nodes[a])][s.candidate_position(nodes[b])];
  return total;
}

CandidateSelection select_candidates(const Scenario& s, const IslandPartition& partition, const PreprocessOptions& opts) {
  std::vector<const std::vector<int>*> groups;
  for (const auto& c : partition.candidate_sets)
    if (!c.empty()) groups.push_back(&c);
  if (groups.empty()) throw PreprocessError("no island contains a candidate node");

  Model m;
  std::vector<std::vector<VarId>> phi(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    LinExpr one;
    for (int i : *groups[g]) {
      phi[g].push_back(m.add_binary(fmt::format("phi[{}]", s.nodes[i].id)));
      one.add(phi[g].back(), 1.0);
    }
    m.add_eq(one, 1.0, fmt::format("one_per_island[{}]", g));
  }
  LinExpr distance;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (std::size_t h = g + 1; h < groups.size(); ++h) {
      for (std::size_t a = 0; a < groups[g]->size(); ++a) {
        for (std::size_t b = 0; b < groups[h]->size(); ++b) {
          const int i = (*groups[g])[a];
          const int j = (*groups[h])[b];
          const double l = s.transport.node_dist[s.candidate_position(i)][s.candidate_position(j)];
          if (l == 0.0) continue;
          const VarId w = mccormick_product(m, phi[g][a], phi[h][b],
                                            fmt::format("phiphi[{}][{}]", s.nodes[i].id, s.nodes[j].id));
          distance.add(w, l);
        }
      }
    }
  }
  m.set_objective(distance, ObjSense::Minimize);

  SolveResult r;
  if (!feasible(m, opts, &r)) throw PreprocessError("candidate selection model is infeasible");
  auto read = [&](const SolveResult& res) {
    std::vector<int> out;
    for (std::size_t g = 0; g < groups.size(); ++g)
      for (std::size_t a = 0; a < groups[g]->size(); ++a)
        if (res.is_one(phi[g][a])) out.push_back((*groups[g])[a]);
    return out;
  };
  std::vector<int> selected = read(r);

  if (opts.tie_break && groups.size() > 1) {
    m.add_le(distance, r.objective + tie_tolerance(r.objective), "selection_optimal");
    for (std::size_t g = 0; g < groups.size(); ++g) {
      for (std::size_t a = 0; a < groups[g]->size(); ++a) {
        Model trial = m;
        trial.fix(phi[g][a], 1.0);
        SolveResult tr;
        const bool current = std::find(selected.begin(), selected.end(), (*groups[g])[a]) != selected.end();
        if (!current && !feasible(trial, opts, &tr)) continue;
        m = std::move(trial);
        if (!current) selected = read(tr);
        break;
      }
    }
  }

  std::sort(selected.begin(), selected.end());
  CandidateSelection out;
  out.selected = selected;
  out.total_distance = selection_distance(s, selected);
  return out;
}

}  // namespace drl
