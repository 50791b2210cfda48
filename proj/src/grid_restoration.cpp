#include "drl/grid_restoration.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

#include <fmt/core.h>

namespace drl {

std::vector<double> big_m_constants(const Scenario& s) {
  double v_hi = 0.0;
  double v_lo = kInf;
  for (const auto& n : s.nodes) {
    v_hi = std::max(v_hi, n.v_max);
    v_lo = std::min(v_lo, n.v_min);
  }
  std::vector<double> k;
  for (const auto& b : s.branches)
    k.push_back(v_hi * v_hi - v_lo * v_lo + 2.0 * (b.r + b.x) * b.s_cap / s.base_kva);
  if (s.horizon.big_m == BigMPolicy::Global && !k.empty()) {
    const double worst = *std::max_element(k.begin(), k.end());
    std::fill(k.begin(), k.end(), worst);
  }
  return k;
}

GridVariables add_grid_variables(Model& model, const Scenario& s, const GridOptions& opts) {
  const int T = s.periods();
  const int n_nodes = static_cast<int>(s.nodes.size());
  const double overshoot = polygon_overshoot(opts.sides);
  GridVariables g;
  g.sides = opts.sides;
  g.big_m = big_m_constants(s);

  double p_out = 0.0, p_in = 0.0, q_out = 0.0;
  for (const auto& src : s.sources) {
    p_out += src.is_mess() ? src.dp_max : src.gp_max;
    p_in += src.is_mess() ? src.cp_max : 0.0;
    q_out += src.gq_max;
  }

  for (int i = 0; i < n_nodes; ++i) {
    const auto& node = s.nodes[i];
    std::vector<VarId> delta, v, P, Q, Pg, Qg;
    const SubstationCap* cap = nullptr;
    for (const auto& c : s.substations)
      if (c.node == i) cap = &c;
    for (int t = 1; t <= T; ++t) {
      delta.push_back(model.add_binary(fmt::format("delta[{}][{}]", node.id, t)));
      v.push_back(model.add_continuous(node.v_min * node.v_min, node.v_max * node.v_max, fmt::format("v[{}][{}]", node.id, t)));
      P.push_back(model.add_continuous(-p_in, p_out, fmt::format("P[{}][{}]", node.id, t)));
      Q.push_back(model.add_continuous(0.0, q_out, fmt::format("Q[{}][{}]", node.id, t)));
      if (cap) {
        Pg.push_back(model.add_continuous(-cap->p_max, cap->p_max, fmt::format("Pg[{}][{}]", node.id, t)));
        Qg.push_back(model.add_continuous(-cap->q_max, cap->q_max, fmt::format("Qg[{}][{}]", node.id, t)));
      } else {
        Pg.emplace_back();
        Qg.emplace_back();
      }
    }
    g.restored.push_back(std::move(delta));
    g.v.push_back(std::move(v));
    g.P.push_back(std::move(P));
    g.Q.push_back(std::move(Q));
    g.Pg.push_back(std::move(Pg));
    g.Qg.push_back(std::move(Qg));
  }

  const double n_minus_1 = std::max(n_nodes - 1, 0);
  for (int b = 0; b < static_cast<int>(s.branches.size()); ++b) {
    const auto& br = s.branches[b];
    const std::string label = s.branch_label(b);
    const double flow_cap = br.s_cap * overshoot;
    std::vector<VarId> lam, u, e, f, pf, qf;
    for (int t = 1; t <= T; ++t) {
      lam.push_back(model.add_binary(fmt::format("lambda[{}][{}]", label, t)));
      u.push_back(model.add_binary(fmt::format("u[{}][{}]", label, t)));
      e.push_back(model.add_binary(fmt::format("e[{}][{}]", label, t)));
      f.push_back(model.add_continuous(-n_minus_1, n_minus_1, fmt::format("scf[{}][{}]", label, t)));
      pf.push_back(model.add_continuous(-flow_cap, flow_cap, fmt::format("pf[{}][{}]", label, t)));
      qf.push_back(model.add_continuous(-flow_cap, flow_cap, fmt::format("qf[{}][{}]", label, t)));
    }
    g.closed.push_back(std::move(lam));
    g.operable.push_back(std::move(u));
    g.tree.push_back(std::move(e));
    g.tree_flow.push_back(std::move(f));
    g.pf.push_back(std::move(pf));
    g.qf.push_back(std::move(qf));
  }
  return g;
}

void build_radiality(Model& model, const Scenario& s, const GridVariables& g) {
  const int T = s.periods();
  const int n_nodes = static_cast<int>(s.nodes.size());
  const int n_branches = static_cast<int>(s.branches.size());
  int n_sub = 0;
  for (const auto& n : s.nodes) n_sub += n.is_substation ? 1 : 0;
  if (n_sub != 1) throw ScenarioError("nodes", fmt::format("radiality needs exactly one substation, found {}", n_sub));
  const int root = s.substation_node();

  std::vector<std::vector<int>> adj(n_nodes);
  for (const auto& b : s.branches) {
    adj[b.from].push_back(b.to);
    adj[b.to].push_back(b.from);
  }
  std::vector<char> seen(n_nodes, 0);
  std::queue<int> frontier;
  frontier.push(root);
  seen[root] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    const int i = frontier.front();
    frontier.pop();
    for (int j : adj[i])
      if (!seen[j]) {
        seen[j] = 1;
        ++reached;
        frontier.push(j);
      }
  }
  if (reached != n_nodes) throw ScenarioError("branches", "fictitious (damage-free) network is disconnected");

  const double n_minus_1 = n_nodes - 1;
  for (int t = 0; t < T; ++t) {
    std::vector<LinExpr> net_in(n_nodes);
    LinExpr edges;
    for (int b = 0; b < n_branches; ++b) {
      const auto& br = s.branches[b];
      const VarId f = g.tree_flow[b][t];
      net_in[br.to].add(f, 1.0);
      net_in[br.from].add(f, -1.0);
      model.add_le(f, n_minus_1 * LinExpr(g.tree[b][t]), fmt::format("scf_ub[{}][{}]", b, t + 1));
      model.add_ge(f, -n_minus_1 * LinExpr(g.tree[b][t]), fmt::format("scf_lb[{}][{}]", b, t + 1));
      edges.add(g.tree[b][t], 1.0);
      model.add_le(g.closed[b][t], g.tree[b][t], fmt::format("closed_in_tree[{}][{}]", b, t + 1));
      model.add_le(g.closed[b][t], g.operable[b][t], fmt::format("closed_operable[{}][{}]", b, t + 1));
    }
    for (int i = 0; i < n_nodes; ++i) {
      const double demand = i == root ? -n_minus_1 : 1.0;
      model.add_eq(net_in[i], demand, fmt::format("scf_balance[{}][{}]", s.nodes[i].id, t + 1));
    }
    model.add_eq(edges, n_minus_1, fmt::format("tree_size[{}]", t + 1));
  }
}

void build_distflow(Model& model, const Scenario& s, const GridVariables& g) {
  const int T = s.periods();
  const int n_nodes = static_cast<int>(s.nodes.size());
  for (int t = 0; t < T; ++t) {
    std::vector<LinExpr> p_bal(n_nodes), q_bal(n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
      const auto& node = s.nodes[i];
      if (t + 1 < T) model.add_le(g.restored[i][t], g.restored[i][t + 1], fmt::format("restored_monotone[{}][{}]", node.id, t + 1));
      p_bal[i].add(g.P[i][t], 1.0).add(g.restored[i][t], -node.p_demand[t]);
      q_bal[i].add(g.Q[i][t], 1.0).add(g.restored[i][t], -node.q_demand[t]);
      if (g.Pg[i][t].valid()) {
        p_bal[i].add(g.Pg[i][t], 1.0);
        q_bal[i].add(g.Qg[i][t], 1.0);
      }
    }
    for (int b = 0; b < static_cast<int>(s.branches.size()); ++b) {
      const auto& br = s.branches[b];
      p_bal[br.to].add(g.pf[b][t], 1.0);
      p_bal[br.from].add(g.pf[b][t], -1.0);
      q_bal[br.to].add(g.qf[b][t], 1.0);
      q_bal[br.from].add(g.qf[b][t], -1.0);

      add_circle_capacity(model, g.pf[b][t], g.qf[b][t], g.closed[b][t], br.s_cap, g.sides);

      // v_i - v_j - 2 (r pf + x qf) / base within +-K (1 - lambda)
      LinExpr drop;
      drop.add(g.v[br.from][t], 1.0).add(g.v[br.to][t], -1.0);
      drop.add(g.pf[b][t], -2.0 * br.r / s.base_kva).add(g.qf[b][t], -2.0 * br.x / s.base_kva);
      const double K = g.big_m[b];
      model.add_le(drop, K * (1.0 - LinExpr(g.closed[b][t])), fmt::format("vdrop_ub[{}][{}]", b, t + 1));
      model.add_ge(drop, -K * (1.0 - LinExpr(g.closed[b][t])), fmt::format("vdrop_lb[{}][{}]", b, t + 1));
    }
    for (int i = 0; i < n_nodes; ++i) {
      model.add_eq(p_bal[i], 0.0, fmt::format("p_balance[{}][{}]", s.nodes[i].id, t + 1));
      model.add_eq(q_bal[i], 0.0, fmt::format("q_balance[{}][{}]", s.nodes[i].id, t + 1));
    }
  }
}

}  // namespace drl
