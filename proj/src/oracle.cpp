#include "drl/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <tuple>

#include <fmt/core.h>

#include "drl/milp.hpp"

namespace drl {

namespace {

using Sequence = std::vector<int>;

// All position sequences over `options` (-1 = traveling) that respect the
// travel windows, starting from `start` at virtual period 0.
std::vector<Sequence> itineraries(int T, int start, const std::vector<int>& options,
                                  const std::function<int(int, int)>& travel) {
  std::vector<Sequence> out;
  Sequence seq;
  std::function<void()> extend = [&] {
    const int t = static_cast<int>(seq.size()) + 1;
    if (t > T) {
      out.push_back(seq);
      return;
    }
    for (int n : options) {
      bool ok = true;
      if (n >= 0) {
        for (int t1 = 0; t1 < t && ok; ++t1) {
          const int m = t1 == 0 ? start : seq[t1 - 1];
          if (m < 0 || m == n) continue;
          ok = t - t1 > travel(m, n);
        }
      }
      if (!ok) continue;
      seq.push_back(n);
      extend();
      seq.pop_back();
    }
  };
  extend();
  return out;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

class PeriodFeasibility {
 public:
  PeriodFeasibility(const Scenario& s, const std::vector<int>& loads, int sides)
      : s_(s), loads_(loads), sides_(sides) {}

  // Can the loads in `mask` be served at period t (0-based) with the given
  // operable damaged components and the MEG at `src` (-1 if none)?
  bool operator()(int t, int op_mask, int src, int mask) {
    const auto key = std::make_tuple(t, op_mask, src, mask);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    const bool ok = check(t, op_mask, src, mask);
    cache_.emplace(key, ok);
    return ok;
  }

  long checks = 0;

 private:
  bool check(int t, int op_mask, int src, int mask) {
    const int n_nodes = static_cast<int>(s_.nodes.size());
    std::vector<int> fixed, optional;
    for (int b = 0; b < static_cast<int>(s_.branches.size()); ++b) {
      const auto& br = s_.branches[b];
      if (br.damaged) {
        if (op_mask >> *s_.damaged_of_branch(b) & 1) optional.push_back(b);
      } else if (br.has_switch) {
        optional.push_back(b);
      } else {
        fixed.push_back(b);
      }
    }
    std::vector<char> served(n_nodes, 0);
    for (std::size_t k = 0; k < loads_.size(); ++k)
      if (mask >> k & 1) served[loads_[k]] = 1;

    for (int pick = 0; pick < (1 << optional.size()); ++pick) {
      std::vector<int> closed = fixed;
      for (std::size_t k = 0; k < optional.size(); ++k)
        if (pick >> k & 1) closed.push_back(optional[k]);
      UnionFind uf(n_nodes);
      bool acyclic = true;
      for (int b : closed) acyclic = acyclic && uf.unite(s_.branches[b].from, s_.branches[b].to);
      if (!acyclic) continue;
      std::vector<char> fed(n_nodes, 0);
      for (int i = 0; i < n_nodes; ++i)
        if (s_.nodes[i].is_substation || i == src) fed[uf.find(i)] = 1;
      bool reachable = true;
      for (int i = 0; i < n_nodes; ++i) reachable = reachable && (!served[i] || fed[uf.find(i)]);
      if (!reachable) continue;
      if (flow_feasible(t, closed, src, served)) return true;
    }
    return false;
  }

  bool flow_feasible(int t, const std::vector<int>& closed, int src, const std::vector<char>& served) {
    ++checks;
    const int n_nodes = static_cast<int>(s_.nodes.size());
    Model m;
    std::vector<LinExpr> p_bal(n_nodes), q_bal(n_nodes);
    std::vector<VarId> v(n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
      const auto& node = s_.nodes[i];
      v[i] = m.add_continuous(node.v_min * node.v_min, node.v_max * node.v_max, fmt::format("v{}", i));
      if (served[i]) {
        p_bal[i] += LinExpr(-node.p_demand[t]);
        q_bal[i] += LinExpr(-node.q_demand[t]);
      }
    }
    for (const auto& cap : s_.substations) {
      p_bal[cap.node].add(m.add_continuous(-cap.p_max, cap.p_max, "Pg"), 1.0);
      q_bal[cap.node].add(m.add_continuous(-cap.q_max, cap.q_max, "Qg"), 1.0);
    }
    if (src >= 0) {
      const auto& meg = s_.sources.front();
      p_bal[src].add(m.add_continuous(0.0, meg.gp_max, "P"), 1.0);
      q_bal[src].add(m.add_continuous(0.0, meg.gq_max, "Q"), 1.0);
    }
    const double reach = 1.0 / std::cos(std::numbers::pi / sides_);
    for (int b : closed) {
      const auto& br = s_.branches[b];
      const VarId pf = m.add_continuous(-br.s_cap * reach, br.s_cap * reach, fmt::format("pf{}", b));
      const VarId qf = m.add_continuous(-br.s_cap * reach, br.s_cap * reach, fmt::format("qf{}", b));
      p_bal[br.to].add(pf, 1.0);
      p_bal[br.from].add(pf, -1.0);
      q_bal[br.to].add(qf, 1.0);
      q_bal[br.from].add(qf, -1.0);
      for (int k = 0; k < sides_; ++k) {
        const double theta = 2.0 * std::numbers::pi * k / sides_;
        LinExpr facet;
        facet.add(pf, std::cos(theta)).add(qf, std::sin(theta));
        m.add_le(facet, br.s_cap, fmt::format("cap{}_{}", b, k));
      }
      LinExpr drop;
      drop.add(v[br.from], 1.0).add(v[br.to], -1.0);
      drop.add(pf, -2.0 * br.r / s_.base_kva).add(qf, -2.0 * br.x / s_.base_kva);
      m.add_eq(drop, 0.0, fmt::format("drop{}", b));
    }
    for (int i = 0; i < n_nodes; ++i) {
      if (p_bal[i].terms().empty() && p_bal[i].constant() == 0.0 && q_bal[i].terms().empty() &&
          q_bal[i].constant() == 0.0)
        continue;
      if (p_bal[i].terms().empty() || q_bal[i].terms().empty()) {
        // A served load with no adjacent flow or source: infeasible unless demand is zero.
        if (std::abs(p_bal[i].constant()) > 1e-12 && p_bal[i].terms().empty()) return false;
        if (std::abs(q_bal[i].constant()) > 1e-12 && q_bal[i].terms().empty()) return false;
      }
      if (!p_bal[i].terms().empty()) m.add_eq(p_bal[i], 0.0, fmt::format("pb{}", i));
      if (!q_bal[i].terms().empty()) m.add_eq(q_bal[i], 0.0, fmt::format("qb{}", i));
    }
    m.set_objective(LinExpr(), ObjSense::Maximize);
    const SolveResult r = solve(m, SolveOptions{});
    if (r.status == SolveStatus::Error) throw BackendError("oracle LP failed: " + r.message);
    return r.status == SolveStatus::Optimal;
  }

  const Scenario& s_;
  std::vector<int> loads_;
  int sides_;
  std::map<std::tuple<int, int, int, int>, bool> cache_;
};

}  // namespace

OracleResult brute_force_optimum(const Scenario& s, const OracleOptions& opts) {
  const int T = s.periods();
  const int n_damaged = static_cast<int>(s.damaged.size());
  const auto candidates = s.candidate_nodes();
  if (n_damaged > 2 || s.crews.size() > 1 || s.sources.size() > 1 || T > 6 || candidates.size() > 2)
    throw OracleError("instance too large for exhaustive enumeration");
  for (const auto& src : s.sources)
    if (src.is_mess()) throw OracleError("oracle handles MEG sources only");

  // Crew itineraries, grouped by the per-period operable set they unlock.
  std::map<std::vector<int>, std::pair<int, Sequence>> by_operable;  // op masks -> (travel periods, itinerary)
  if (s.crews.empty()) {
    by_operable[std::vector<int>(T, 0)] = {0, {}};
  } else {
    const auto& crew = s.crews.front();
    const int depot = s.depot_vertex(crew.depot);
    std::vector<int> options{-1};
    for (int m = 0; m < n_damaged; ++m) options.push_back(m);
    options.push_back(depot);
    auto travel = [&](int a, int b) { return s.transport.crew_travel[a][b]; };
    for (const auto& seq : itineraries(T, depot, options, travel)) {
      const int moving = static_cast<int>(std::count(seq.begin(), seq.end(), -1));
      std::vector<int> done(n_damaged, -1);  // completion period, 1-based
      for (int m = 0; m < n_damaged; ++m) {
        int visits = 0;
        for (int t = 0; t < T && done[m] < 0; ++t) {
          visits += seq[t] == m ? 1 : 0;
          if (visits >= crew.repair_time[m]) done[m] = t + 1;
        }
      }
      for (int subset = 0; subset < (1 << n_damaged); ++subset) {
        double used = 0.0;
        bool ok = true;
        for (int m = 0; m < n_damaged; ++m) {
          if (!(subset >> m & 1)) continue;
          ok = ok && done[m] > 0;
          used += s.damaged[m].rs;
        }
        if (!ok || used > crew.capacity + 1e-9) continue;
        std::vector<int> op(T, 0);
        for (int t = 1; t <= T; ++t)
          for (int m = 0; m < n_damaged; ++m)
            if ((subset >> m & 1) && done[m] <= t - 1) op[t - 1] |= 1 << m;
        auto it = by_operable.find(op);
        if (it == by_operable.end() || moving < it->second.first) by_operable[op] = {moving, seq};
      }
    }
  }

  std::vector<Sequence> source_plans;
  if (s.sources.empty()) {
    source_plans.push_back(Sequence(T, -1));
  } else {
    const auto& meg = s.sources.front();
    std::vector<int> options{-1};
    for (int i : candidates)
      if (s.nodes[i].vol >= 1) options.push_back(i);
    auto travel = [&](int a, int b) {
      return s.transport.mps_travel[s.candidate_position(a)][s.candidate_position(b)];
    };
    source_plans = itineraries(T, meg.initial_node.value_or(-1), options, travel);
  }

  std::vector<int> loads;
  for (int i = 0; i < static_cast<int>(s.nodes.size()); ++i) {
    const auto& node = s.nodes[i];
    const auto& demand = opts.demand_term == DemandTerm::Real ? node.p_demand : node.q_demand;
    if (node.weight > 0.0 && std::any_of(demand.begin(), demand.end(), [](double d) { return d > 0.0; }))
      loads.push_back(i);
  }
  const int n_masks = 1 << loads.size();
  auto value = [&](int t, int mask) {
    double total = 0.0;
    for (std::size_t k = 0; k < loads.size(); ++k) {
      if (!(mask >> k & 1)) continue;
      const auto& node = s.nodes[loads[k]];
      total += node.weight * (opts.demand_term == DemandTerm::Real ? node.p_demand[t] : node.q_demand[t]);
    }
    return total;
  };

  const double eps = s.effective_epsilon();
  PeriodFeasibility feasible(s, loads, opts.sides);
  constexpr double kNone = -std::numeric_limits<double>::infinity();
  OracleResult best;
  best.objective = kNone;
  for (const auto& [op, crew_plan] : by_operable) {
    for (const auto& src_plan : source_plans) {
      const int src_moving = s.sources.empty() ? 0 : static_cast<int>(std::count(src_plan.begin(), src_plan.end(), -1));
      const double penalty = eps * (crew_plan.first + src_moving);
      // DP over monotone restored sets.
      std::vector<std::vector<double>> score(T, std::vector<double>(n_masks, kNone));
      std::vector<std::vector<int>> from(T, std::vector<int>(n_masks, -1));
      for (int t = 0; t < T; ++t) {
        for (int mask = 0; mask < n_masks; ++mask) {
          double prior = 0.0;
          int arg = 0;
          if (t > 0) {
            prior = kNone;
            for (int sub = mask;; sub = (sub - 1) & mask) {
              if (score[t - 1][sub] > prior) {
                prior = score[t - 1][sub];
                arg = sub;
              }
              if (sub == 0) break;
            }
            if (prior == kNone) continue;
          }
          if (!feasible(t, op[t], src_plan[t], mask)) continue;
          score[t][mask] = prior + value(t, mask);
          from[t][mask] = arg;
        }
      }
      int end = -1;
      for (int mask = 0; mask < n_masks; ++mask)
        if (score[T - 1][mask] != kNone && (end < 0 || score[T - 1][mask] > score[T - 1][end] + 1e-9)) end = mask;
      if (end < 0) continue;
      const double total = score[T - 1][end] - penalty;
      if (best.objective != kNone && total <= best.objective + 1e-9) continue;
      best.objective = total;
      best.crew_at = crew_plan.second;
      best.source_at = s.sources.empty() ? Sequence{} : src_plan;
      best.restored_nodes.assign(T, {});
      best.served_kw.assign(T, 0.0);
      for (int t = T - 1, mask = end; t >= 0; mask = from[t][mask], --t) {
        for (std::size_t k = 0; k < loads.size(); ++k)
          if (mask >> k & 1) {
            best.restored_nodes[t].push_back(loads[k]);
            best.served_kw[t] += s.nodes[loads[k]].p_demand[t];
          }
      }
    }
  }
  if (best.objective == kNone) throw OracleError("no feasible plan found");
  best.feasibility_checks = feasible.checks;
  return best;
}

}  // namespace drl
