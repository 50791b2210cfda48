// Acceptance checks 1-9 on the bundled fixtures. One PASS/FAIL line each.
#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "drl/coupling.hpp"
#include "drl/oracle.hpp"
#include "drl/pipeline.hpp"
#include "drl/plan.hpp"
#include "drl/preprocess.hpp"
#include "drl/validator.hpp"
#include "support.hpp"

using namespace drl;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Ledger {
  std::map<int, bool> passed;
  void record(int id, bool ok, const std::string& what, const std::string& detail) {
    passed[id] = ok;
    fmt::print("criterion {} {}: {} ({})\n", id, ok ? "PASS" : "FAIL", what, detail);
    std::fflush(stdout);
  }
};

std::set<int> ids_of(const Scenario& s, const std::vector<int>& nodes) {
  std::set<int> out;
  for (int i : nodes) out.insert(s.nodes[i].id);
  return out;
}

std::string join(const std::set<int>& v) {
  std::string out;
  for (int x : v) out += (out.empty() ? "" : ",") + std::to_string(x);
  return "{" + out + "}";
}

// Single period at peak demand, no crews or sources; the branches of
// `repaired` are intact. Full supply iff every weighted load is served.
bool full_supply_oracle(const Scenario& base, const std::vector<int>& repaired) {
  Scenario s = base;
  s.horizon.periods = 1;
  for (auto& n : s.nodes) {
    n.p_demand = {n.peak_p()};
    n.q_demand = {n.peak_q()};
  }
  for (int m : repaired) s.branches[s.damaged[m].branch].damaged = false;
  std::vector<DamagedComponent> left;
  for (const auto& d : s.damaged)
    if (s.branches[d.branch].damaged) left.push_back(d);
  s.damaged = left;
  s.crews.clear();
  s.sources.clear();
  const std::size_t nv = s.num_vertices();
  s.transport.crew_travel.assign(nv, std::vector<int>(nv, 0));
  s.transport.crew_dist.assign(nv, std::vector<double>(nv, 0.0));
  CoOptConfig cfg;
  cfg.enable_crews = false;
  cfg.enable_sources = false;
  CoOptModel cm = build_coopt_model(s, cfg);
  const SolveResult r = solve(cm.model, {});
  if (r.status != SolveStatus::Optimal) return false;
  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    const bool has_load = s.nodes[i].p_demand[0] > 0.0 || s.nodes[i].q_demand[0] > 0.0;
    if (has_load && !r.is_one(cm.grid.restored[i][0])) return false;
  }
  return true;
}

struct NamedRun {
  std::string name;
  RunConfig cfg;
  RunOutcome out;
  double wall = 0.0;
};

std::vector<NamedRun> toggle_runs(const std::string& fixture, double time_limit) {
  RunConfig base;
  base.scenario = test::data_file(fixture);
  base.solve.time_limit = time_limit;
  std::vector<NamedRun> runs;
  auto add = [&](std::string name, std::function<void(RunConfig&)> edit) {
    NamedRun r{std::move(name), base, {}, 0.0};
    edit(r.cfg);
    runs.push_back(std::move(r));
  };
  add("proposed", [](RunConfig&) {});
  add("nodes-reduced-only", [](RunConfig& c) { c.preassign = false; });
  add("minimal-repairs-only", [](RunConfig& c) { c.node_reduction = false; });
  add("all-repairs-only", [](RunConfig& c) {
    c.assign_mode = AssignMode::All;
    c.node_reduction = false;
  });
  add("no-preprocessing", [](RunConfig& c) {
    c.preassign = false;
    c.node_reduction = false;
  });
  const Scenario s = load_scenario(base.scenario);
  for (auto& r : runs) {
    const auto start = Clock::now();
    r.out = run_solve(s, r.cfg);
    r.wall = seconds_since(start);
    fmt::print("  {} {}: status {}, objective {:.6f}, binaries {}, {:.1f} s\n", fixture, r.name,
               to_string(r.out.status), r.out.plan ? r.out.plan->objective : NAN, r.out.binaries, r.wall);
    std::fflush(stdout);
  }
  return runs;
}

}  // namespace

int main() {
  Ledger ledger;
  const Scenario case33 = load_scenario(test::data_file("case33.json"));
  const Scenario toy6 = load_scenario(test::data_file("toy6.json"));

  {
    const auto start = Clock::now();
    const IslandPartition p = detect_islands(case33);
    const double elapsed = seconds_since(start);
    std::set<std::set<int>> got;
    for (const auto& c : p.candidate_sets)
      if (!c.empty()) got.insert(ids_of(case33, c));
    const std::set<std::set<int>> want{{2}, {5, 29}, {8, 15, 21}, {33}};
    std::string shown;
    for (const auto& c : got) shown += join(c);
    ledger.record(1, got == want && p.candidate_sets.size() == 4 && elapsed < 1.0, "island detection on case33",
                  fmt::format("{} islands, candidate sets {}, {:.3f} s", p.islands.size(), shown, elapsed));
  }

  {
    const PreAssignment pa = preassign_min_repairs(case33);
    std::set<std::string> unassigned;
    for (int m : pa.unassigned) unassigned.insert(case33.branch_label(case33.damaged[m].branch));
    const std::set<std::string> want{"10-11", "16-17", "19-20", "9-15"};
    const auto start = Clock::now();
    const int n = static_cast<int>(case33.damaged.size());
    int checked = 0, small_feasible = 0;
    for (int mask = 0; mask < (1 << n); ++mask) {
      if (std::popcount(static_cast<unsigned>(mask)) > 3) continue;
      std::vector<int> subset;
      for (int m = 0; m < n; ++m)
        if (mask & (1 << m)) subset.push_back(m);
      ++checked;
      if (full_supply_oracle(case33, subset)) ++small_feasible;
    }
    const double sweep = seconds_since(start);
    const bool chosen_ok = full_supply_oracle(case33, pa.assigned);
    std::string shown;
    for (const auto& b : unassigned) shown += (shown.empty() ? "" : ",") + b;
    ledger.record(2,
                  pa.assigned.size() == 4 && unassigned == want && small_feasible == 0 && chosen_ok && sweep < 120.0,
                  "minimal repair cardinality on case33",
                  fmt::format("{} assigned, unassigned {{{}}}, {} subsets of size <= 3 swept with {} feasible, "
                              "chosen set supplies all loads: {}, sweep {:.1f} s",
                              pa.assigned.size(), shown, checked, small_feasible, chosen_ok ? "yes" : "no", sweep));
  }

  {
    const IslandPartition p = detect_islands(case33);
    const CandidateSelection sel = select_candidates(case33, p);
    std::vector<std::vector<int>> sets;
    for (const auto& c : p.candidate_sets)
      if (!c.empty()) sets.push_back(c);
    // Enumerate the cartesian product of the islands' candidate sets.
    double best = INFINITY;
    std::vector<std::vector<int>> optima;
    int enumerated = 0;
    std::vector<int> pick(sets.size());
    std::function<void(std::size_t)> walk = [&](std::size_t k) {
      if (k == sets.size()) {
        ++enumerated;
        double d = 0.0;
        for (std::size_t a = 0; a < pick.size(); ++a)
          for (std::size_t b = a + 1; b < pick.size(); ++b)
            d += case33.transport.node_dist[case33.candidate_position(pick[a])][case33.candidate_position(pick[b])];
        if (d < best - 1e-9) {
          best = d;
          optima.clear();
        }
        if (std::abs(d - best) <= 1e-9) optima.push_back(pick);
        return;
      }
      for (int c : sets[k]) {
        pick[k] = c;
        walk(k + 1);
      }
    };
    walk(0);
    const std::set<int> got = ids_of(case33, sel.selected);
    const bool forced = got.count(2) && got.count(33);
    const bool certified = optima.size() == 1 && ids_of(case33, optima[0]) == got &&
                           std::abs(sel.total_distance - best) <= 1e-9;
    ledger.record(3, forced && certified && got == std::set<int>{2, 8, 29, 33} && enumerated <= 6,
                  "candidate forcing and selection on case33",
                  fmt::format("selected {}, distance {}, exhaustive optimum {} over {} selections ({} optimal)",
                              join(got), sel.total_distance, best, enumerated, optima.size()));
  }

  {
    const auto start = Clock::now();
    const OracleResult o = brute_force_optimum(toy6);
    CoOptModel cm = build_coopt_model(toy6);
    const SolveResult r = solve(cm.model, {});
    const double elapsed = seconds_since(start);
    bool ok = r.status == SolveStatus::Optimal;
    std::string detail = fmt::format("status {}", to_string(r.status));
    if (ok) {
      const RestorationPlan plan = decode_plan(toy6, cm, r);
      // Split into the weighted restored-load term (integer data here) and the travel term.
      const double eps = toy6.effective_epsilon();
      const double milp_load = plan_objective(toy6, plan) + eps * travel_periods(plan);
      double oracle_load = 0.0;
      for (std::size_t t = 0; t < o.restored_nodes.size(); ++t)
        for (int i : o.restored_nodes[t]) oracle_load += toy6.nodes[i].weight * toy6.nodes[i].p_demand[t];
      const double oracle_travel = (o.objective - oracle_load) / -eps;
      ok = std::llround(milp_load) == std::llround(oracle_load) && std::abs(milp_load - oracle_load) <= 1e-6 &&
           std::abs(r.objective - o.objective) <= 1e-6 && std::abs(plan.objective - o.objective) <= 1e-6 &&
           elapsed < 300.0;
      detail = fmt::format("MILP {:.9f}, oracle {:.9f}, load term {} vs {}, travel periods {} vs {:.0f}, "
                           "{} LP checks, {:.1f} s",
                           r.objective, o.objective, milp_load, oracle_load, travel_periods(plan), oracle_travel,
                           o.feasibility_checks, elapsed);
    }
    ledger.record(4, ok, "oracle equivalence on toy6", detail);
  }

  const auto toy_runs = toggle_runs("toy6.json", 600.0);
  const auto case_runs = toggle_runs("case33.json", 1800.0);

  {
    bool ok = true;
    double worst = 0.0;
    int checked = 0;
    std::string bad;
    for (const auto* runs : {&toy_runs, &case_runs}) {
      for (const auto& r : *runs) {
        if (!r.out.plan || !r.out.report) {
          ok = false;
          bad += " " + r.name + "(no plan)";
          continue;
        }
        ++checked;
        const ViolationReport& rep = *r.out.report;
        worst = std::max(worst, rep.worst_residual);
        if (rep.worst_residual > 1e-6 || !rep.radial) {
          ok = false;
          bad += " " + r.name;
        }
      }
    }
    ledger.record(5, ok, "end-to-end feasibility for every fixture and toggle",
                  fmt::format("{} plans validated, worst residual {:.2e}{}", checked, worst,
                              bad.empty() ? "" : ", failing:" + bad));
  }

  {
    std::vector<double> objectives;
    for (const auto& r : case_runs)
      if (r.out.status == SolveStatus::Optimal) objectives.push_back(r.out.plan->objective);
    const auto [lo, hi] = std::minmax_element(objectives.begin(), objectives.end());
    const bool same = !objectives.empty() && *hi - *lo <= 1e-6;
    const std::size_t none = case_runs.back().out.binaries;
    bool fewer = true;
    std::string counts;
    for (const auto& r : case_runs) {
      counts += fmt::format("{}{}={}", counts.empty() ? "" : ", ", r.name, r.out.binaries);
      if (r.name != "no-preprocessing" && r.out.binaries >= none) fewer = false;
    }
    ledger.record(6, same && fewer && objectives.size() >= 2, "preprocessing neutrality on case33",
                  fmt::format("{} of {} configurations optimal, objective spread {:.2e}, binaries {}",
                              objectives.size(), case_runs.size(), objectives.empty() ? NAN : *hi - *lo, counts));
  }

  {
    const NamedRun& both = case_runs.front();
    bool ok = both.out.plan.has_value();
    std::string detail = "no plan";
    if (ok) {
      const auto share = served_share(case33, both.out.plan->restored);
      const auto curve = served_kw(case33, both.out.plan->restored);
      bool monotone = true;
      for (std::size_t t = 1; t < curve.size(); ++t) monotone = monotone && curve[t] >= curve[t - 1] - 1e-9;
      const bool full = std::abs(share.back() - 1.0) <= 1e-9;
      bool dominates = true;
      std::string others;
      for (const char* name : {"crews-only", "sources-only"}) {
        RunConfig cfg = both.cfg;
        cfg.crews = std::string(name) != "sources-only";
        cfg.sources = std::string(name) != "crews-only";
        const RunOutcome o = run_solve(case33, cfg);
        if (!o.plan) {
          dominates = false;
          others += fmt::format(", {} has no plan", name);
          continue;
        }
        const auto other = served_kw(case33, o.plan->restored);
        int worse = 0;
        for (std::size_t t = 0; t < curve.size(); ++t)
          if (curve[t] < other[t] - 1e-6) ++worse;
        dominates = dominates && worse == 0;
        others += fmt::format(", {} ends at {:.1f}% ({} periods above co-optimized)", name,
                              100.0 * served_share(case33, o.plan->restored).back(), worse);
      }
      ok = monotone && full && dominates;
      std::string shown;
      for (double x : share) shown += fmt::format("{}{:.0f}", shown.empty() ? "" : " ", 100.0 * x);
      detail = fmt::format("co-optimized % served per period [{}], monotone {}{}", shown, monotone ? "yes" : "no",
                           others);
    }
    ledger.record(7, ok, "full restoration, monotonicity and dominance on case33", detail);
  }

  {
    Scenario s = test::chain3(2, false);
    test::add_source(s, test::mess(300, 0.95, 0, 1000, 0), 2);
    s.horizon.dt = 0.5;
    Model m;
    const MpsVariables mps = build_mps_constraints(m, s, s.candidate_nodes());
    const auto& sv = mps.sources[0];
    for (int t = 0; t < 2; ++t) {
      m.fix(sv.charging[t], 1.0);
      m.fix(sv.cp[t], 300.0);
    }
    m.set_objective(LinExpr(0.0), ObjSense::Maximize);
    const SolveResult r = solve(m, {});
    const double by_hand = 0.0 + 300.0 * 0.95 * 0.5 + 300.0 * 0.95 * 0.5;
    const double soc = r.has_solution() ? r.value(sv.soc[1]) : NAN;

    Scenario two;
    two.base_kva = 1000.0;
    two.horizon.periods = 1;
    two.nodes = {test::load_node(1, 0, 0, 1), test::load_node(2, 300, 120, 1)};
    two.nodes[0].is_substation = true;
    two.substations = {{0, 5000, 5000}};
    two.branches = {{1, 0, 1, 0.1, 0.1, 2000, false, false}};
    two.depots = {{1}};
    two.transport.crew_travel = {{0}};
    two.transport.crew_dist = {{0}};
    CoOptModel cm = build_coopt_model(two);
    const SolveResult g = solve(cm.model, {});
    double residual = NAN;
    if (g.has_solution()) {
      const double pf = g.value(cm.grid.pf[0][0]) / two.base_kva, qf = g.value(cm.grid.qf[0][0]) / two.base_kva;
      const double drop = g.value(cm.grid.v[0][0]) - g.value(cm.grid.v[1][0]);
      residual = std::abs(drop - 2.0 * (0.1 * pf + 0.1 * qf));
    }
    ledger.record(8, std::abs(soc - 285.0) <= 1e-9 && std::abs(by_hand - 285.0) <= 1e-12 && residual <= 1e-9,
                  "physics spot-checks",
                  fmt::format("SoC {:.9f} kWh vs hand {} kWh, voltage-drop residual {:.2e}", soc, by_hand, residual));
  }

  {
    // Run to a 1% gap under a 10 minute limit.
    RunConfig cfg;
    cfg.scenario = test::data_file("case33.json");
    cfg.solve.time_limit = 600.0;
    cfg.solve.mip_gap = 0.01;
    const auto start = Clock::now();
    const RunOutcome o = run_solve(case33, cfg);
    const double elapsed = seconds_since(start);
    const double gap = o.plan ? o.plan->mip_gap : INFINITY;
    ledger.record(9, o.status == SolveStatus::Optimal && gap <= 0.01 && elapsed <= 600.0,
                  "desk-scale performance on case33",
                  fmt::format("status {}, gap {:.2e}, {:.1f} s wall including preprocessing", to_string(o.status), gap,
                              elapsed));
  }

  int failed = 0;
  for (const auto& [id, ok] : ledger.passed) failed += ok ? 0 : 1;
  fmt::print("{} of {} criteria passed\n", ledger.passed.size() - failed, ledger.passed.size());
  return failed == 0 ? 0 : 1;
}
