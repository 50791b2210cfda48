#include <doctest.h>

#include <algorithm>

#include "drl/coupling.hpp"
#include "drl/grid_restoration.hpp"
#include "drl/plan.hpp"
#include "support.hpp"

using namespace drl;

namespace {

// Substation 1 feeding one load at node 2 over r = x = 0.1 p.u.
Scenario two_node(double p_kw, double q_kvar) {
  Scenario s;
  s.name = "two-node";
  s.base_kva = 1000.0;
  s.horizon.periods = 1;
  s.nodes = {test::load_node(1, 0, 0, 1), test::load_node(2, p_kw, q_kvar, 1)};
  s.nodes[0].is_substation = true;
  s.substations = {{0, 5000, 5000}};
  s.branches = {{1, 0, 1, 0.1, 0.1, 2000, false, false}};
  s.depots = {{1}};
  s.transport.crew_travel = {{0}};
  s.transport.crew_dist = {{0}};
  return s;
}

struct GridModel {
  Model model;
  GridVariables g;
};

GridModel grid_only(const Scenario& s) {
  GridModel gm;
  gm.g = add_grid_variables(gm.model, s);
  build_radiality(gm.model, s, gm.g);
  build_distflow(gm.model, s, gm.g);
  return gm;
}

}  // namespace

TEST_CASE("closed branch voltage drop equals 2(r pf + x qf)") {
  const Scenario s = two_node(1000.0, 0.0);
  GridModel gm = grid_only(s);
  gm.model.fix(gm.g.closed[0][0], 1.0);
  gm.model.fix(gm.g.operable[0][0], 1.0);
  gm.model.fix(gm.g.restored[1][0], 1.0);
  gm.model.set_objective(LinExpr(0.0), ObjSense::Maximize);
  const SolveResult r = solve(gm.model, {});
  REQUIRE(r.status == SolveStatus::Optimal);
  const double pf = r.value(gm.g.pf[0][0]), qf = r.value(gm.g.qf[0][0]);
  CHECK(pf == doctest::Approx(1000.0));
  CHECK(qf == doctest::Approx(0.0));
  const double drop = r.value(gm.g.v[0][0]) - r.value(gm.g.v[1][0]);
  CHECK(std::abs(drop - 2.0 * (0.1 * 1.0 + 0.1 * 0.0)) <= 1e-9);
}

TEST_CASE("open branch leaves both voltages free at every corner") {
  const Scenario s = two_node(100.0, 50.0);
  const auto K = big_m_constants(s);
  const double lo = 0.9 * 0.9, hi = 1.05 * 1.05;
  CHECK(K[0] == doctest::Approx(hi - lo + 2.0 * 0.2 * 2000.0 / 1000.0));
  for (double vi : {lo, hi}) {
    for (double vj : {lo, hi}) {
      GridModel gm = grid_only(s);
      gm.model.fix(gm.g.closed[0][0], 0.0);
      gm.model.fix(gm.g.v[0][0], vi);
      gm.model.fix(gm.g.v[1][0], vj);
      gm.model.set_objective(LinExpr(0.0), ObjSense::Maximize);
      CHECK(solve(gm.model, {}).status == SolveStatus::Optimal);
    }
  }
}

TEST_CASE("global big-M policy uses the largest constant") {
  Scenario s = load_scenario(test::data_file("toy6.json"));
  const auto per_branch = big_m_constants(s);
  s.horizon.big_m = BigMPolicy::Global;
  const auto global = big_m_constants(s);
  const double worst = *std::max_element(per_branch.begin(), per_branch.end());
  for (double k : global) CHECK(k == doctest::Approx(worst));
}

TEST_CASE("intact case33 forms a spanning tree in one period") {
  Scenario s = load_scenario(test::data_file("case33.json"));
  s.horizon.periods = 1;
  for (auto& n : s.nodes) {
    n.p_demand.resize(1);
    n.q_demand.resize(1);
  }
  Model m;
  const GridVariables g = add_grid_variables(m, s);
  build_radiality(m, s, g);
  for (std::size_t b = 0; b < s.branches.size(); ++b) m.fix(g.operable[b][0], 1.0);
  LinExpr closed;
  for (const auto& row : g.closed) closed.add(row[0], 1.0);
  m.set_objective(closed, ObjSense::Maximize);
  const SolveResult r = solve(m, {});
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.objective == doctest::Approx(32.0));
  test::DisjointSets tree(s.nodes.size());
  int edges = 0;
  for (std::size_t b = 0; b < s.branches.size(); ++b) {
    if (!r.is_one(g.tree[b][0])) continue;
    ++edges;
    CHECK(tree.unite(s.branches[b].from, s.branches[b].to));
  }
  CHECK(edges == 32);
}

TEST_CASE("tie closures with damaged branches open stay acyclic") {
  Scenario s = load_scenario(test::data_file("case33.json"));
  Model m;
  const GridVariables g = add_grid_variables(m, s);
  build_radiality(m, s, g);
  const int T = s.periods();
  for (std::size_t b = 0; b < s.branches.size(); ++b) {
    const std::string label = s.branch_label(static_cast<int>(b));
    for (int t = 0; t < T; ++t) {
      if (s.branches[b].damaged) m.fix(g.operable[b][t], 0.0);
      else m.fix(g.operable[b][t], 1.0);
      if (label == "25-29" || label == "8-21" || label == "12-22" || label == "18-33") m.fix(g.closed[b][t], 1.0);
    }
  }
  LinExpr closed;
  for (const auto& row : g.closed) closed.add(row[T - 1], 1.0);
  m.set_objective(closed, ObjSense::Maximize);
  const SolveResult r = solve(m, {});
  REQUIRE(r.status == SolveStatus::Optimal);
  for (int t = 0; t < T; ++t) {
    test::DisjointSets forest(s.nodes.size());
    for (std::size_t b = 0; b < s.branches.size(); ++b)
      if (r.is_one(g.closed[b][t])) CHECK(forest.unite(s.branches[b].from, s.branches[b].to));
  }
}

TEST_CASE("radiality rejects disconnected or multi-substation networks") {
  Scenario split = test::chain3(2, false);
  split.branches.pop_back();
  Model m;
  GridVariables g = add_grid_variables(m, split);
  CHECK_THROWS_AS(build_radiality(m, split, g), ScenarioError);

  Scenario twin = test::chain3(2, false);
  twin.nodes[2].is_substation = true;
  Model m2;
  g = add_grid_variables(m2, twin);
  CHECK_THROWS_AS(build_radiality(m2, twin, g), ScenarioError);
}

TEST_CASE("isolated load without a source stays dark") {
  const Scenario s = test::chain3(3);
  CoOptConfig cfg;
  cfg.enable_crews = false;
  CoOptModel cm = build_coopt_model(s, cfg);
  const SolveResult r = solve(cm.model, {});
  REQUIRE(r.status == SolveStatus::Optimal);
  for (int t = 0; t < 3; ++t) {
    CHECK(r.is_one(cm.grid.restored[1][t]));
    CHECK_FALSE(r.is_one(cm.grid.restored[2][t]));
  }
}

TEST_CASE("substation caps bound the served load") {
  Scenario s = test::chain3(2, false);
  s.substations[0].p_max = 120.0;
  const RestorationPlan plan = [&] {
    CoOptModel cm = build_coopt_model(s);
    const SolveResult r = solve(cm.model, {});
    REQUIRE(r.status == SolveStatus::Optimal);
    return decode_plan(s, cm, r);
  }();
  // 100 + 80 > 120: the weight-2 node wins.
  for (int t = 0; t < 2; ++t) {
    CHECK(plan.restored[2][t] == 1);
    CHECK(plan.restored[1][t] == 0);
  }
}
