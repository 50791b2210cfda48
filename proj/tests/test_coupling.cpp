#include <doctest.h>

#include "drl/coupling.hpp"
#include "drl/plan.hpp"
#include "support.hpp"

using namespace drl;

namespace {

RestorationPlan solve_plan(const Scenario& s, const CoOptConfig& cfg = {}) {
  CoOptModel cm = build_coopt_model(s, cfg);
  const SolveResult r = solve(cm.model, {});
  REQUIRE(r.status == SolveStatus::Optimal);
  return decode_plan(s, cm, r);
}

int first_on(const std::vector<int>& row) {
  for (std::size_t t = 0; t < row.size(); ++t)
    if (row[t]) return static_cast<int>(t) + 1;
  return 0;
}

}  // namespace

TEST_CASE("a branch repaired at t is operable from t+1") {
  const Scenario s = test::chain3(5);
  const RestorationPlan p = solve_plan(s);
  // travel 1, repair during period 2, operable and energized in period 3
  CHECK(first_on(p.repaired[0][0]) == 2);
  CHECK(first_on(p.operable[1]) == 3);
  CHECK(first_on(p.restored[2]) == 3);
  CHECK(first_on(p.closed[1]) == 3);
}

TEST_CASE("intact branches are always operable and switchless ones closed") {
  const Scenario s = test::chain3(3);
  const RestorationPlan p = solve_plan(s);
  for (int t = 0; t < 3; ++t) {
    CHECK(p.operable[0][t] == 1);
    CHECK(p.closed[0][t] == 1);
  }
}

TEST_CASE("a damaged branch never repaired stays open") {
  const Scenario s = test::chain3(4);
  CoOptConfig cfg;
  cfg.enable_crews = false;
  const RestorationPlan p = solve_plan(s, cfg);
  for (int t = 0; t < 4; ++t) {
    CHECK(p.operable[1][t] == 0);
    CHECK(p.closed[1][t] == 0);
  }
}

TEST_CASE("a connected MEG injects its output at its node") {
  Scenario s = test::chain3(2, false);
  test::add_source(s, test::meg(400, 100), 2);
  CoOptModel cm = build_coopt_model(s);
  const auto& sv = cm.mps.sources.at(0);
  for (int t = 0; t < 2; ++t) {
    cm.model.fix(sv.connected[0][t], 1.0);
    cm.model.fix(sv.gp[t], 400.0);
  }
  const SolveResult r = solve(cm.model, {});
  REQUIRE(r.status == SolveStatus::Optimal);
  for (int t = 0; t < 2; ++t) {
    CHECK(r.value(cm.grid.P[2][t]) == doctest::Approx(400.0));
    CHECK(r.value(cm.grid.P[1][t]) == doctest::Approx(0.0));
  }
}

TEST_CASE("MESS charging draws power at its node") {
  Scenario s = test::chain3(2, false);
  test::add_source(s, test::mess(50, 0.9, 0, 200, 0), 2);
  CoOptModel cm = build_coopt_model(s);
  const auto& sv = cm.mps.sources.at(0);
  cm.model.fix(sv.charging[0], 1.0);
  cm.model.fix(sv.cp[0], 50.0);
  const SolveResult r = solve(cm.model, {});
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.value(cm.grid.P[2][0]) == doctest::Approx(-50.0));
}

TEST_CASE("objective of a healthy grid is T times the weighted load") {
  const Scenario s = test::chain3(4, false);
  const RestorationPlan p = solve_plan(s);
  double weighted = 0.0;
  for (const auto& n : s.nodes) weighted += n.weight * n.p_demand[0];
  CHECK(p.objective == doctest::Approx(4 * weighted));
  CHECK(plan_objective(s, p) == doctest::Approx(4 * weighted));
}

TEST_CASE("reactive demand term") {
  const Scenario s = test::chain3(2, false);
  CoOptConfig cfg;
  cfg.demand_term = DemandTerm::Reactive;
  const RestorationPlan p = solve_plan(s, cfg);
  CHECK(p.objective == doctest::Approx(2 * (30.0 + 2 * 20.0)));
}

TEST_CASE("fewer travel periods score higher at equal restored load") {
  const Scenario s = test::chain3(5);
  RestorationPlan p = solve_plan(s);
  const double base = plan_objective(s, p);
  RestorationPlan detour = p;
  const int last = s.periods() - 1;
  REQUIRE(detour.crew_at[0][last] >= 0);
  detour.crew_at[0][last] = -1;
  CHECK(plan_objective(s, detour) == doctest::Approx(base - *s.horizon.epsilon));
  CHECK(plan_objective(s, detour) < base);
}

TEST_CASE("candidate nodes default to every candidate plus initial positions") {
  Scenario s = test::chain3(2, false);
  test::add_source(s, test::meg(10, 10), 2);
  s.nodes[1].is_candidate = true;
  s.nodes[1].vol = 1;
  s.transport.mps_travel = {{0, 1}, {1, 0}};
  s.transport.node_dist = {{0, 1}, {1, 0}};
  CHECK(build_coopt_model(s).candidate_nodes == std::vector<int>{1, 2});
  CoOptConfig cfg;
  cfg.candidate_nodes = std::vector<int>{1};
  CHECK(build_coopt_model(s, cfg).candidate_nodes == std::vector<int>{1, 2});
}
