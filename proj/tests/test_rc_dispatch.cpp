#include <doctest.h>

#include "drl/rc_dispatch.hpp"
#include "support.hpp"

using namespace drl;

namespace {

// Chain 1-2-3-4 with 2-3 and 3-4 damaged; V = {2-3, 3-4, depot}.
Scenario two_tasks(int T, int tr_between, int rt0) {
  Scenario s;
  s.horizon.periods = T;
  s.base_kva = 1000.0;
  for (int id = 1; id <= 4; ++id) s.nodes.push_back(test::load_node(id, id == 1 ? 0 : 50, 10, T));
  s.nodes[0].is_substation = true;
  s.substations = {{0, 1000, 1000}};
  s.branches = {{1, 0, 1, 0.01, 0.01, 500, false, false},
                {2, 1, 2, 0.01, 0.01, 500, false, true},
                {3, 2, 3, 0.01, 0.01, 500, false, true}};
  s.damaged = {{1, 1, 1}, {2, 2, 1}};
  s.depots = {{1}};
  s.crews = {{1, 0, 2.0, {rt0, 1}}};
  s.transport.crew_travel = {{0, tr_between, 0}, {tr_between, 0, 0}, {0, 0, 0}};
  s.transport.crew_dist = {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
  return s;
}

VarId at(const RcVariables& rc, int vertex, int t) {
  const auto& c = rc.crews.at(0);
  return c.at.at(c.slot_of_vertex(vertex)).at(t - 1);
}

VarId z(const RcVariables& rc, int m, int t) {
  const auto& c = rc.crews.at(0);
  return c.repaired.at(c.slot_of_task(m)).at(t - 1);
}

double best(Model& m, const LinExpr& objective) {
  m.set_objective(objective, ObjSense::Maximize);
  const SolveResult r = solve(m, {});
  REQUIRE(r.status == SolveStatus::Optimal);
  return r.objective;
}

}  // namespace

TEST_CASE("repair needs rt visits before z can switch on") {
  const Scenario s = two_tasks(4, 1, 2);
  Model m;
  const RcVariables rc = build_rc_constraints(m, s, unrestricted_tasks(s));
  m.fix(at(rc, 0, 1), 1.0);
  m.fix(at(rc, 0, 2), 1.0);
  Model first = m;
  CHECK(best(first, z(rc, 0, 1)) == doctest::Approx(0.0));
  Model second = m;
  CHECK(best(second, z(rc, 0, 2)) == doctest::Approx(1.0));
}

TEST_CASE("travel window blocks the next vertex until tr periods pass") {
  const Scenario s = two_tasks(5, 2, 1);
  Model m;
  const RcVariables rc = build_rc_constraints(m, s, unrestricted_tasks(s));
  m.fix(at(rc, 0, 1), 1.0);
  Model blocked = m;
  CHECK(best(blocked, LinExpr(at(rc, 1, 2)) + LinExpr(at(rc, 1, 3))) == doctest::Approx(0.0));
  Model open = m;
  CHECK(best(open, at(rc, 1, 4)) == doctest::Approx(1.0));
}

TEST_CASE("crews start at their depot") {
  Scenario s = two_tasks(4, 1, 1);
  s.transport.crew_travel[2][0] = s.transport.crew_travel[0][2] = 3;
  Model m;
  const RcVariables rc = build_rc_constraints(m, s, unrestricted_tasks(s));
  CHECK(best(m, LinExpr(at(rc, 0, 1)) + LinExpr(at(rc, 0, 2)) + LinExpr(at(rc, 0, 3))) == doctest::Approx(0.0));
}

TEST_CASE("resource budget caps completed repairs") {
  Scenario s = two_tasks(6, 1, 1);
  s.crews[0].capacity = 1.0;
  Model m;
  const RcVariables rc = build_rc_constraints(m, s, unrestricted_tasks(s));
  CHECK(best(m, LinExpr(z(rc, 0, 6)) + LinExpr(z(rc, 1, 6))) == doctest::Approx(1.0));
}

TEST_CASE("no damaged components leaves only the depot") {
  Scenario s = test::chain3(3, false);
  s.crews = {{1, 0, 1.0, {}}};
  Model m;
  const RcVariables rc = build_rc_constraints(m, s, unrestricted_tasks(s));
  REQUIRE(rc.crews.size() == 1);
  CHECK(rc.crews[0].vertices == std::vector<int>{0});
  CHECK(rc.crews[0].repaired.empty());
  m.set_objective(LinExpr(0.0), ObjSense::Maximize);
  CHECK(solve(m, {}).status == SolveStatus::Optimal);
}

TEST_CASE("tasks at a depot without crew capacity are rejected") {
  Scenario s = two_tasks(3, 1, 1);
  s.crews[0].capacity = 0.0;
  Model m;
  CHECK_THROWS_AS(build_rc_constraints(m, s, TaskAssignment{{0}}), ModelError);
  CHECK(unrestricted_tasks(s) == TaskAssignment{{}});
}

TEST_CASE("routes render depot, tasks, travel and stop") {
  const Scenario s = two_tasks(6, 1, 2);
  // depot -> 2-3 (2 periods) -> travel -> 3-4 (1 period) -> stays
  const PositionMatrix pos{{0, 0, -1, 1, 1, 1}};
  const auto routes = routes_from_positions(s, pos);
  REQUIRE(routes.size() == 1);
  const auto& c = routes[0].cells;
  CHECK(c[0] == RouteCell{RouteCellKind::Component, 0});
  CHECK(c[1] == RouteCell{RouteCellKind::Component, 0});
  CHECK(c[2].kind == RouteCellKind::Traveling);
  CHECK(c[3] == RouteCell{RouteCellKind::Component, 1});
  CHECK(c[4].kind == RouteCellKind::Stopped);
  CHECK(c[5].kind == RouteCellKind::Stopped);

  const auto idle = routes_from_positions(s, PositionMatrix{{-1, -1, -1, -1, -1, -1}});
  for (const auto& cell : idle[0].cells) CHECK(cell.kind == RouteCellKind::Traveling);

  const auto home = routes_from_positions(s, PositionMatrix{{2, 2, 2, 2, 2, 2}});
  for (const auto& cell : home[0].cells) CHECK(cell.kind == RouteCellKind::Stopped);
}

TEST_CASE("solved routes decode to one place per period") {
  const Scenario s = two_tasks(5, 1, 1);
  Model m;
  const RcVariables rc = build_rc_constraints(m, s, unrestricted_tasks(s));
  LinExpr done;
  for (int t = 1; t <= 5; ++t) done += LinExpr(z(rc, 0, t)) + LinExpr(z(rc, 1, t));
  m.set_objective(done, ObjSense::Maximize);
  const SolveResult r = solve(m, {});
  REQUIRE(r.status == SolveStatus::Optimal);
  const PositionMatrix pos = crew_positions(rc, r);
  REQUIRE(pos.size() == 1);
  CHECK(pos[0].size() == 5);
  CHECK(extract_routes(s, rc, r).size() == 1);
}
