#include <doctest.h>

#include "drl/mps_dispatch.hpp"
#include "support.hpp"

using namespace drl;

namespace {

Scenario with_source(const MobileSource& src, int T, double dt) {
  Scenario s = test::chain3(T, false);
  s.horizon.dt = dt;
  test::add_source(s, src, 2);
  return s;
}

SolveResult optimum(Model& m, const LinExpr& objective, ObjSense sense = ObjSense::Maximize) {
  m.set_objective(objective, sense);
  SolveResult r = solve(m, {});
  REQUIRE(r.status == SolveStatus::Optimal);
  return r;
}

}  // namespace

TEST_CASE("MESS state of charge after two charging periods") {
  const Scenario s = with_source(test::mess(300, 0.95, 0, 1000, 0), 2, 0.5);
  Model m;
  const MpsVariables mps = build_mps_constraints(m, s, s.candidate_nodes());
  const auto& sv = mps.sources.at(0);
  for (int t = 0; t < 2; ++t) {
    m.fix(sv.charging[t], 1.0);
    m.fix(sv.cp[t], 300.0);
  }
  const SolveResult r = optimum(m, LinExpr(0.0));
  // 0 + 2 * 300 kW * 0.95 * 0.5 h
  const double by_hand = 2 * 300 * 0.95 * 0.5;
  CHECK(by_hand == doctest::Approx(285.0));
  CHECK(r.value(sv.soc[1]) == doctest::Approx(by_hand).epsilon(1e-9));
  CHECK(r.value(sv.soc[0]) == doctest::Approx(142.5).epsilon(1e-9));
}

TEST_CASE("idle MESS keeps its state of charge") {
  const Scenario s = with_source(test::mess(300, 0.9, 30, 300, 200), 4, 0.5);
  Model m;
  const MpsVariables mps = build_mps_constraints(m, s, s.candidate_nodes());
  const auto& sv = mps.sources.at(0);
  for (int t = 0; t < 4; ++t) {
    m.fix(sv.connected[0][t], 1.0);
    m.fix(sv.charging[t], 0.0);
    m.fix(sv.discharging[t], 0.0);
  }
  for (ObjSense sense : {ObjSense::Maximize, ObjSense::Minimize}) {
    Model copy = m;
    const SolveResult r = optimum(copy, sv.soc[3], sense);
    for (int t = 0; t < 4; ++t) CHECK(r.value(sv.soc[t]) == doctest::Approx(200.0));
  }
}

TEST_CASE("discharge drains by power over efficiency") {
  const Scenario s = with_source(test::mess(100, 0.8, 0, 500, 400), 3, 1.0);
  Model m;
  const MpsVariables mps = build_mps_constraints(m, s, s.candidate_nodes());
  const auto& sv = mps.sources.at(0);
  m.fix(sv.discharging[0], 1.0);
  m.fix(sv.dp[0], 100.0);
  const SolveResult r = optimum(m, LinExpr(0.0));
  CHECK(r.value(sv.soc[0]) == doctest::Approx(400.0 - 100.0 / 0.8));
}

TEST_CASE("disconnected MEG produces nothing") {
  const Scenario s = with_source(test::meg(70, 40), 3, 1.0);
  Model m;
  const MpsVariables mps = build_mps_constraints(m, s, s.candidate_nodes());
  const auto& sv = mps.sources.at(0);
  LinExpr out;
  for (int t = 0; t < 3; ++t) {
    m.fix(sv.connected[0][t], 0.0);
    out += LinExpr(sv.gp[t]) + LinExpr(sv.gq[t]);
  }
  CHECK(optimum(m, out).objective == doctest::Approx(0.0));
}

TEST_CASE("MESS cannot charge and discharge at once") {
  const Scenario s = with_source(test::mess(100, 0.9, 0, 500, 200), 2, 1.0);
  Model m;
  const MpsVariables mps = build_mps_constraints(m, s, s.candidate_nodes());
  const auto& sv = mps.sources.at(0);
  m.fix(sv.charging[0], 1.0);
  m.fix(sv.discharging[0], 1.0);
  m.set_objective(LinExpr(0.0), ObjSense::Maximize);
  CHECK(solve(m, {}).status == SolveStatus::Infeasible);
}

TEST_CASE("relocation takes the travel time") {
  Scenario s = test::chain3(5, false);
  test::add_source(s, test::meg(70, 40), 2);
  s.nodes[1].is_candidate = true;
  s.nodes[1].vol = 1;
  s.transport.mps_travel = {{0, 2}, {2, 0}};
  s.transport.node_dist = {{0, 1}, {1, 0}};
  REQUIRE(validate_scenario(s).empty());
  Model m;
  const MpsVariables mps = build_mps_constraints(m, s, s.candidate_nodes());
  const auto& sv = mps.sources.at(0);
  const int from = mps.slot_of_node(2), to = mps.slot_of_node(1);
  m.fix(sv.connected[from][0], 1.0);
  Model early = m;
  CHECK(optimum(early, LinExpr(sv.connected[to][1]) + LinExpr(sv.connected[to][2])).objective == doctest::Approx(0.0));
  Model later = m;
  CHECK(optimum(later, sv.connected[to][3]).objective == doctest::Approx(1.0));
  // Parked sources may stay put to the end of the horizon.
  Model parked = m;
  LinExpr stay;
  for (int t = 0; t < 5; ++t) stay.add(sv.connected[from][t], 1.0);
  CHECK(optimum(parked, stay).objective == doctest::Approx(5.0));
}

TEST_CASE("printed window form disconnects every source in the last period") {
  Scenario s = test::chain3(4, false);
  test::add_source(s, test::meg(70, 40), 2);
  s.nodes[1].is_candidate = true;
  s.nodes[1].vol = 1;
  s.transport.mps_travel = {{0, 1}, {1, 0}};
  s.transport.node_dist = {{0, 1}, {1, 0}};
  Model m;
  const MpsVariables mps = build_mps_constraints(m, s, s.candidate_nodes(), {.window_from_t = true});
  const auto& sv = mps.sources.at(0);
  CHECK(optimum(m, LinExpr(sv.connected[0][3]) + LinExpr(sv.connected[1][3])).objective == doctest::Approx(0.0));
}

TEST_CASE("invalid source setups are rejected") {
  Scenario s = with_source(test::mess(100, 0.9, 0, 500, 200), 2, 1.0);
  s.sources[0].eta_c = 0.0;
  Model m;
  CHECK_THROWS_AS(build_mps_constraints(m, s, s.candidate_nodes()), ModelError);
  Scenario ok = with_source(test::meg(1, 1), 2, 1.0);
  Model m2;
  CHECK_THROWS_AS(build_mps_constraints(m2, ok, std::vector<int>{}), ModelError);
  CHECK_THROWS_AS(build_mps_constraints(m2, ok, std::vector<int>{1}), ModelError);
}

TEST_CASE("itineraries from positions") {
  const std::vector<double> zero(4, 0.0), busy(4, 50.0);
  const auto away = itinerary_from_positions(2, std::vector<int>{-1, -1, -1, -1}, zero, zero);
  for (const auto& c : away) CHECK(c.kind == StopKind::Traveling);

  const auto moved = itinerary_from_positions(2, std::vector<int>{-1, 1, 1, 1}, zero, zero);
  CHECK(moved[1] == ItineraryCell{StopKind::Node, 1});
  CHECK(moved[2].kind == StopKind::Stopped);

  const auto working = itinerary_from_positions(2, std::vector<int>{2, 2, 2, 2}, busy, zero);
  for (const auto& c : working) CHECK(c == ItineraryCell{StopKind::Node, 2});
}
