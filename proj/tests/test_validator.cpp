#include <doctest.h>

#include "drl/coupling.hpp"
#include "drl/oracle.hpp"
#include "drl/plan.hpp"
#include "drl/validator.hpp"
#include "support.hpp"

using namespace drl;

namespace {

RestorationPlan solve_plan(const Scenario& s) {
  CoOptModel cm = build_coopt_model(s);
  const SolveResult r = solve(cm.model, {});
  REQUIRE(r.status == SolveStatus::Optimal);
  return decode_plan(s, cm, r);
}

double hand_weighted_load(const Scenario& s) {
  double total = 0.0;
  for (const auto& n : s.nodes)
    for (double p : n.p_demand) total += n.weight * p;
  return total;
}

Scenario toy6_healthy() {
  Scenario s = load_scenario(test::data_file("toy6.json"));
  for (auto& b : s.branches) b.damaged = false;
  s.damaged.clear();
  s.crews.clear();
  s.sources.clear();
  s.transport.crew_travel = {{0}};
  s.transport.crew_dist = {{0}};
  return s;
}

}  // namespace

TEST_CASE("optimal plans validate cleanly") {
  const Scenario s = load_scenario(test::data_file("toy6.json"));
  const RestorationPlan p = solve_plan(s);
  const ViolationReport r = validate_plan(s, p);
  CHECK(r.feasible);
  CHECK(r.radial);
  CHECK(r.worst_residual <= 1e-6);
  CHECK(r.worst_by_family.count("radiality") == 1);
  CHECK(r.worst_by_family.count("soc_recursion") == 1);
  CHECK(r.capacity_ratio <= r.polygon_bound + 1e-9);
  CHECK(format_report(r).find("feasible") != std::string::npos);
}

TEST_CASE("closing a loop is reported at that period") {
  const Scenario s = load_scenario(test::data_file("toy6.json"));
  RestorationPlan p = solve_plan(s);
  const int T = s.periods();
  for (std::size_t b = 0; b < s.branches.size(); ++b) {
    p.operable[b][T - 1] = 1;
    p.closed[b][T - 1] = 1;
  }
  const ViolationReport r = validate_plan(s, p);
  CHECK_FALSE(r.feasible);
  CHECK_FALSE(r.radial);
  const auto loops = r.of("radiality");
  REQUIRE(loops.size() == 1);
  CHECK(loops[0].where.find("t=" + std::to_string(T)) != std::string::npos);
}

TEST_CASE("state of charge off by one kWh") {
  Scenario s = test::chain3(3, false);
  test::add_source(s, test::mess(50, 0.9, 0, 500, 100), 2);
  RestorationPlan p = solve_plan(s);
  REQUIRE(validate_plan(s, p).feasible);
  p.soc[0][2] += 1.0;
  const ViolationReport r = validate_plan(s, p);
  CHECK_FALSE(r.feasible);
  const auto soc = r.of("soc_recursion");
  REQUIRE(soc.size() == 1);
  CHECK(soc[0].residual == doctest::Approx(1.0));
}

TEST_CASE("energizing an unrepaired branch is caught") {
  const Scenario s = load_scenario(test::data_file("toy6.json"));
  RestorationPlan p = solve_plan(s);
  p.closed[1][0] = 1;
  const ViolationReport r = validate_plan(s, p);
  CHECK_FALSE(r.feasible);
  CHECK_FALSE(r.of("closed_operable").empty());
}

TEST_CASE("power imbalance is measured in kW") {
  const Scenario s = load_scenario(test::data_file("toy6.json"));
  RestorationPlan p = solve_plan(s);
  p.Pg[0][3] += 5.0;
  const ViolationReport r = validate_plan(s, p);
  CHECK(r.worst_by_family.at("p_balance") > 0.0);
}

TEST_CASE("mismatched dimensions throw") {
  const Scenario s = load_scenario(test::data_file("toy6.json"));
  RestorationPlan p = solve_plan(s);
  p.restored.pop_back();
  CHECK_THROWS_AS(validate_plan(s, p), ValidationError);
}

TEST_CASE("oracle on a healthy grid serves everything from t=1") {
  const Scenario s = toy6_healthy();
  const OracleResult o = brute_force_optimum(s);
  CHECK(o.objective == doctest::Approx(hand_weighted_load(s)));
  std::size_t loads = 0;
  for (const auto& n : s.nodes) loads += n.p_demand[0] > 0.0 ? 1 : 0;
  for (const auto& nodes : o.restored_nodes) CHECK(nodes.size() == loads);
}

TEST_CASE("oracle restores loads behind a bridge from t=3") {
  const Scenario s = test::chain3(5);
  const OracleResult o = brute_force_optimum(s);
  for (int t = 0; t < 5; ++t) {
    const auto& on = o.restored_nodes[t];
    const bool behind = std::find(on.begin(), on.end(), 2) != on.end();
    CHECK(behind == (t + 1 >= 3));
  }
  CHECK(o.crew_at[1] == 0);
  // node 3 (weight 2, 80 kW) from t=3, node 2 (100 kW) throughout, one travel period
  CHECK(o.objective == doctest::Approx(5 * 100.0 + 3 * 2 * 80.0 - 1 * 0.01));
  CHECK(o.objective == doctest::Approx(solve_plan(s).objective).epsilon(1e-9));
}

TEST_CASE("oracle refuses large instances") {
  CHECK_THROWS_AS(brute_force_optimum(load_scenario(test::data_file("case33.json"))), OracleError);
  Scenario s = test::chain3(3);
  test::add_source(s, test::mess(10, 0.9, 0, 10, 5), 2);
  CHECK_THROWS_AS(brute_force_optimum(s), OracleError);
}
