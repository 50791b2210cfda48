#include <doctest.h>

#include <filesystem>

#include "drl/pipeline.hpp"
#include "support.hpp"

using namespace drl;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "drl_pipeline_tests";
  fs::create_directories(dir);
  return dir / name;
}

RunConfig config_for(const fs::path& scenario) {
  RunConfig cfg;
  cfg.scenario = scenario;
  return cfg;
}

}  // namespace

TEST_CASE("healthy grid serves everything at t=1 without travel") {
  const Scenario s = test::chain3(3, false);
  const RunOutcome out = run_solve(s, config_for("chain3"));
  CHECK(out.exit_code == kExitOk);
  REQUIRE(out.plan);
  CHECK(travel_periods(*out.plan) == 0);
  CHECK(served_share(s, out.plan->restored)[0] == doctest::Approx(1.0));
  CHECK(out.report->feasible);
}

TEST_CASE("preprocessing infeasibility maps to exit code 3") {
  Scenario s = test::chain3(2);
  s.branches[0].s_cap = 50.0;
  CHECK(run_solve(s, config_for("chain3")).exit_code == kExitInfeasible);
}

TEST_CASE("outputs land in the requested directory") {
  const Scenario s = load_scenario(test::data_file("toy6.json"));
  RunConfig cfg = config_for(test::data_file("toy6.json"));
  const fs::path dir = scratch("toy6_out");
  fs::remove_all(dir);
  cfg.out_dir = dir;
  const RunOutcome out = run_solve(cfg);
  REQUIRE(out.exit_code == kExitOk);
  for (const char* f : {"plan.json", "routes.txt", "itineraries.txt", "switches.txt", "restored.csv", "power.csv", "report.txt"})
    CHECK(fs::exists(dir / f));
  CHECK(load_plan(dir / "plan.json") == *out.plan);
}

TEST_CASE("toy6: node reduction is neutral, minimal pre-assignment gives up the second repair") {
  const Scenario s = load_scenario(test::data_file("toy6.json"));
  RunConfig base = config_for("toy6");
  std::vector<RunOutcome> runs;
  for (int mask = 0; mask < 4; ++mask) {
    RunConfig cfg = base;
    cfg.preassign = !(mask & 1);
    cfg.node_reduction = !(mask & 2);
    runs.push_back(run_solve(s, cfg));
    REQUIRE(runs.back().exit_code == kExitOk);
  }
  const auto objective = [&](int mask) { return runs[mask].plan->objective; };
  CHECK(objective(2) == doctest::Approx(objective(0)).epsilon(1e-12));
  CHECK(objective(3) == doctest::Approx(objective(1)).epsilon(1e-12));
  CHECK(objective(0) < objective(1));
  CHECK(runs[0].assignment->unassigned == std::vector<int>{1});
  for (int mask = 1; mask < 4; ++mask) CHECK(runs[mask].binaries > runs[0].binaries);
}

TEST_CASE("compare is deterministic and rejects mismatched horizons") {
  const fs::path toy = test::data_file("toy6.json");
  RunConfig crews = config_for(toy);
  crews.sources = false;
  const Comparison c = run_compare({{"a", crews}, {"b", crews}});
  REQUIRE(c.served_kw.size() == 2);
  CHECK(c.served_kw[0] == c.served_kw[1]);

  const fs::path other = scratch("chain3_T4.json");
  save_scenario(test::chain3(4), other);
  CHECK_THROWS_AS(run_compare({{"a", config_for(toy)}, {"b", config_for(other)}}), std::invalid_argument);
}

TEST_CASE("crews-only catches up with co-optimization once repairs finish") {
  Scenario s = test::chain3(6);
  test::add_source(s, test::meg(100, 40), 2);
  const fs::path file = scratch("chain3_meg.json");
  save_scenario(s, file);
  RunConfig both = config_for(file), crews = config_for(file);
  crews.sources = false;
  const Comparison c = run_compare({{"both", both}, {"crews-only", crews}});
  for (int t = 0; t < 6; ++t) CHECK(c.served_kw[0][t] >= c.served_kw[1][t] - 1e-9);
  // repaired in period 2, operable from 3
  for (int t = 2; t < 6; ++t) CHECK(c.served_kw[0][t] == doctest::Approx(c.served_kw[1][t]));
  CHECK(c.served_kw[0][0] > c.served_kw[1][0]);
}
