#include <doctest.h>

#include <sstream>

#include "drl/coupling.hpp"
#include "drl/plan.hpp"
#include "drl/report.hpp"
#include "support.hpp"

using namespace drl;

namespace {

struct Solved {
  Scenario s;
  RestorationPlan plan;
};

const Solved& toy6() {
  static const Solved solved = [] {
    Solved out{load_scenario(test::data_file("toy6.json")), {}};
    CoOptModel cm = build_coopt_model(out.s);
    const SolveResult r = solve(cm.model, {});
    REQUIRE(r.status == SolveStatus::Optimal);
    out.plan = decode_plan(out.s, cm, r);
    return out;
  }();
  return solved;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("route table round-trips crew positions") {
  const auto& [s, plan] = toy6();
  const auto table = render_routes(s, routes_from_positions(s, plan.crew_at));
  CHECK(table.find("D1") != std::string::npos);
  CHECK(parse_routes(s, table) == plan.crew_at);
}

TEST_CASE("route table round-trips synthetic routes") {
  const Scenario s = load_scenario(test::data_file("toy6.json"));
  const std::vector<PositionMatrix> cases{
      {{-1, 0, 0, -1, 1, 1}},
      {{2, 2, -1, -1, 2, 2}},
      {{-1, -1, -1, -1, -1, -1}},
      {{-1, 0, 0, 0, 0, 0}},
      {{-1, 1, 1, 1, 1, 1}},
  };
  for (const auto& pos : cases) CHECK(parse_routes(s, render_routes(s, routes_from_positions(s, pos))) == pos);
}

TEST_CASE("itinerary table round-trips source positions") {
  const auto& [s, plan] = toy6();
  const auto table = render_itineraries(s, schedules_of(s, plan));
  CHECK(parse_itineraries(s, table) == plan.source_at);
}

TEST_CASE("switch table round-trips closed states") {
  const auto& [s, plan] = toy6();
  const auto table = render_switches(s, plan.closed);
  CHECK(parse_switches(s, table, s.periods()) == plan.closed);
}

TEST_CASE("restored CSV is monotone with one row per period") {
  const auto& [s, plan] = toy6();
  const auto rows = lines(restored_csv(s, plan));
  REQUIRE(rows.size() == static_cast<std::size_t>(s.periods()) + 1);
  CHECK(rows[0] == "period,served_kw,served_pct");
  const auto kw = served_kw(s, plan.restored);
  for (std::size_t t = 1; t < kw.size(); ++t) CHECK(kw[t] >= kw[t - 1]);
  double total = 0.0;
  for (const auto& n : s.nodes) total += n.p_demand[0];
  const auto share = served_share(s, plan.restored);
  CHECK(share.back() == doctest::Approx(kw.back() / total));
}

TEST_CASE("power CSV lists each source and period") {
  const auto& [s, plan] = toy6();
  const auto rows = lines(power_csv(s, plan));
  CHECK(rows[0] == "period,source,kind,kw,kvar,soc_kwh");
  CHECK(rows.size() == 1 + s.sources.size() * s.periods());
}

TEST_CASE("comparison CSV aligns curves") {
  const auto rows = lines(compare_csv({"both", "crews-only"}, {{1, 2}, {0.5, 2}}));
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == "period,both,crews-only");
  CHECK(rows[1] == "1,1.0000,0.5000");
}

TEST_CASE("plan JSON round-trip") {
  const auto& [s, plan] = toy6();
  CHECK(parse_plan(dump_plan(plan)) == plan);
}
