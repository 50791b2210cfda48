#include <doctest.h>

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "drl/scenario.hpp"
#include "support.hpp"

using namespace drl;
using nlohmann::json;

namespace {

json read_json(const std::string& name) {
  std::ifstream in(test::data_file(name));
  return json::parse(in);
}

}  // namespace

TEST_CASE("case33 loads with the expected inventory") {
  const Scenario s = load_scenario(test::data_file("case33.json"));
  CHECK(s.nodes.size() == 33);
  CHECK(s.branches.size() == 37);
  CHECK(s.damaged.size() == 8);
  CHECK(s.depots.size() == 2);
  CHECK(s.crews.size() == 2);
  CHECK(s.sources.size() == 2);
  CHECK(validate_scenario(s).empty());
}

TEST_CASE("healthy grid without damage, crews or sources is valid") {
  const Scenario s = test::chain3(3, false);
  CHECK(validate_scenario(s).empty());
  const Scenario back = parse_scenario(dump_scenario(s));
  CHECK(back == s);
}

TEST_CASE("dump and parse round-trip the bundled fixtures") {
  for (const char* name : {"toy6.json", "case33.json"}) {
    const Scenario s = load_scenario(test::data_file(name));
    CHECK(parse_scenario(dump_scenario(s)) == s);
  }
}

TEST_CASE("vol on a non-candidate node is rejected with the node named") {
  json j = read_json("toy6.json");
  j["nodes"][1]["vol"] = 1;
  try {
    parse_scenario(j.dump());
    FAIL("expected ScenarioError");
  } catch (const ScenarioError& e) {
    CHECK(e.path() == "nodes[1] (id 2)");
    CHECK(std::string(e.what()).find("non-candidate") != std::string::npos);
  }
}

TEST_CASE("one diagnostic per violation") {
  Scenario s = test::chain3(2);
  test::add_source(s, test::mess(100, 0.95, 0, 200, 100), 2);
  REQUIRE(validate_scenario(s).empty());

  Scenario bad_soc = s;
  bad_soc.sources[0].soc_init = 250;
  CHECK(validate_scenario(bad_soc).size() == 1);

  Scenario bad_travel = s;
  bad_travel.transport.crew_travel[0][1] = -1;
  const auto diags = validate_scenario(bad_travel);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].path == "transport.crew_travel[0][1]");
}

TEST_CASE("malformed input is a parse error") {
  CHECK_THROWS_AS(parse_scenario("{ not json"), ParseError);
  CHECK_THROWS_AS(parse_scenario(R"({"nodes": []})"), ParseError);
  json j = read_json("toy6.json");
  j["nodes"][0]["p"] = "lots";
  CHECK_THROWS_AS(parse_scenario(j.dump()), ParseError);
  CHECK_THROWS_AS(load_scenario(test::data_file("missing.json")), ParseError);
}

TEST_CASE("per-period demand profiles") {
  json j = read_json("toy6.json");
  j["nodes"][1]["p"] = {10, 20, 30, 40, 50, 60};
  const Scenario s = parse_scenario(j.dump());
  CHECK(s.nodes[1].p_demand[2] == 30);
  CHECK(s.nodes[1].peak_p() == 60);
  j["nodes"][1]["p"] = {10, 20};
  CHECK_THROWS(parse_scenario(j.dump()));
}

TEST_CASE("ids map to indices") {
  const Scenario s = load_scenario(test::data_file("toy6.json"));
  CHECK(s.node_index(6) == 5);
  CHECK(s.node_index(99) == -1);
  CHECK(s.candidate_nodes() == std::vector<int>{2, 5});
  CHECK(s.candidate_position(5) == 1);
  CHECK(s.branch_label(1) == "2-3");
  CHECK(s.damaged_of_branch(4) == 1);
  CHECK_FALSE(s.damaged_of_branch(0).has_value());
  CHECK(s.substation_node() == 0);
}

TEST_CASE("default epsilon is positive and below the smallest weighted load") {
  json j = read_json("toy6.json");
  j["horizon"].erase("epsilon");
  const Scenario s = parse_scenario(j.dump());
  CHECK(s.effective_epsilon() > 0.0);
  CHECK(s.effective_epsilon() < 60.0);
}
