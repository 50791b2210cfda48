#include <doctest.h>

#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include "drl/preprocess.hpp"
#include "support.hpp"

using namespace drl;

namespace {

std::set<std::set<int>> partition_by_union_find(const Scenario& s) {
  test::DisjointSets ds(s.nodes.size());
  for (const auto& b : s.branches)
    if (!b.damaged) ds.unite(b.from, b.to);
  std::map<int, std::set<int>> groups;
  for (int i = 0; i < static_cast<int>(s.nodes.size()); ++i) groups[ds.find(i)].insert(i);
  std::set<std::set<int>> out;
  for (auto& [root, members] : groups) out.insert(members);
  return out;
}

std::set<std::set<int>> as_sets(const IslandPartition& p) {
  std::set<std::set<int>> out;
  for (const auto& island : p.islands) out.insert({island.begin(), island.end()});
  return out;
}

// 1(sub) - 2 - 3 x 4 - 5 with 3-4 damaged; candidates 2, 3, 4, 5.
Scenario two_islands(const std::vector<std::vector<double>>& dist) {
  const int T = 1;
  Scenario s;
  s.base_kva = 1000.0;
  s.horizon.periods = T;
  for (int id = 1; id <= 5; ++id) s.nodes.push_back(test::load_node(id, id == 1 ? 0 : 10, 5, T));
  s.nodes[0].is_substation = true;
  for (int i = 1; i <= 4; ++i) {
    s.nodes[i].is_candidate = true;
    s.nodes[i].vol = 1;
  }
  s.substations = {{0, 1000, 1000}};
  for (int b = 0; b < 4; ++b) s.branches.push_back({b + 1, b, b + 1, 0.01, 0.01, 500, false, b == 2});
  s.damaged = {{1, 2, 1}};
  s.depots = {{1}};
  s.crews = {{1, 0, 1.0, {1}}};
  s.transport.crew_travel = {{0, 1}, {1, 0}};
  s.transport.crew_dist = {{0, 1}, {1, 0}};
  s.transport.mps_travel.assign(4, std::vector<int>(4, 1));
  for (int i = 0; i < 4; ++i) s.transport.mps_travel[i][i] = 0;
  s.transport.node_dist = dist;
  return s;
}

}  // namespace

TEST_CASE("islands match an independent union-find") {
  for (const char* name : {"toy6.json", "case33.json"}) {
    const Scenario s = load_scenario(test::data_file(name));
    const IslandPartition p = detect_islands(s);
    CHECK(as_sets(p) == partition_by_union_find(s));
    for (std::size_t k = 0; k < p.islands.size(); ++k) {
      for (int i : p.islands[k]) CHECK(p.island_of(i) == static_cast<int>(k));
      for (int c : p.candidate_sets[k]) CHECK(s.nodes[c].is_candidate);
    }
    for (std::size_t k = 1; k < p.islands.size(); ++k) CHECK(p.islands[k - 1].front() < p.islands[k].front());
  }
}

TEST_CASE("intact network is one island, all-damaged is singletons") {
  Scenario s = load_scenario(test::data_file("toy6.json"));
  Scenario intact = s;
  for (auto& b : intact.branches) b.damaged = false;
  const IslandPartition one = detect_islands(intact);
  REQUIRE(one.islands.size() == 1);
  CHECK(one.candidate_sets[0] == s.candidate_nodes());

  Scenario broken = s;
  for (auto& b : broken.branches) b.damaged = true;
  const IslandPartition many = detect_islands(broken);
  CHECK(many.islands.size() == s.nodes.size());
  for (const auto& island : many.islands) CHECK(island.size() == 1);
}

TEST_CASE("candidate selection matches exhaustive enumeration") {
  const std::vector<std::vector<std::vector<double>>> tables{
      {{0, 3, 7, 2}, {3, 0, 4, 6}, {7, 4, 0, 1}, {2, 6, 1, 0}},
      {{0, 1, 5, 9}, {1, 0, 8, 3}, {5, 8, 0, 2}, {9, 3, 2, 0}},
      {{0, 2, 2, 2}, {2, 0, 2, 2}, {2, 2, 0, 2}, {2, 2, 2, 0}},
  };
  for (const auto& dist : tables) {
    const Scenario s = two_islands(dist);
    const IslandPartition p = detect_islands(s);
    REQUIRE(p.candidate_sets.size() == 2);
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> arg;
    for (int a : p.candidate_sets[0]) {
      for (int b : p.candidate_sets[1]) {
        const double d = dist[s.candidate_position(a)][s.candidate_position(b)];
        if (d < best - 1e-12) {
          best = d;
          arg = {a, b};
        }
      }
    }
    const CandidateSelection sel = select_candidates(s, p);
    CHECK(sel.total_distance == doctest::Approx(best));
    CHECK(selection_distance(s, sel.selected) == doctest::Approx(best));
    CHECK(sel.selected == arg);
  }
}

TEST_CASE("singleton islands are always selected") {
  const Scenario s = load_scenario(test::data_file("case33.json"));
  const IslandPartition p = detect_islands(s);
  const CandidateSelection sel = select_candidates(s, p);
  for (const auto& set : p.candidate_sets)
    if (set.size() == 1) CHECK(std::count(sel.selected.begin(), sel.selected.end(), set[0]) == 1);
}

TEST_CASE("selection without any candidate island is an error") {
  Scenario s = test::chain3(1, false);
  CHECK_THROWS_AS(select_candidates(s, detect_islands(s)), PreprocessError);
}

TEST_CASE("zero damage needs no repairs") {
  const Scenario s = test::chain3(2, false);
  const PreAssignment a = preassign_min_repairs(s);
  CHECK(a.assigned.empty());
  CHECK(a.unassigned.empty());
  CHECK(a.total_distance == 0.0);
}

TEST_CASE("toy6 needs one repair once the tie can feed node 6") {
  const Scenario s = load_scenario(test::data_file("toy6.json"));
  const PreAssignment a = preassign_min_repairs(s);
  CHECK(a.assigned == std::vector<int>{0});
  CHECK(a.unassigned == std::vector<int>{1});
  CHECK(a.depot_of == std::vector<int>{0, -1});
  CHECK(a.total_distance == doctest::Approx(s.transport.crew_dist[2][0]));
  CHECK(a.tasks(1) == TaskAssignment{{0}});
}

TEST_CASE("minimal repair set agrees with a subset sweep on toy6") {
  const Scenario s = load_scenario(test::data_file("toy6.json"));
  std::size_t smallest = 99;
  for (int mask = 0; mask < 4; ++mask) {
    std::vector<int> subset;
    for (int m = 0; m < 2; ++m)
      if (mask & (1 << m)) subset.push_back(m);
    if (supports_full_supply(s, subset)) smallest = std::min(smallest, subset.size());
  }
  CHECK(preassign_min_repairs(s).assigned.size() == smallest);
}

TEST_CASE("unreachable load makes pre-assignment infeasible") {
  Scenario s = test::chain3(2);
  s.branches[0].s_cap = 50.0;
  CHECK_THROWS_AS(preassign_min_repairs(s), PreprocessError);
  CHECK_FALSE(supports_full_supply(s, {0}));
}

TEST_CASE("all mode assigns every damaged component") {
  Scenario s = load_scenario(test::data_file("case33.json"));
  const PreAssignment a = preassign_min_repairs(s, AssignMode::All);
  CHECK(a.assigned.size() == s.damaged.size());
  CHECK(a.unassigned.empty());
  for (int n : a.depot_of) CHECK(n >= 0);
}

TEST_CASE("all mode fails when crews lack resources") {
  Scenario s = test::chain3(2);
  s.crews[0].capacity = 0.5;
  CHECK_THROWS_AS(preassign_min_repairs(s, AssignMode::All), PreprocessError);
}
