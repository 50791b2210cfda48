#ifndef DRL_TESTS_SUPPORT_HPP
#define DRL_TESTS_SUPPORT_HPP

#include <filesystem>
#include <numeric>
#include <string>
#include <vector>

#include "drl/scenario.hpp"

namespace drl::test {

inline std::filesystem::path data_file(const std::string& name) {
  return std::filesystem::path(DRL_DATA_DIR) / name;
}

inline Node load_node(int id, double p, double q, int T) {
  Node n;
  n.id = id;
  n.p_demand.assign(T, p);
  n.q_demand.assign(T, q);
  n.v_min = 0.9;
  n.v_max = 1.05;
  return n;
}

// 1 (substation) - 2 - 3. With `damaged`, branch 2-3 is broken and one crew
// waits at a depot one period away (repair time 1).
inline Scenario chain3(int T, bool damaged = true) {
  Scenario s;
  s.name = "chain3";
  s.base_kva = 1000.0;
  s.horizon.periods = T;
  s.horizon.dt = 1.0;
  s.horizon.epsilon = 0.01;
  s.nodes = {load_node(1, 0, 0, T), load_node(2, 100, 30, T), load_node(3, 80, 20, T)};
  s.nodes[0].is_substation = true;
  s.nodes[2].weight = 2.0;
  s.branches = {{1, 0, 1, 0.01, 0.01, 500, false, false}, {2, 1, 2, 0.01, 0.01, 500, false, damaged}};
  s.substations = {{0, 1000.0, 1000.0}};
  s.depots = {{1}};
  if (damaged) {
    s.damaged = {{1, 1, 1}};
    s.crews = {{1, 0, 1.0, {1}}};
    s.transport.crew_travel = {{0, 1}, {1, 0}};
    s.transport.crew_dist = {{0, 1}, {1, 0}};
  } else {
    s.transport.crew_travel = {{0}};
    s.transport.crew_dist = {{0}};
  }
  return s;
}

inline void add_source(Scenario& s, MobileSource src, int node) {
  s.nodes[node].is_candidate = true;
  s.nodes[node].vol = 1;
  src.initial_node = node;
  s.sources.push_back(src);
  const std::size_t n = s.candidate_nodes().size();
  s.transport.mps_travel.assign(n, std::vector<int>(n, 1));
  s.transport.node_dist.assign(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i) s.transport.mps_travel[i][i] = 0, s.transport.node_dist[i][i] = 0.0;
}

inline MobileSource meg(double gp, double gq) {
  MobileSource m;
  m.id = 1;
  m.gp_max = gp;
  m.gq_max = gq;
  return m;
}

inline MobileSource mess(double power, double eta, double soc_min, double soc_max, double soc_init) {
  MobileSource m;
  m.id = 1;
  m.kind = SourceKind::Mess;
  m.gq_max = power;
  m.cp_max = power;
  m.dp_max = power;
  m.eta_c = eta;
  m.eta_d = eta;
  m.soc_min = soc_min;
  m.soc_max = soc_max;
  m.soc_init = soc_init;
  return m;
}

// Independent union-find used to cross-check graph results.
struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

}  // namespace drl::test

#endif  // DRL_TESTS_SUPPORT_HPP
