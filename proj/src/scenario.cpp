#include "drl/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <fmt/core.h>
#include <nlohmann/json.hpp>

namespace drl {

using nlohmann::json;

double Node::peak_p() const {
  return p_demand.empty() ? 0.0 : *std::max_element(p_demand.begin(), p_demand.end());
}

double Node::peak_q() const {
  return q_demand.empty() ? 0.0 : *std::max_element(q_demand.begin(), q_demand.end());
}

std::vector<int> Scenario::candidate_nodes() const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i)
    if (nodes[i].is_candidate) out.push_back(i);
  return out;
}

int Scenario::candidate_position(int node) const {
  int pos = 0;
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
    if (!nodes[i].is_candidate) continue;
    if (i == node) return pos;
    ++pos;
  }
  return -1;
}

int Scenario::node_index(int id) const {
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i)
    if (nodes[i].id == id) return i;
  return -1;
}

int Scenario::depot_index(int id) const {
  for (int i = 0; i < static_cast<int>(depots.size()); ++i)
    if (depots[i].id == id) return i;
  return -1;
}

std::optional<int> Scenario::damaged_of_branch(int branch) const {
  for (int m = 0; m < static_cast<int>(damaged.size()); ++m)
    if (damaged[m].branch == branch) return m;
  return std::nullopt;
}

std::string Scenario::branch_label(int branch) const {
  const auto& b = branches.at(branch);
  return fmt::format("{}-{}", nodes.at(b.from).id, nodes.at(b.to).id);
}

std::string Scenario::vertex_label(int vertex) const {
  const int m = static_cast<int>(damaged.size());
  if (vertex < m) return "branch " + branch_label(damaged[vertex].branch);
  return fmt::format("depot {}", depots.at(vertex - m).id);
}

std::vector<int> Scenario::crews_of_depot(int depot) const {
  std::vector<int> out;
  for (int k = 0; k < static_cast<int>(crews.size()); ++k)
    if (crews[k].depot == depot) out.push_back(k);
  return out;
}

double Scenario::effective_epsilon() const {
  if (horizon.epsilon) return *horizon.epsilon;
  double smallest = std::numeric_limits<double>::infinity();
  for (const auto& n : nodes) {
    const double w = n.weight * n.peak_p();
    if (w > 0.0) smallest = std::min(smallest, w);
  }
  return std::isfinite(smallest) ? 1e-3 * smallest : 1e-3;
}

int Scenario::substation_node() const {
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i)
    if (nodes[i].is_substation) return i;
  throw ScenarioError("nodes", "no substation node");
}

namespace {

void add(std::vector<Diagnostic>& out, std::string path, std::string msg) {
  out.push_back({std::move(path), std::move(msg)});
}

template <class M>
void check_square(std::vector<Diagnostic>& out, const M& mat, std::size_t n,
                  const std::string& path, bool zero_diag) {
  if (mat.size() != n) {
    add(out, path, fmt::format("expected {} rows, got {}", n, mat.size()));
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (mat[i].size() != n) {
      add(out, fmt::format("{}[{}]", path, i), fmt::format("expected {} entries", n));
      continue;
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double v = static_cast<double>(mat[i][j]);
      if (!(v >= 0.0))
        add(out, fmt::format("{}[{}][{}]", path, i, j), "negative entry");
      else if (zero_diag && i == j && v != 0.0)
        add(out, fmt::format("{}[{}][{}]", path, i, j), "diagonal must be 0");
    }
  }
}

}  // namespace

std::vector<Diagnostic> validate_scenario(const Scenario& s) {
  std::vector<Diagnostic> out;
  const int n_nodes = static_cast<int>(s.nodes.size());
  const auto periods = static_cast<std::size_t>(std::max(s.horizon.periods, 0));

  if (s.horizon.periods < 1) add(out, "horizon.T", "must be >= 1");
  if (!(s.horizon.dt > 0.0)) add(out, "horizon.dt", "must be > 0");
  if (s.horizon.epsilon && !(*s.horizon.epsilon > 0.0)) add(out, "horizon.epsilon", "must be > 0");
  if (!(s.base_kva > 0.0)) add(out, "base_kva", "must be > 0");

  int n_sub = 0;
  for (int i = 0; i < n_nodes; ++i) {
    const auto& n = s.nodes[i];
    const std::string path = fmt::format("nodes[{}] (id {})", i, n.id);
    if (!(n.v_min < n.v_max)) add(out, path, "v_min must be < v_max");
    if (n.p_demand.size() != periods || n.q_demand.size() != periods)
      add(out, path, fmt::format("demand length must equal T = {}", periods));
    for (double p : n.p_demand)
      if (!(p >= 0.0)) { add(out, path, "negative real demand"); break; }
    for (double q : n.q_demand)
      if (!(q >= 0.0)) { add(out, path, "negative reactive demand"); break; }
    if (!(n.weight >= 0.0)) add(out, path, "negative weight");
    if (n.vol < 0) add(out, path, "vol must be >= 0");
    if (n.vol > 0 && !n.is_candidate) add(out, path, "vol > 0 on a non-candidate node");
    if (n.is_substation) ++n_sub;
  }
  if (n_nodes > 0 && n_sub == 0) add(out, "nodes", "no substation node");

  for (int b = 0; b < static_cast<int>(s.branches.size()); ++b) {
    const auto& br = s.branches[b];
    const std::string path = fmt::format("branches[{}] (id {})", b, br.id);
    if (br.from < 0 || br.from >= n_nodes || br.to < 0 || br.to >= n_nodes) {
      add(out, path, "endpoint out of range");
      continue;
    }
    if (br.from == br.to) add(out, path, "from == to");
    if (!(br.r >= 0.0) || !(br.x >= 0.0)) add(out, path, "r and x must be >= 0");
    if (!(br.s_cap > 0.0)) add(out, path, "s_cap must be > 0");
  }

  std::set<int> seen_branches;
  for (int m = 0; m < static_cast<int>(s.damaged.size()); ++m) {
    const auto& d = s.damaged[m];
    const std::string path = fmt::format("damaged[{}] (id {})", m, d.id);
    if (d.branch < 0 || d.branch >= static_cast<int>(s.branches.size())) {
      add(out, path, "branch out of range");
      continue;
    }
    if (!s.branches[d.branch].damaged) add(out, path, "referenced branch not flagged damaged");
    if (!seen_branches.insert(d.branch).second) add(out, path, "branch listed twice");
    if (d.rs < 1) add(out, path, "rs must be >= 1");
  }
  for (int b = 0; b < static_cast<int>(s.branches.size()); ++b)
    if (s.branches[b].damaged && !seen_branches.count(b))
      add(out, fmt::format("branches[{}] (id {})", b, s.branches[b].id),
          "flagged damaged but missing from damaged list");

  for (int k = 0; k < static_cast<int>(s.crews.size()); ++k) {
    const auto& c = s.crews[k];
    const std::string path = fmt::format("crews[{}] (id {})", k, c.id);
    if (c.depot < 0 || c.depot >= static_cast<int>(s.depots.size())) add(out, path, "depot does not exist");
    if (!(c.capacity >= 0.0)) add(out, path, "capacity must be >= 0");
    if (c.repair_time.size() != s.damaged.size())
      add(out, path, "repair_time length must equal number of damaged components");
    for (int rt : c.repair_time)
      if (rt < 1) { add(out, path, "repair_time entries must be >= 1"); break; }
  }

  for (int i = 0; i < static_cast<int>(s.sources.size()); ++i) {
    const auto& src = s.sources[i];
    const std::string path = fmt::format("sources[{}] (id {})", i, src.id);
    if (!(src.gp_max >= 0.0) || !(src.gq_max >= 0.0)) add(out, path, "gp_max and gq_max must be >= 0");
    if (src.is_mess()) {
      if (!(src.soc_min <= src.soc_init && src.soc_init <= src.soc_max))
        add(out, path, "soc_min <= soc_init <= soc_max violated");
      if (!(src.cp_max > 0.0) || !(src.dp_max > 0.0)) add(out, path, "cp_max and dp_max must be > 0");
      if (!(src.eta_c > 0.0 && src.eta_c <= 1.0) || !(src.eta_d > 0.0 && src.eta_d <= 1.0))
        add(out, path, "efficiencies must lie in (0, 1]");
    }
    if (src.initial_node) {
      const int n = *src.initial_node;
      if (n < 0 || n >= n_nodes || !s.nodes[n].is_candidate)
        add(out, path, "initial node is not a candidate node");
    }
  }

  for (int i = 0; i < static_cast<int>(s.substations.size()); ++i) {
    const auto& sub = s.substations[i];
    const std::string path = fmt::format("substation[{}]", i);
    if (sub.node < 0 || sub.node >= n_nodes || !s.nodes[sub.node].is_substation)
      add(out, path, "node is not a substation node");
    if (!(sub.p_max >= 0.0) || !(sub.q_max >= 0.0)) add(out, path, "caps must be >= 0");
  }

  const auto& tr = s.transport;
  const std::size_t nv = s.num_vertices();
  const std::size_t nc = s.candidate_nodes().size();
  check_square(out, tr.crew_travel, nv, "transport.crew_travel", true);
  check_square(out, tr.crew_dist, nv, "transport.crew_dist", true);
  check_square(out, tr.mps_travel, nc, "transport.mps_travel", true);
  check_square(out, tr.node_dist, nc, "transport.node_dist", true);
  return out;
}

namespace {

std::string at(const std::string& base, const std::string& key) { return base.empty() ? key : base + "." + key; }

const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(fmt::format("{}: missing key", at(path, key)));
  return j.at(key);
}

double get_number(const json& j, const std::string& key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_number()) throw ParseError(fmt::format("{}: expected number", at(path, key)));
  return v.get<double>();
}

double get_number_or(const json& j, const std::string& key, double fallback, const std::string& path) {
  if (!j.contains(key)) return fallback;
  return get_number(j, key, path);
}

int get_int(const json& j, const std::string& key, const std::string& path) {
  const double v = get_number(j, key, path);
  if (std::floor(v) != v) throw ScenarioError(at(path, key), "expected an integer");
  return static_cast<int>(v);
}

bool get_bool_or(const json& j, const std::string& key, bool fallback, const std::string& path) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) throw ParseError(fmt::format("{}: expected boolean", at(path, key)));
  return j.at(key).get<bool>();
}

std::vector<double> get_profile(const json& j, const std::string& key, std::size_t periods,
                                const std::string& path) {
  if (!j.contains(key)) return std::vector<double>(periods, 0.0);
  const json& v = j.at(key);
  if (v.is_number()) return std::vector<double>(periods, v.get<double>());
  if (!v.is_array()) throw ParseError(fmt::format("{}: expected number or array", at(path, key)));
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ParseError(fmt::format("{}: expected numbers", at(path, key)));
    out.push_back(e.get<double>());
  }
  return out;
}

template <class T>
std::vector<std::vector<T>> get_matrix(const json& j, const std::string& key, const std::string& path) {
  std::vector<std::vector<T>> out;
  if (!j.contains(key)) return out;
  const json& rows = j.at(key);
  if (!rows.is_array()) throw ParseError(fmt::format("{}: expected array of arrays", at(path, key)));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].is_array()) throw ParseError(fmt::format("{}[{}]: expected array", at(path, key), i));
    std::vector<T> row;
    for (std::size_t c = 0; c < rows[i].size(); ++c) {
      const json& e = rows[i][c];
      if (!e.is_number()) throw ParseError(fmt::format("{}[{}][{}]: expected number", at(path, key), i, c));
      const double v = e.get<double>();
      if constexpr (std::is_integral_v<T>) {
        if (std::floor(v) != v)
          throw ScenarioError(fmt::format("{}[{}][{}]", at(path, key), i, c),
                              "travel times must be whole periods");
        row.push_back(static_cast<T>(v));
      } else {
        row.push_back(v);
      }
    }
    out.push_back(std::move(row));
  }
  return out;
}

const json& array_or_empty(const json& root, const std::string& key) {
  static const json empty = json::array();
  if (!root.contains(key)) return empty;
  if (!root.at(key).is_array()) throw ParseError(key + ": expected array");
  return root.at(key);
}

Scenario from_json(const json& root) {
  if (!root.is_object()) throw ParseError("scenario: expected a JSON object");
  Scenario s;
  s.name = root.value("name", std::string{});
  s.base_kva = get_number_or(root, "base_kva", 1.0, "");

  const json& hz = require(root, "horizon", "");
  s.horizon.periods = get_int(hz, "T", "horizon");
  s.horizon.dt = get_number(hz, "dt", "horizon");
  if (hz.contains("epsilon")) s.horizon.epsilon = get_number(hz, "epsilon", "horizon");
  const std::string policy = hz.value("big_m_policy", std::string("per-branch"));
  if (policy == "per-branch") s.horizon.big_m = BigMPolicy::PerBranch;
  else if (policy == "global") s.horizon.big_m = BigMPolicy::Global;
  else throw ParseError("horizon.big_m_policy: expected per-branch or global");
  if (s.horizon.periods < 1) throw ScenarioError("horizon.T", "must be >= 1");
  const auto periods = static_cast<std::size_t>(s.horizon.periods);

  std::map<int, int> node_of_id;
  const json& nodes = require(root, "nodes", "");
  if (!nodes.is_array()) throw ParseError("nodes: expected array");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string path = fmt::format("nodes[{}]", i);
    const json& jn = nodes[i];
    Node n;
    n.id = get_int(jn, "id", path);
    n.p_demand = get_profile(jn, "p", periods, path);
    n.q_demand = get_profile(jn, "q", periods, path);
    n.weight = get_number_or(jn, "weight", 1.0, path);
    n.v_min = get_number_or(jn, "v_min", 0.95, path);
    n.v_max = get_number_or(jn, "v_max", 1.05, path);
    n.is_substation = get_bool_or(jn, "substation", false, path);
    n.is_candidate = get_bool_or(jn, "candidate", false, path);
    n.vol = jn.contains("vol") ? get_int(jn, "vol", path) : 0;
    if (!node_of_id.emplace(n.id, static_cast<int>(i)).second)
      throw ScenarioError(path, fmt::format("duplicate node id {}", n.id));
    s.nodes.push_back(std::move(n));
  }
  auto node_ref = [&](int id, const std::string& path) {
    auto it = node_of_id.find(id);
    if (it == node_of_id.end()) throw ScenarioError(path, fmt::format("unknown node id {}", id));
    return it->second;
  };

  std::map<int, int> branch_of_id;
  const json& branches = require(root, "branches", "");
  if (!branches.is_array()) throw ParseError("branches: expected array");
  for (std::size_t b = 0; b < branches.size(); ++b) {
    const std::string path = fmt::format("branches[{}]", b);
    const json& jb = branches[b];
    Branch br;
    br.id = get_int(jb, "id", path);
    br.from = node_ref(get_int(jb, "from", path), at(path, "from"));
    br.to = node_ref(get_int(jb, "to", path), at(path, "to"));
    br.r = get_number(jb, "r", path);
    br.x = get_number(jb, "x", path);
    br.s_cap = get_number(jb, "s_cap", path);
    br.has_switch = get_bool_or(jb, "switch", false, path);
    br.damaged = get_bool_or(jb, "damaged", false, path);
    if (!branch_of_id.emplace(br.id, static_cast<int>(b)).second)
      throw ScenarioError(path, fmt::format("duplicate branch id {}", br.id));
    s.branches.push_back(br);
  }

  const json& damaged = array_or_empty(root, "damaged");
  for (std::size_t m = 0; m < damaged.size(); ++m) {
    const std::string path = fmt::format("damaged[{}]", m);
    DamagedComponent d;
    d.id = get_int(damaged[m], "id", path);
    const int bid = get_int(damaged[m], "branch", path);
    auto it = branch_of_id.find(bid);
    if (it == branch_of_id.end()) throw ScenarioError(at(path, "branch"), fmt::format("unknown branch id {}", bid));
    d.branch = it->second;
    d.rs = get_int(damaged[m], "rs", path);
    s.damaged.push_back(d);
  }

  const json& depots = array_or_empty(root, "depots");
  for (std::size_t n = 0; n < depots.size(); ++n) s.depots.push_back({get_int(depots[n], "id", fmt::format("depots[{}]", n))});

  const json& crews = array_or_empty(root, "crews");
  for (std::size_t k = 0; k < crews.size(); ++k) {
    const std::string path = fmt::format("crews[{}]", k);
    Crew c;
    c.id = get_int(crews[k], "id", path);
    const int did = get_int(crews[k], "depot", path);
    c.depot = s.depot_index(did);
    if (c.depot < 0) throw ScenarioError(at(path, "depot"), fmt::format("unknown depot id {}", did));
    c.capacity = get_number(crews[k], "capacity", path);
    const json& rt = require(crews[k], "repair_time", path);
    if (rt.is_number()) {
      c.repair_time.assign(s.damaged.size(), get_int(crews[k], "repair_time", path));
    } else if (rt.is_array()) {
      for (std::size_t m = 0; m < rt.size(); ++m) {
        const double v = rt[m].is_number() ? rt[m].get<double>() : NAN;
        if (std::floor(v) != v) throw ScenarioError(fmt::format("{}.repair_time[{}]", path, m), "expected an integer");
        c.repair_time.push_back(static_cast<int>(v));
      }
    } else {
      throw ParseError(path + ".repair_time: expected integer or array");
    }
    s.crews.push_back(std::move(c));
  }

  const json& sources = array_or_empty(root, "sources");
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const std::string path = fmt::format("sources[{}]", i);
    const json& js = sources[i];
    MobileSource src;
    src.id = get_int(js, "id", path);
    const std::string kind = require(js, "kind", path).is_string() ? js.at("kind").get<std::string>() : "";
    if (kind == "MEG") src.kind = SourceKind::Meg;
    else if (kind == "MESS") src.kind = SourceKind::Mess;
    else throw ParseError(path + ".kind: expected MEG or MESS");
    if (js.contains("initial_node") && !js.at("initial_node").is_null())
      src.initial_node = node_ref(get_int(js, "initial_node", path), at(path, "initial_node"));
    src.gp_max = get_number_or(js, "gp_max", 0.0, path);
    src.gq_max = get_number_or(js, "gq_max", 0.0, path);
    src.cp_max = get_number_or(js, "cp_max", 0.0, path);
    src.dp_max = get_number_or(js, "dp_max", 0.0, path);
    src.eta_c = get_number_or(js, "eta_c", 1.0, path);
    src.eta_d = get_number_or(js, "eta_d", 1.0, path);
    src.soc_min = get_number_or(js, "soc_min", 0.0, path);
    src.soc_max = get_number_or(js, "soc_max", 0.0, path);
    src.soc_init = get_number_or(js, "soc_init", 0.0, path);
    s.sources.push_back(src);
  }

  if (root.contains("substation")) {
    json subs = root.at("substation");
    if (subs.is_object()) subs = json::array({subs});
    if (!subs.is_array()) throw ParseError("substation: expected object or array");
    for (std::size_t i = 0; i < subs.size(); ++i) {
      const std::string path = fmt::format("substation[{}]", i);
      SubstationCap cap;
      cap.node = node_ref(get_int(subs[i], "node", path), at(path, "node"));
      cap.p_max = get_number_or(subs[i], "p_max", cap.p_max, path);
      cap.q_max = get_number_or(subs[i], "q_max", cap.q_max, path);
      s.substations.push_back(cap);
    }
  }
  for (int i = 0; i < static_cast<int>(s.nodes.size()); ++i) {
    if (!s.nodes[i].is_substation) continue;
    const bool listed = std::any_of(s.substations.begin(), s.substations.end(),
                                    [i](const SubstationCap& c) { return c.node == i; });
    if (!listed) s.substations.push_back({i, 1.0e5, 1.0e5});
  }

  if (root.contains("transport")) {
    const json& tr = root.at("transport");
    s.transport.crew_travel = get_matrix<int>(tr, "crew_travel", "transport");
    s.transport.crew_dist = get_matrix<double>(tr, "crew_dist", "transport");
    s.transport.mps_travel = get_matrix<int>(tr, "mps_travel", "transport");
    s.transport.node_dist = get_matrix<double>(tr, "node_dist", "transport");
  }
  return s;
}

template <class T>
json matrix_json(const std::vector<std::vector<T>>& m) {
  json out = json::array();
  for (const auto& row : m) out.push_back(row);
  return out;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  Scenario s;
  try {
    s = from_json(root);
  } catch (const json::exception& e) {
    throw ParseError(std::string("schema error: ") + e.what());
  }
  const auto diags = validate_scenario(s);
  if (!diags.empty()) throw ScenarioError(diags.front().path, diags.front().message);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string dump_scenario(const Scenario& s) {
  json root;
  root["name"] = s.name;
  root["base_kva"] = s.base_kva;
  json hz{{"T", s.horizon.periods}, {"dt", s.horizon.dt},
          {"big_m_policy", s.horizon.big_m == BigMPolicy::Global ? "global" : "per-branch"}};
  if (s.horizon.epsilon) hz["epsilon"] = *s.horizon.epsilon;
  root["horizon"] = hz;

  json nodes = json::array();
  for (const auto& n : s.nodes) {
    nodes.push_back({{"id", n.id}, {"p", n.p_demand}, {"q", n.q_demand}, {"weight", n.weight},
                     {"v_min", n.v_min}, {"v_max", n.v_max}, {"substation", n.is_substation},
                     {"candidate", n.is_candidate}, {"vol", n.vol}});
  }
  root["nodes"] = nodes;

  json branches = json::array();
  for (const auto& b : s.branches) {
    branches.push_back({{"id", b.id}, {"from", s.nodes[b.from].id}, {"to", s.nodes[b.to].id},
                        {"r", b.r}, {"x", b.x}, {"s_cap", b.s_cap}, {"switch", b.has_switch},
                        {"damaged", b.damaged}});
  }
  root["branches"] = branches;

  json damaged = json::array();
  for (const auto& d : s.damaged) damaged.push_back({{"id", d.id}, {"branch", s.branches[d.branch].id}, {"rs", d.rs}});
  root["damaged"] = damaged;

  json depots = json::array();
  for (const auto& d : s.depots) depots.push_back({{"id", d.id}});
  root["depots"] = depots;

  json crews = json::array();
  for (const auto& c : s.crews)
    crews.push_back({{"id", c.id}, {"depot", s.depots[c.depot].id}, {"capacity", c.capacity},
                     {"repair_time", c.repair_time}});
  root["crews"] = crews;

  json sources = json::array();
  for (const auto& src : s.sources) {
    json js{{"id", src.id}, {"kind", src.is_mess() ? "MESS" : "MEG"},
            {"initial_node", src.initial_node ? json(s.nodes[*src.initial_node].id) : json(nullptr)},
            {"gp_max", src.gp_max}, {"gq_max", src.gq_max}};
    if (src.is_mess()) {
      js["cp_max"] = src.cp_max;
      js["dp_max"] = src.dp_max;
      js["eta_c"] = src.eta_c;
      js["eta_d"] = src.eta_d;
      js["soc_min"] = src.soc_min;
      js["soc_max"] = src.soc_max;
      js["soc_init"] = src.soc_init;
    }
    sources.push_back(js);
  }
  root["sources"] = sources;

  json subs = json::array();
  for (const auto& c : s.substations) subs.push_back({{"node", s.nodes[c.node].id}, {"p_max", c.p_max}, {"q_max", c.q_max}});
  root["substation"] = subs;

  root["transport"] = {{"crew_travel", matrix_json(s.transport.crew_travel)},
                       {"crew_dist", matrix_json(s.transport.crew_dist)},
                       {"mps_travel", matrix_json(s.transport.mps_travel)},
                       {"node_dist", matrix_json(s.transport.node_dist)}};
  return root.dump(2);
}

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << dump_scenario(s) << '\n';
}

}  // namespace drl
