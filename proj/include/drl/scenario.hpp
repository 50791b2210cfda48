#ifndef DRL_SCENARIO_HPP
#define DRL_SCENARIO_HPP

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace drl {

// Grid node. Demands are per period (index 0 is period 1).
struct Node {
  int id = 0;
  std::vector<double> p_demand;  // kW
  std::vector<double> q_demand;  // kVar
  double weight = 1.0;
  double v_min = 0.95;  // p.u.
  double v_max = 1.05;
  bool is_substation = false;
  bool is_candidate = false;
  int vol = 0;  // max mobile sources attachable

  double peak_p() const;
  double peak_q() const;
  bool operator==(const Node&) const = default;
};

// `from`/`to` are node indices (positions in Scenario::nodes), not ids.
struct Branch {
  int id = 0;
  int from = 0;
  int to = 0;
  double r = 0.0;  // p.u.
  double x = 0.0;  // p.u.
  double s_cap = 0.0;  // kVA
  bool has_switch = false;
  bool damaged = false;
  bool operator==(const Branch&) const = default;
};

struct DamagedComponent {
  int id = 0;
  int branch = 0;  // index into Scenario::branches
  int rs = 1;
  bool operator==(const DamagedComponent&) const = default;
};

struct Depot {
  int id = 0;
  bool operator==(const Depot&) const = default;
};

struct Crew {
  int id = 0;
  int depot = 0;  // index into Scenario::depots
  double capacity = 0.0;
  std::vector<int> repair_time;  // periods, per damaged component
  bool operator==(const Crew&) const = default;
};

enum class SourceKind { Meg, Mess };

struct MobileSource {
  int id = 0;
  SourceKind kind = SourceKind::Meg;
  std::optional<int> initial_node;  // node index; empty = in transit at t=0
  double gp_max = 0.0;
  double gq_max = 0.0;
  double cp_max = 0.0;
  double dp_max = 0.0;
  double eta_c = 1.0;
  double eta_d = 1.0;
  double soc_min = 0.0;
  double soc_max = 0.0;
  double soc_init = 0.0;

  bool is_mess() const { return kind == SourceKind::Mess; }
  bool operator==(const MobileSource&) const = default;
};

// Crew matrices are indexed over V = damaged components followed by depots.
// Source matrices are indexed over Scenario::candidate_nodes() order.
struct TransportMatrix {
  std::vector<std::vector<int>> crew_travel;
  std::vector<std::vector<double>> crew_dist;
  std::vector<std::vector<int>> mps_travel;
  std::vector<std::vector<double>> node_dist;
  bool operator==(const TransportMatrix&) const = default;
};

enum class BigMPolicy { PerBranch, Global };

struct Horizon {
  int periods = 1;
  double dt = 1.0;  // hours
  std::optional<double> epsilon;  // empty: derived from demands
  BigMPolicy big_m = BigMPolicy::PerBranch;
  bool operator==(const Horizon&) const = default;
};

struct SubstationCap {
  int node = 0;  // node index
  double p_max = 1.0e5;
  double q_max = 1.0e5;
  bool operator==(const SubstationCap&) const = default;
};

struct Scenario {
  std::string name;
  std::vector<Node> nodes;
  std::vector<Branch> branches;
  std::vector<DamagedComponent> damaged;
  std::vector<Depot> depots;
  std::vector<Crew> crews;
  std::vector<MobileSource> sources;
  TransportMatrix transport;
  Horizon horizon;
  std::vector<SubstationCap> substations;
  double base_kva = 1.0;  // flows are divided by this in voltage-drop terms

  int periods() const { return horizon.periods; }
  std::size_t num_vertices() const { return damaged.size() + depots.size(); }
  int depot_vertex(int depot) const { return static_cast<int>(damaged.size()) + depot; }

  // Node indices with is_candidate, ascending.
  std::vector<int> candidate_nodes() const;
  // Position of a node inside candidate_nodes(), or -1.
  int candidate_position(int node) const;
  int node_index(int id) const;  // -1 if absent
  int depot_index(int id) const;
  std::optional<int> damaged_of_branch(int branch) const;
  std::string branch_label(int branch) const;  // "from_id-to_id"
  std::string vertex_label(int vertex) const;
  std::vector<int> crews_of_depot(int depot) const;
  double effective_epsilon() const;
  int substation_node() const;  // first substation; throws if none

  bool operator==(const Scenario&) const = default;
};

struct Diagnostic {
  std::string path;
  std::string message;
};

class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message),
        path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<Diagnostic> validate_scenario(const Scenario& s);

// Throws ParseError on malformed JSON/schema, ScenarioError on the first
// invariant violation.
Scenario load_scenario(const std::filesystem::path& path);
Scenario parse_scenario(const std::string& json_text);

std::string dump_scenario(const Scenario& s);
void save_scenario(const Scenario& s, const std::filesystem::path& path);

}  // namespace drl

#endif  // DRL_SCENARIO_HPP
