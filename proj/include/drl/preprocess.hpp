#ifndef DRL_PREPROCESS_HPP
#define DRL_PREPROCESS_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "drl/milp.hpp"
#include "drl/rc_dispatch.hpp"
#include "drl/scenario.hpp"

namespace drl {

class PreprocessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class AssignMode { Minimal, All };

struct PreAssignment {
  std::vector<int> depot_of;  // per damaged component; -1 if unassigned
  std::vector<int> assigned;  // damaged indices, ascending
  std::vector<int> unassigned;
  double total_distance = 0.0;

  TaskAssignment tasks(std::size_t num_depots) const;
};

struct PreprocessOptions {
  SolveOptions solve;
  std::string backend = "highs";
  int sides = 8;
  bool tie_break = true;  // lexicographically smallest among optima
};

// Throws PreprocessError if no repair subset lets the substation alone serve
// every load at peak demand (Minimal) or the crews lack resources (All).
PreAssignment preassign_min_repairs(const Scenario& s, AssignMode mode = AssignMode::Minimal,
                                    const PreprocessOptions& opts = {});

// Single-period check: with only `repaired` damaged components operable,
// can the substation serve every load at peak demand?
bool supports_full_supply(const Scenario& s, const std::vector<int>& repaired, const PreprocessOptions& opts = {});

struct IslandPartition {
  std::vector<std::vector<int>> islands;  // node indices, ascending; ordered by smallest member
  std::vector<std::vector<int>> candidate_sets;  // islands[k] intersected with candidate nodes

  int island_of(int node) const;
};

IslandPartition detect_islands(const Scenario& s);

struct CandidateSelection {
  std::vector<int> selected;  // node indices, ascending
  double total_distance = 0.0;  // unordered pairs
};

// Throws PreprocessError if no island carries a candidate node.
CandidateSelection select_candidates(const Scenario& s, const IslandPartition& partition,
                                     const PreprocessOptions& opts = {});

// Sum of node_dist over unordered pairs of `nodes`.
double selection_distance(const Scenario& s, const std::vector<int>& nodes);

}  // namespace drl

#endif  // DRL_PREPROCESS_HPP
