#ifndef DRL_ORACLE_HPP
#define DRL_ORACLE_HPP

#include <stdexcept>
#include <vector>

#include "drl/coupling.hpp"
#include "drl/scenario.hpp"

namespace drl {

class OracleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct OracleResult {
  double objective = 0.0;
  std::vector<int> crew_at;  // single crew, [t]; empty without crews
  std::vector<int> source_at;  // single source, [t]; empty without sources
  std::vector<std::vector<int>> restored_nodes;  // [t] node indices
  std::vector<double> served_kw;  // [t]
  long feasibility_checks = 0;
};

struct OracleOptions {
  int sides = 8;
  DemandTerm demand_term = DemandTerm::Real;
};

// Exhaustive optimum for tiny instances: at most 2 damaged components,
// 1 crew, 1 MEG, 6 periods, 2 candidate nodes. Throws OracleError otherwise.
OracleResult brute_force_optimum(const Scenario& s, const OracleOptions& opts = {});

}  // namespace drl

#endif  // DRL_ORACLE_HPP
