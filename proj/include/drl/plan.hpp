#ifndef DRL_PLAN_HPP
#define DRL_PLAN_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "drl/coupling.hpp"
#include "drl/milp.hpp"
#include "drl/scenario.hpp"

namespace drl {

template <class T>
using Grid2 = std::vector<std::vector<T>>;

// Decoded solution. Every [.][t] array has T columns (period t + 1).
struct RestorationPlan {
  std::string scenario;
  int periods = 0;
  int sides = 8;
  DemandTerm demand_term = DemandTerm::Real;
  double epsilon = 0.0;
  bool repair_once_cut = true;
  std::string status;
  double objective = 0.0;
  double mip_gap = 0.0;

  Grid2<int> crew_at;  // [crew][t] vertex index, -1 while traveling
  std::vector<Grid2<int>> repaired;  // [crew][damaged][t] z values

  Grid2<int> source_at;  // [source][t] node index, -1 while traveling
  Grid2<double> gp, gq, cp, dp, soc;  // [source][t]; cp/dp/soc zero for MEG
  Grid2<int> charging, discharging;  // [source][t]

  Grid2<int> closed, operable;  // [branch][t]
  Grid2<double> pf, qf;  // [branch][t]
  Grid2<int> restored;  // [node][t]
  Grid2<double> v, P, Q, Pg, Qg;  // [node][t]

  bool operator==(const RestorationPlan&) const = default;
};

RestorationPlan decode_plan(const Scenario& s, const CoOptModel& m, const SolveResult& r);

// Restored real demand per period and the share of total demand.
std::vector<double> served_kw(const Scenario& s, const Grid2<int>& restored);
std::vector<double> served_share(const Scenario& s, const Grid2<int>& restored);

// Weighted restored-load term minus the travel term.
double plan_objective(const Scenario& s, const RestorationPlan& plan);
int travel_periods(const RestorationPlan& plan);

std::string dump_plan(const RestorationPlan& plan);
RestorationPlan parse_plan(const std::string& json_text);
void save_plan(const RestorationPlan& plan, const std::filesystem::path& path);
RestorationPlan load_plan(const std::filesystem::path& path);

}  // namespace drl

#endif  // DRL_PLAN_HPP
