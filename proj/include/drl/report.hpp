#ifndef DRL_REPORT_HPP
#define DRL_REPORT_HPP

#include <string>
#include <vector>

#include "drl/mps_dispatch.hpp"
#include "drl/plan.hpp"
#include "drl/rc_dispatch.hpp"
#include "drl/scenario.hpp"

namespace drl {

// Crew routes, one row per crew and one column per period (t=0 included).
// Cells: D<depot id>, a damaged branch "i-j", "→" traveling, "x" stopped.
std::string render_routes(const Scenario& s, const std::vector<CrewRoute>& routes);
PositionMatrix parse_routes(const Scenario& s, const std::string& table);

std::vector<SourceSchedule> schedules_of(const Scenario& s, const RestorationPlan& plan);
// Cells: node id, "→" traveling, "x" stopped.
std::string render_itineraries(const Scenario& s, const std::vector<SourceSchedule>& schedules);
Grid2<int> parse_itineraries(const Scenario& s, const std::string& table);

// Per period, switchable or damaged branches closed/opened relative to the
// previous period; period 0 has all of them open.
std::string render_switches(const Scenario& s, const Grid2<int>& closed);
// Rebuilds the full closed matrix; branches without a switch stay closed
// unless damaged.
Grid2<int> parse_switches(const Scenario& s, const std::string& table, int periods);

std::string restored_csv(const Scenario& s, const RestorationPlan& plan);
std::string power_csv(const Scenario& s, const RestorationPlan& plan);
std::string compare_csv(const std::vector<std::string>& names, const std::vector<std::vector<double>>& curves);

}  // namespace drl

#endif  // DRL_REPORT_HPP
