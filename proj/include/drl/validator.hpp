#ifndef DRL_VALIDATOR_HPP
#define DRL_VALIDATOR_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "drl/plan.hpp"
#include "drl/scenario.hpp"

namespace drl {

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Violation {
  std::string family;
  std::string where;
  double residual = 0.0;
};

struct ViolationReport {
  std::vector<Violation> violations;
  std::map<std::string, double> worst_by_family;  // every checked family, including clean ones
  double worst_residual = 0.0;
  bool radial = true;
  // max over closed branches of sqrt(pf^2 + qf^2) / S; informational only
  double capacity_ratio = 0.0;
  double polygon_bound = 1.0;  // 1 / cos(pi / sides)
  bool feasible = true;

  std::vector<Violation> of(const std::string& family) const;
};

// Throws ValidationError when the plan's dimensions do not match the scenario.
ViolationReport validate_plan(const Scenario& s, const RestorationPlan& plan, double tolerance = 1e-6);

std::string format_report(const ViolationReport& r);

}  // namespace drl

#endif  // DRL_VALIDATOR_HPP
