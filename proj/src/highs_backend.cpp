#include <chrono>
#include <cmath>

#include <Highs.h>

#include "drl/milp.hpp"

namespace drl {
namespace {

class HighsBackend final : public Backend {
 public:
  std::string name() const override { return "highs"; }

  SolveResult solve(const Model& model, const SolveOptions& opts) override {
    const auto start = std::chrono::steady_clock::now();
    const auto n = static_cast<HighsInt>(model.num_vars());
    const auto& cons = model.constraints();

    HighsLp lp;
    lp.num_col_ = n;
    lp.num_row_ = static_cast<HighsInt>(cons.size());
    lp.sense_ = model.objective_sense() == drl::ObjSense::Maximize ? ::ObjSense::kMaximize : ::ObjSense::kMinimize;
    lp.offset_ = model.objective_constant();
    lp.col_cost_.assign(n, 0.0);
    for (const auto& t : model.objective()) lp.col_cost_[t.var.index] += t.coef;

    bool is_mip = false;
    lp.integrality_.assign(n, HighsVarType::kContinuous);
    for (HighsInt j = 0; j < n; ++j) {
      const auto& v = model.variables()[j];
      lp.col_lower_.push_back(std::isfinite(v.lb) ? v.lb : -kHighsInf);
      lp.col_upper_.push_back(std::isfinite(v.ub) ? v.ub : kHighsInf);
      if (v.kind == VarKind::Binary) {
        lp.integrality_[j] = HighsVarType::kInteger;
        is_mip = true;
      }
    }
    if (!is_mip) lp.integrality_.clear();

    // Column-wise copy of the row list.
    std::vector<HighsInt> count(n + 1, 0);
    for (const auto& c : cons)
      for (const auto& t : c.terms) ++count[t.var.index + 1];
    for (HighsInt j = 0; j < n; ++j) count[j + 1] += count[j];
    auto& a = lp.a_matrix_;
    a.format_ = MatrixFormat::kColwise;
    a.num_col_ = n;
    a.num_row_ = lp.num_row_;
    a.start_ = count;
    a.index_.resize(count[n]);
    a.value_.resize(count[n]);
    std::vector<HighsInt> fill(count.begin(), count.end() - 1);
    for (HighsInt r = 0; r < lp.num_row_; ++r) {
      const auto& c = cons[r];
      for (const auto& t : c.terms) {
        const HighsInt pos = fill[t.var.index]++;
        a.index_[pos] = r;
        a.value_[pos] = t.coef;
      }
      lp.row_lower_.push_back(c.sense == Sense::Le ? -kHighsInf : c.rhs);
      lp.row_upper_.push_back(c.sense == Sense::Ge ? kHighsInf : c.rhs);
    }

    Highs highs;
    highs.setOptionValue("output_flag", opts.verbose);
    highs.setOptionValue("random_seed", static_cast<HighsInt>(opts.seed));
    highs.setOptionValue("mip_rel_gap", opts.mip_gap);
    highs.setOptionValue("mip_abs_gap", opts.mip_abs_gap);
    highs.setOptionValue("primal_feasibility_tolerance", opts.feasibility_tol);
    highs.setOptionValue("mip_feasibility_tolerance", std::min(opts.feasibility_tol, opts.integrality_tol));
    if (std::isfinite(opts.time_limit)) highs.setOptionValue("time_limit", opts.time_limit);

    SolveResult result;
    if (highs.passModel(std::move(lp)) == HighsStatus::kError) {
      result.status = SolveStatus::Error;
      result.message = "highs rejected the model";
      return result;
    }
    const HighsStatus run_status = highs.run();
    const auto model_status = highs.getModelStatus();
    const auto& info = highs.getInfo();
    result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.message = highs.modelStatusToString(model_status);
    const bool has_point = info.primal_solution_status == kSolutionStatusFeasible;

    switch (model_status) {
      case HighsModelStatus::kOptimal:
        result.status = SolveStatus::Optimal;
        break;
      case HighsModelStatus::kInfeasible:
      case HighsModelStatus::kUnboundedOrInfeasible:
        result.status = SolveStatus::Infeasible;
        break;
      case HighsModelStatus::kTimeLimit:
      case HighsModelStatus::kIterationLimit:
      case HighsModelStatus::kSolutionLimit:
      case HighsModelStatus::kInterrupt:
        result.status = has_point ? SolveStatus::Feasible : SolveStatus::TimeLimit;
        break;
      default:
        result.status = SolveStatus::Error;
        break;
    }
    if (run_status == HighsStatus::kError && result.status == SolveStatus::Optimal) result.status = SolveStatus::Error;
    if (result.has_solution()) {
      result.values = highs.getSolution().col_value;
      result.objective = info.objective_function_value;
      result.bound = is_mip ? info.mip_dual_bound : result.objective;
      result.mip_gap = is_mip ? info.mip_gap : 0.0;
      if (!std::isfinite(result.mip_gap)) result.mip_gap = 1.0;
    }
    return result;
  }
};

}  // namespace

std::unique_ptr<Backend> make_backend(std::string_view name) {
  if (name == "highs") return std::make_unique<HighsBackend>();
  throw BackendError("unknown solver backend '" + std::string(name) + "' (available: highs)");
}

std::vector<std::string> available_backends() { return {"highs"}; }

}  // namespace drl
