#ifndef DRL_MILP_HPP
#define DRL_MILP_HPP

#include <iosfwd>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace drl {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { Binary, Continuous };

struct VarId {
  int index = -1;
  bool valid() const { return index >= 0; }
  auto operator<=>(const VarId&) const = default;
};

struct Term {
  VarId var;
  double coef = 0.0;
};

// Affine expression sum(coef * var) + constant. Terms are kept in insertion
// order; duplicates are merged when the expression is added to a model.
class LinExpr {
 public:
  LinExpr() = default;
  LinExpr(double constant) : constant_(constant) {}  // NOLINT(implicit)
  LinExpr(VarId v, double coef = 1.0) { terms_.push_back({v, coef}); }  // NOLINT(implicit)

  LinExpr& add(VarId v, double coef) {
    if (coef != 0.0) terms_.push_back({v, coef});
    return *this;
  }
  LinExpr& operator+=(const LinExpr& o);
  LinExpr& operator-=(const LinExpr& o);
  LinExpr& operator*=(double k);

  const std::vector<Term>& terms() const { return terms_; }
  double constant() const { return constant_; }

 private:
  std::vector<Term> terms_;
  double constant_ = 0.0;
};

LinExpr operator+(LinExpr a, const LinExpr& b);
LinExpr operator-(LinExpr a, const LinExpr& b);
LinExpr operator*(double k, LinExpr e);
LinExpr operator*(LinExpr e, double k);
LinExpr operator-(LinExpr e);

enum class Sense { Le, Eq, Ge };
enum class ObjSense { Maximize, Minimize };

struct Variable {
  VarKind kind = VarKind::Continuous;
  double lb = 0.0;
  double ub = kInf;
  std::string name;
};

struct LinConstraint {
  std::vector<Term> terms;  // merged, no zero coefficients
  Sense sense = Sense::Le;
  double rhs = 0.0;
  std::string name;
};

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Model {
 public:
  VarId add_var(VarKind kind, double lb, double ub, std::string name);
  VarId add_binary(std::string name) { return add_var(VarKind::Binary, 0.0, 1.0, std::move(name)); }
  VarId add_continuous(double lb, double ub, std::string name) {
    return add_var(VarKind::Continuous, lb, ub, std::move(name));
  }

  // lhs (sense) rhs; constants on either side are folded into the rhs.
  void add_constraint(const LinExpr& lhs, Sense sense, const LinExpr& rhs, std::string name);
  void add_le(const LinExpr& lhs, const LinExpr& rhs, std::string name) { add_constraint(lhs, Sense::Le, rhs, std::move(name)); }
  void add_ge(const LinExpr& lhs, const LinExpr& rhs, std::string name) { add_constraint(lhs, Sense::Ge, rhs, std::move(name)); }
  void add_eq(const LinExpr& lhs, const LinExpr& rhs, std::string name) { add_constraint(lhs, Sense::Eq, rhs, std::move(name)); }

  void set_bounds(VarId v, double lb, double ub);
  void fix(VarId v, double value) { set_bounds(v, value, value); }

  void set_objective(const LinExpr& expr, ObjSense sense);

  const Variable& var(VarId v) const { return vars_.at(static_cast<std::size_t>(v.index)); }
  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<LinConstraint>& constraints() const { return cons_; }
  const std::vector<Term>& objective() const { return obj_; }
  double objective_constant() const { return obj_constant_; }
  ObjSense objective_sense() const { return obj_sense_; }

  std::size_t num_vars() const { return vars_.size(); }
  std::size_t num_constraints() const { return cons_.size(); }
  std::size_t num_binaries() const;
  bool empty() const { return vars_.empty(); }

 private:
  void check(VarId v) const;
  std::vector<Term> merge(const std::vector<Term>& raw) const;

  std::vector<Variable> vars_;
  std::vector<LinConstraint> cons_;
  std::vector<Term> obj_;
  double obj_constant_ = 0.0;
  ObjSense obj_sense_ = ObjSense::Maximize;
};

// w = b * g for binary b and g in [0, g_ub]; exact at integral b.
VarId mccormick_product(Model& m, VarId b, VarId g, std::string name);

// Outer regular polygon of the disk pf^2 + qf^2 <= (on * S)^2.
void add_circle_capacity(Model& m, VarId pf, VarId qf, VarId on, double S, int sides);
// Polygon circumscription factor 1 / cos(pi / sides).
double polygon_overshoot(int sides);

enum class SolveStatus { Optimal, Feasible, Infeasible, TimeLimit, Error };
std::string_view to_string(SolveStatus s);

struct SolveOptions {
  double time_limit = kInf;  // seconds
  double mip_gap = 1e-4;  // relative
  double mip_abs_gap = 1e-6;
  double feasibility_tol = 1e-6;
  double integrality_tol = 1e-5;
  int seed = 0;
  bool verbose = false;
  // After a MIP solve, fix binaries to their rounded values and re-solve the
  // LP so continuous values are consistent with exact 0/1 decisions.
  bool polish = true;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Error;
  double objective = 0.0;
  double bound = 0.0;
  double mip_gap = 0.0;
  double wall_time = 0.0;
  std::vector<double> values;  // empty unless Optimal or Feasible
  std::string message;

  bool has_solution() const { return status == SolveStatus::Optimal || status == SolveStatus::Feasible; }
  double value(VarId v) const { return values.at(static_cast<std::size_t>(v.index)); }
  bool is_one(VarId v) const { return value(v) > 0.5; }
};

class BackendError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A solution that cannot be read back as a plan (e.g. two positions at once).
class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One model per solve() call; a single backend instance must not be used
// from two threads at once.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string name() const = 0;
  virtual SolveResult solve(const Model& model, const SolveOptions& opts) = 0;
};

// Known names: "highs". Throws BackendError for unknown names.
std::unique_ptr<Backend> make_backend(std::string_view name);
std::vector<std::string> available_backends();

SolveResult solve(const Model& model, const SolveOptions& opts, std::string_view backend = "highs");

// CPLEX LP text format.
void write_lp(const Model& model, std::ostream& out);

// Largest constraint/bound violation of an assignment; integrality excluded.
double max_violation(const Model& model, std::span<const double> values);

}  // namespace drl

#endif  // DRL_MILP_HPP
