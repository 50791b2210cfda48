#include "drl/milp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <unordered_map>

#include <fmt/core.h>

namespace drl {

LinExpr& LinExpr::operator+=(const LinExpr& o) {
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  constant_ += o.constant_;
  return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& o) {
  for (const auto& t : o.terms_) terms_.push_back({t.var, -t.coef});
  constant_ -= o.constant_;
  return *this;
}

LinExpr& LinExpr::operator*=(double k) {
  for (auto& t : terms_) t.coef *= k;
  constant_ *= k;
  return *this;
}

LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
LinExpr operator*(double k, LinExpr e) { return e *= k; }
LinExpr operator*(LinExpr e, double k) { return e *= k; }
LinExpr operator-(LinExpr e) { return e *= -1.0; }

VarId Model::add_var(VarKind kind, double lb, double ub, std::string name) {
  if (std::isnan(lb) || std::isnan(ub) || lb > ub)
    throw ModelError(fmt::format("variable {}: invalid bounds [{}, {}]", name, lb, ub));
  if (kind == VarKind::Binary && (lb < 0.0 || ub > 1.0))
    throw ModelError(fmt::format("binary variable {}: bounds must lie in [0, 1]", name));
  vars_.push_back({kind, lb, ub, std::move(name)});
  return VarId{static_cast<int>(vars_.size()) - 1};
}

void Model::check(VarId v) const {
  if (v.index < 0 || static_cast<std::size_t>(v.index) >= vars_.size())
    throw ModelError(fmt::format("unregistered variable id {}", v.index));
}

std::vector<Term> Model::merge(const std::vector<Term>& raw) const {
  std::vector<Term> out;
  std::unordered_map<int, std::size_t> slot;
  for (const auto& t : raw) {
    check(t.var);
    if (!std::isfinite(t.coef)) throw ModelError("non-finite coefficient on " + vars_[t.var.index].name);
    auto [it, fresh] = slot.emplace(t.var.index, out.size());
    if (fresh) out.push_back(t);
    else out[it->second].coef += t.coef;
  }
  std::erase_if(out, [](const Term& t) { return t.coef == 0.0; });
  return out;
}

void Model::add_constraint(const LinExpr& lhs, Sense sense, const LinExpr& rhs, std::string name) {
  LinExpr e = lhs - rhs;
  const double r = -e.constant();
  if (!std::isfinite(r)) throw ModelError("non-finite right-hand side in " + name);
  cons_.push_back({merge(e.terms()), sense, r, std::move(name)});
}

void Model::set_bounds(VarId v, double lb, double ub) {
  check(v);
  auto& var = vars_[v.index];
  if (lb > ub || (var.kind == VarKind::Binary && (lb < 0.0 || ub > 1.0)))
    throw ModelError(fmt::format("variable {}: invalid bounds [{}, {}]", var.name, lb, ub));
  var.lb = lb;
  var.ub = ub;
}

void Model::set_objective(const LinExpr& expr, ObjSense sense) {
  obj_ = merge(expr.terms());
  obj_constant_ = expr.constant();
  obj_sense_ = sense;
}

std::size_t Model::num_binaries() const {
  return static_cast<std::size_t>(
      std::count_if(vars_.begin(), vars_.end(), [](const Variable& v) { return v.kind == VarKind::Binary; }));
}

VarId mccormick_product(Model& m, VarId b, VarId g, std::string name) {
  const auto& bv = m.var(b);
  const auto& gv = m.var(g);
  if (bv.kind != VarKind::Binary) throw ModelError("mccormick_product: first factor must be binary");
  if (!std::isfinite(gv.ub) || gv.lb < 0.0)
    throw ModelError("mccormick_product: " + gv.name + " needs finite bounds within [0, ub]");
  const double g_ub = gv.ub;
  const VarId w = m.add_continuous(0.0, g_ub, name);
  m.add_le(w, g_ub * LinExpr(b), name + "_ub_b");
  m.add_le(w, g, name + "_ub_g");
  m.add_ge(w, LinExpr(g) - g_ub * (1.0 - LinExpr(b)), name + "_lb");
  return w;
}

double polygon_overshoot(int sides) { return 1.0 / std::cos(std::numbers::pi / sides); }

void add_circle_capacity(Model& m, VarId pf, VarId qf, VarId on, double S, int sides) {
  if (sides % 2 != 0) throw ModelError(fmt::format("circle capacity: sides must be even, got {}", sides));
  if (sides != 4 && sides != 8 && sides != 12 && sides != 16)
    throw ModelError(fmt::format("circle capacity: sides must be one of 4, 8, 12, 16, got {}", sides));
  if (!(S > 0.0)) throw ModelError("circle capacity: S must be positive");
  const std::string base = m.var(pf).name;
  for (int k = 0; k < sides; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / sides;
    double c = std::cos(theta);
    double s = std::sin(theta);
    if (std::abs(c) < 1e-12) c = 0.0;
    if (std::abs(s) < 1e-12) s = 0.0;
    LinExpr lhs;
    lhs.add(pf, c).add(qf, s);
    m.add_le(lhs, S * LinExpr(on), fmt::format("{}_cap{}", base, k));
  }
}

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::TimeLimit: return "time_limit";
    case SolveStatus::Error: return "error";
  }
  return "error";
}

SolveResult solve(const Model& model, const SolveOptions& opts, std::string_view backend) {
  if (model.empty()) throw ModelError("solve: model has no variables");
  SolveResult r = make_backend(backend)->solve(model, opts);
  if (!opts.polish || !r.has_solution() || model.num_binaries() == 0) return r;
  Model fixed = model;
  for (std::size_t j = 0; j < model.num_vars(); ++j) {
    const VarId v{static_cast<int>(j)};
    if (model.var(v).kind == VarKind::Binary) fixed.fix(v, std::round(r.value(v)));
  }
  SolveResult lp = make_backend(backend)->solve(fixed, opts);
  if (lp.status != SolveStatus::Optimal) return r;
  r.values = std::move(lp.values);
  r.objective = lp.objective;
  r.wall_time += lp.wall_time;
  return r;
}

namespace {

std::string lp_name(const std::string& raw, char prefix, int index) {
  std::string out;
  for (char c : raw) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.') out.push_back(c);
    else out.push_back('_');
  }
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out.front())) || out.front() == '.')
    out = fmt::format("{}{}_{}", prefix, index, out);
  return out;
}

void write_terms(std::ostream& out, const std::vector<Term>& terms, const std::vector<std::string>& names) {
  if (terms.empty()) {
    out << " 0 " << names.front();
    return;
  }
  int col = 0;
  for (const auto& t : terms) {
    out << (t.coef < 0 ? " - " : " + ") << fmt::format("{:.17g}", std::abs(t.coef)) << ' ' << names[t.var.index];
    if (++col % 6 == 0) out << "\n   ";
  }
}

}  // namespace

void write_lp(const Model& model, std::ostream& out) {
  std::vector<std::string> names;
  names.reserve(model.num_vars());
  for (std::size_t i = 0; i < model.num_vars(); ++i)
    names.push_back(fmt::format("x{}_{}", i, lp_name(model.variables()[i].name, 'x', static_cast<int>(i))));
  if (names.empty()) names.push_back("dummy");

  out << (model.objective_sense() == ObjSense::Maximize ? "Maximize\n" : "Minimize\n") << " obj:";
  write_terms(out, model.objective(), names);
  out << "\nSubject To\n";
  const auto& cons = model.constraints();
  for (std::size_t r = 0; r < cons.size(); ++r) {
    out << ' ' << fmt::format("c{}_{}", r, lp_name(cons[r].name, 'c', static_cast<int>(r))) << ':';
    write_terms(out, cons[r].terms, names);
    const char* op = cons[r].sense == Sense::Le ? " <= " : cons[r].sense == Sense::Ge ? " >= " : " = ";
    out << op << fmt::format("{:.17g}", cons[r].rhs) << '\n';
  }
  out << "Bounds\n";
  for (std::size_t i = 0; i < model.num_vars(); ++i) {
    const auto& v = model.variables()[i];
    if (v.kind == VarKind::Binary && v.lb == 0.0 && v.ub == 1.0) continue;
    if (!std::isfinite(v.lb) && !std::isfinite(v.ub)) {
      out << ' ' << names[i] << " free\n";
      continue;
    }
    out << ' ' << (std::isfinite(v.lb) ? fmt::format("{:.17g}", v.lb) : std::string("-inf")) << " <= " << names[i]
        << " <= " << (std::isfinite(v.ub) ? fmt::format("{:.17g}", v.ub) : std::string("+inf")) << '\n';
  }
  out << "Binaries\n";
  for (std::size_t i = 0; i < model.num_vars(); ++i)
    if (model.variables()[i].kind == VarKind::Binary) out << ' ' << names[i] << '\n';
  out << "End\n";
}

double max_violation(const Model& model, std::span<const double> values) {
  if (values.size() != model.num_vars()) throw ModelError("max_violation: assignment size mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto& v = model.variables()[i];
    worst = std::max({worst, v.lb - values[i], values[i] - v.ub});
  }
  for (const auto& c : model.constraints()) {
    double lhs = 0.0;
    for (const auto& t : c.terms) lhs += t.coef * values[t.var.index];
    switch (c.sense) {
      case Sense::Le: worst = std::max(worst, lhs - c.rhs); break;
      case Sense::Ge: worst = std::max(worst, c.rhs - lhs); break;
      case Sense::Eq: worst = std::max(worst, std::abs(lhs - c.rhs)); break;
    }
  }
  return worst;
}

}  // namespace drl
