#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "drl/milp.hpp"

using namespace drl;

TEST_CASE("add_var returns fresh ids and rejects inverted bounds") {
  Model m;
  const VarId b = m.add_binary("b");
  const VarId x = m.add_continuous(0.0, 500.0, "x");
  CHECK(b.index == 0);
  CHECK(x.index == 1);
  CHECK(m.num_binaries() == 1);
  CHECK_THROWS_AS(m.add_continuous(1.0, 0.0, "bad"), ModelError);
  CHECK_THROWS_AS(m.add_le(VarId{7}, 1.0, "dangling"), ModelError);
}

TEST_CASE("constants on both sides fold into the rhs and duplicates merge") {
  Model m;
  const VarId x = m.add_continuous(0.0, 10.0, "x");
  m.add_le(LinExpr(x) + LinExpr(x) + 2.0, LinExpr(x) + 5.0, "c");
  const auto& c = m.constraints().at(0);
  REQUIRE(c.terms.size() == 1);
  CHECK(c.terms[0].coef == doctest::Approx(1.0));
  CHECK(c.rhs == doctest::Approx(3.0));
}

TEST_CASE("McCormick product is exact at every envelope corner") {
  constexpr double g_ub = 300.0;
  for (double b : {0.0, 1.0}) {
    for (double g : {0.0, g_ub / 2, g_ub}) {
      for (ObjSense sense : {ObjSense::Maximize, ObjSense::Minimize}) {
        Model m;
        const VarId bv = m.add_binary("b");
        const VarId gv = m.add_continuous(0.0, g_ub, "g");
        const VarId w = mccormick_product(m, bv, gv, "w");
        m.fix(bv, b);
        m.fix(gv, g);
        m.set_objective(w, sense);
        const SolveResult r = solve(m, {});
        REQUIRE(r.status == SolveStatus::Optimal);
        CHECK(r.value(w) == doctest::Approx(b * g).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("McCormick product needs a bounded factor") {
  Model m;
  const VarId b = m.add_binary("b");
  const VarId g = m.add_continuous(0.0, kInf, "g");
  CHECK_THROWS_AS(mccormick_product(m, b, g, "w"), ModelError);
}

namespace {

SolveStatus capacity_point(double pf, double qf, double on, int sides) {
  Model m;
  const VarId p = m.add_continuous(-10.0, 10.0, "pf");
  const VarId q = m.add_continuous(-10.0, 10.0, "qf");
  const VarId l = m.add_binary("lambda");
  add_circle_capacity(m, p, q, l, 1.0, sides);
  m.fix(p, pf);
  m.fix(q, qf);
  m.fix(l, on);
  return solve(m, {}).status;
}

}  // namespace

TEST_CASE("polygon capacity cuts") {
  CHECK(capacity_point(1.0, 0.0, 1.0, 8) == SolveStatus::Optimal);
  CHECK(capacity_point(0.76, 0.76, 1.0, 8) == SolveStatus::Infeasible);
  CHECK(capacity_point(-0.7, 0.7, 1.0, 8) == SolveStatus::Optimal);
  CHECK(capacity_point(0.01, 0.0, 0.0, 8) == SolveStatus::Infeasible);
  CHECK(capacity_point(0.0, 0.0, 0.0, 8) == SolveStatus::Optimal);
  Model m;
  const VarId p = m.add_continuous(-1, 1, "p");
  CHECK_THROWS_AS(add_circle_capacity(m, p, p, m.add_binary("l"), 1.0, 7), ModelError);
}

TEST_CASE("outer polygon overshoot matches the vertex radius") {
  for (int sides : {4, 8, 12, 16}) {
    // Intersect facets k=0 and k=1: cos(0) p + sin(0) q = 1 and cos(a) p + sin(a) q = 1.
    const double a = 2.0 * std::numbers::pi / sides;
    const double p = 1.0;
    const double q = (1.0 - std::cos(a)) / std::sin(a);
    const double vertex_radius = std::hypot(p, q);
    CHECK(polygon_overshoot(sides) == doctest::Approx(vertex_radius).epsilon(1e-12));

    Model m;
    const VarId pv = m.add_continuous(-10.0, 10.0, "pf");
    const VarId qv = m.add_continuous(-10.0, 10.0, "qf");
    const VarId l = m.add_binary("lambda");
    add_circle_capacity(m, pv, qv, l, 1.0, sides);
    m.fix(l, 1.0);
    const double half = a / 2.0;
    m.set_objective(LinExpr(pv, std::cos(half)) + LinExpr(qv, std::sin(half)), ObjSense::Maximize);
    const SolveResult r = solve(m, {});
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(std::hypot(r.value(pv), r.value(qv)) == doctest::Approx(vertex_radius).epsilon(1e-7));
  }
  CHECK(polygon_overshoot(8) == doctest::Approx(1.0824).epsilon(1e-4));
}

TEST_CASE("solve reports optimal and infeasible truthfully") {
  Model m;
  const VarId x = m.add_continuous(0.0, kInf, "x");
  m.add_le(x, 3.0, "cap");
  m.set_objective(x, ObjSense::Maximize);
  const SolveResult r = solve(m, {});
  CHECK(r.status == SolveStatus::Optimal);
  CHECK(r.objective == doctest::Approx(3.0));
  CHECK(max_violation(m, r.values) <= 1e-9);

  Model bad;
  const VarId a = bad.add_continuous(2.0, kInf, "x");
  const VarId b = bad.add_continuous(0.0, kInf, "y");
  bad.add_le(LinExpr(a) + LinExpr(b), 1.0, "sum");
  bad.set_objective(a, ObjSense::Maximize);
  const SolveResult rb = solve(bad, {});
  CHECK(rb.status == SolveStatus::Infeasible);
  CHECK_FALSE(rb.has_solution());

  CHECK_THROWS_AS(solve(Model{}, {}), ModelError);
  CHECK_THROWS_AS(make_backend("nope"), BackendError);
}

TEST_CASE("integer program with polish keeps exact binaries") {
  Model m;
  std::array<VarId, 3> y;
  LinExpr weight, value;
  const std::array<double, 3> w{3, 4, 5}, v{4, 5, 7};
  for (int i = 0; i < 3; ++i) {
    y[i] = m.add_binary("y" + std::to_string(i));
    weight.add(y[i], w[i]);
    value.add(y[i], v[i]);
  }
  m.add_le(weight, 8.0, "knapsack");
  m.set_objective(value, ObjSense::Maximize);
  const SolveResult r = solve(m, {});
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.objective == doctest::Approx(11.0));
  for (VarId id : y) CHECK((r.value(id) == 0.0 || r.value(id) == 1.0));
}

TEST_CASE("LP export lists sections and names") {
  Model m;
  const VarId x = m.add_continuous(0.0, 4.0, "x[1]");
  const VarId b = m.add_binary("b");
  m.add_le(LinExpr(x) + LinExpr(b, 2.0), 5.0, "row");
  m.set_objective(x, ObjSense::Maximize);
  std::ostringstream out;
  write_lp(m, out);
  const std::string lp = out.str();
  CHECK(lp.find("Maximize") != std::string::npos);
  CHECK(lp.find("Subject To") != std::string::npos);
  CHECK(lp.find("Binar") != std::string::npos);
  CHECK(lp.find("End") != std::string::npos);
}
