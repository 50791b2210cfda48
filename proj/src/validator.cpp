#include "drl/validator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <fmt/core.h>

namespace drl {

namespace {

class Recorder {
 public:
  explicit Recorder(double tol) : tol_(tol) {}

  // `excess` is the amount by which a constraint is exceeded (<= 0 when satisfied).
  void check(const std::string& family, double excess, double scale, const std::string& where) {
    const double residual = std::max(0.0, excess) / std::max(1.0, std::abs(scale));
    auto& worst = report.worst_by_family[family];
    worst = std::max(worst, residual);
    report.worst_residual = std::max(report.worst_residual, residual);
    if (residual > tol_) report.violations.push_back({family, where, residual});
  }
  void touch(const std::string& family) { report.worst_by_family.try_emplace(family, 0.0); }

  ViolationReport report;

 private:
  double tol_;
};

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

template <class T>
void expect_shape(const Grid2<T>& g, std::size_t rows, int cols, const char* what) {
  if (g.size() != rows) throw ValidationError(fmt::format("plan.{}: expected {} rows, found {}", what, rows, g.size()));
  for (const auto& row : g)
    if (static_cast<int>(row.size()) != cols)
      throw ValidationError(fmt::format("plan.{}: expected {} periods, found {}", what, cols, row.size()));
}

// Windows of the travel-time constraints, applied to a position sequence
// with a virtual period 0. `travel(a, b)` returns periods between positions.
template <class Travel>
void check_windows(Recorder& rec, const std::string& family, const std::string& who, int start,
                   const std::vector<int>& at, Travel travel) {
  const int T = static_cast<int>(at.size());
  auto pos = [&](int t) { return t == 0 ? start : at[t - 1]; };
  for (int t1 = 0; t1 <= T; ++t1) {
    const int from = pos(t1);
    if (from < 0) continue;
    for (int t2 = t1 + 1; t2 <= T; ++t2) {
      const int to = pos(t2);
      if (to < 0 || to == from) continue;
      const int tr = travel(from, to);
      if (t2 - t1 <= tr)
        rec.check(family, 1.0, 1.0, fmt::format("{} at t={} then t={} (needs {} travel periods)", who, t1, t2, tr));
    }
  }
}

}  // namespace

std::vector<Violation> ViolationReport::of(const std::string& family) const {
  std::vector<Violation> out;
  for (const auto& v : violations)
    if (v.family == family) out.push_back(v);
  return out;
}

ViolationReport validate_plan(const Scenario& s, const RestorationPlan& p, double tol) {
  const int T = s.periods();
  const int n_nodes = static_cast<int>(s.nodes.size());
  const int n_branches = static_cast<int>(s.branches.size());
  const int n_damaged = static_cast<int>(s.damaged.size());
  if (p.periods != T) throw ValidationError(fmt::format("plan has {} periods, scenario has {}", p.periods, T));
  expect_shape(p.crew_at, s.crews.size(), T, "crews.at");
  if (p.repaired.size() != s.crews.size()) throw ValidationError("plan.crews.repaired: wrong crew count");
  for (const auto& z : p.repaired) expect_shape(z, s.damaged.size(), T, "crews.repaired");
  // Sources may be absent from a plan solved with sources disabled.
  const std::size_t n_sources = p.source_at.size();
  if (n_sources != 0 && n_sources != s.sources.size()) throw ValidationError("plan.sources.at: wrong source count");
  for (auto* g : {&p.gp, &p.gq, &p.cp, &p.dp, &p.soc}) expect_shape(*g, n_sources, T, "sources");
  expect_shape(p.source_at, n_sources, T, "sources.at");
  expect_shape(p.charging, n_sources, T, "sources.charging");
  expect_shape(p.discharging, n_sources, T, "sources.discharging");
  expect_shape(p.closed, n_branches, T, "branches.closed");
  expect_shape(p.operable, n_branches, T, "branches.operable");
  expect_shape(p.pf, n_branches, T, "branches.pf");
  expect_shape(p.qf, n_branches, T, "branches.qf");
  expect_shape(p.restored, n_nodes, T, "nodes.restored");
  for (auto* g : {&p.v, &p.P, &p.Q, &p.Pg, &p.Qg}) expect_shape(*g, n_nodes, T, "nodes");

  Recorder rec(tol);
  for (const char* f : {"crew_location", "crew_travel", "repair_progress", "repair_monotone", "repair_once",
                        "crew_resources", "source_location", "source_travel", "source_volume", "meg_caps", "mess_mode",
                        "mess_caps", "soc_recursion", "soc_bounds", "operable", "fixed_closed", "closed_operable",
                        "radiality", "energization", "restored_monotone", "p_balance", "q_balance", "voltage_bounds",
                        "voltage_drop", "capacity", "substation_caps", "injection", "objective"})
    rec.touch(f);

  // Crews.
  for (int k = 0; k < static_cast<int>(s.crews.size()); ++k) {
    const auto& crew = s.crews[k];
    const int depot = s.depot_vertex(crew.depot);
    const std::string who = fmt::format("crew {}", crew.id);
    for (int t = 0; t < T; ++t) {
      const int v = p.crew_at[k][t];
      if (v >= 0 && v != depot && v >= n_damaged)
        rec.check("crew_location", 1.0, 1.0, fmt::format("{} at foreign vertex {} in period {}", who, v, t + 1));
    }
    check_windows(rec, "crew_travel", who, depot, p.crew_at[k], [&](int a, int b) {
      return (a < 0 || b < 0 || a >= static_cast<int>(s.num_vertices()) || b >= static_cast<int>(s.num_vertices()))
                 ? 0
                 : s.transport.crew_travel[a][b];
    });
    double used = 0.0;
    for (int m = 0; m < n_damaged; ++m) {
      int visits = 0;
      for (int t = 0; t < T; ++t) {
        visits += p.crew_at[k][t] == m ? 1 : 0;
        const int z = p.repaired[k][m][t];
        rec.check("repair_progress", crew.repair_time[m] * z - visits, crew.repair_time[m],
                  fmt::format("{} marks {} repaired at t={} after {} visits", who, s.vertex_label(m), t + 1, visits));
        if (t > 0)
          rec.check("repair_monotone", p.repaired[k][m][t - 1] - z, 1.0,
                    fmt::format("{} un-repairs {} at t={}", who, s.vertex_label(m), t + 1));
      }
      used += s.damaged[m].rs * p.repaired[k][m][T - 1];
    }
    rec.check("crew_resources", used - crew.capacity, crew.capacity, who);
  }
  auto repaired_by = [&](int m, int t) {
    int n = 0;
    for (const auto& z : p.repaired) n += z[m][t];
    return n;
  };
  if (p.repair_once_cut)
    for (int m = 0; m < n_damaged; ++m)
      for (int t = 0; t < T; ++t)
        rec.check("repair_once", repaired_by(m, t) - 1.0, 1.0, fmt::format("{} at t={}", s.vertex_label(m), t + 1));

  // Mobile sources; P and Q are recomputed from raw outputs.
  Grid2<double> inject_p(n_nodes, std::vector<double>(T, 0.0)), inject_q = inject_p;
  for (std::size_t idx = 0; idx < n_sources; ++idx) {
    const auto& src = s.sources[idx];
    const std::string who = fmt::format("source {}", src.id);
    for (int t = 0; t < T; ++t) {
      const int at = p.source_at[idx][t];
      if (at >= n_nodes || (at >= 0 && !s.nodes[at].is_candidate))
        rec.check("source_location", 1.0, 1.0, fmt::format("{} at non-candidate node in period {}", who, t + 1));
    }
    check_windows(rec, "source_travel", who, src.initial_node.value_or(-1), p.source_at[idx], [&](int a, int b) {
      const int pa = s.candidate_position(a), pb = s.candidate_position(b);
      return pa < 0 || pb < 0 ? 0 : s.transport.mps_travel[pa][pb];
    });
    for (int t = 0; t < T; ++t) {
      const std::string when = fmt::format("{} t={}", who, t + 1);
      const int at = p.source_at[idx][t];
      const double on = at >= 0 ? 1.0 : 0.0;
      const double gq = p.gq[idx][t];
      if (!src.is_mess()) {
        const double gp = p.gp[idx][t];
        rec.check("meg_caps", gp - src.gp_max * on, src.gp_max, when + " gp");
        rec.check("meg_caps", -gp, src.gp_max, when + " gp < 0");
        rec.check("meg_caps", gq - src.gq_max * on, src.gq_max, when + " gq");
        rec.check("meg_caps", -gq, src.gq_max, when + " gq < 0");
        if (at >= 0 && at < n_nodes) {
          inject_p[at][t] += gp;
          inject_q[at][t] += gq;
        }
        continue;
      }
      const int c = p.charging[idx][t], d = p.discharging[idx][t];
      const double cp = p.cp[idx][t], dp = p.dp[idx][t];
      rec.check("mess_mode", c + d - on, 1.0, when);
      rec.check("mess_caps", cp - src.cp_max * c, src.cp_max, when + " cp");
      rec.check("mess_caps", dp - src.dp_max * d, src.dp_max, when + " dp");
      rec.check("mess_caps", -cp, src.cp_max, when + " cp < 0");
      rec.check("mess_caps", -dp, src.dp_max, when + " dp < 0");
      rec.check("mess_caps", gq - src.gq_max * (c + d), src.gq_max, when + " gq");
      rec.check("mess_caps", -gq, src.gq_max, when + " gq < 0");
      const double before = t == 0 ? src.soc_init : p.soc[idx][t - 1];
      const double expected = before + (cp * src.eta_c - dp / src.eta_d) * s.horizon.dt;
      rec.check("soc_recursion", std::abs(p.soc[idx][t] - expected), 1.0, when);
      rec.check("soc_bounds", src.soc_min - p.soc[idx][t], src.soc_max, when + " below min");
      rec.check("soc_bounds", p.soc[idx][t] - src.soc_max, src.soc_max, when + " above max");
      if (at >= 0 && at < n_nodes) {
        inject_p[at][t] += dp - cp;
        inject_q[at][t] += gq;
      }
    }
  }
  for (int i = 0; i < n_nodes; ++i) {
    for (int t = 0; t < T; ++t) {
      int attached = 0;
      for (std::size_t idx = 0; idx < n_sources; ++idx) attached += p.source_at[idx][t] == i ? 1 : 0;
      rec.check("source_volume", attached - s.nodes[i].vol, 1.0, fmt::format("node {} t={}", s.nodes[i].id, t + 1));
      const std::string where = fmt::format("node {} t={}", s.nodes[i].id, t + 1);
      rec.check("injection", std::abs(p.P[i][t] - inject_p[i][t]), inject_p[i][t], where + " P");
      rec.check("injection", std::abs(p.Q[i][t] - inject_q[i][t]), inject_q[i][t], where + " Q");
    }
  }

  // Branch states.
  for (int b = 0; b < n_branches; ++b) {
    const auto& br = s.branches[b];
    const std::string label = s.branch_label(b);
    for (int t = 0; t < T; ++t) {
      const std::string where = fmt::format("branch {} t={}", label, t + 1);
      const int u = p.operable[b][t], lam = p.closed[b][t];
      rec.check("closed_operable", lam - u, 1.0, where);
      if (!br.damaged) {
        rec.check("operable", 1.0 - u, 1.0, where + " intact but inoperable");
        if (!br.has_switch) rec.check("fixed_closed", 1.0 - lam, 1.0, where + " has no switch but is open");
        continue;
      }
      const int m = *s.damaged_of_branch(b);
      const int allowed = t == 0 ? 0 : std::min(1, repaired_by(m, t - 1));
      rec.check("operable", u - allowed, 1.0, where + " operable before repair");
    }
  }

  // Topology: acyclicity and energized islands.
  for (int t = 0; t < T; ++t) {
    UnionFind uf(n_nodes);
    for (int b = 0; b < n_branches; ++b) {
      if (!p.closed[b][t]) continue;
      if (!uf.unite(s.branches[b].from, s.branches[b].to)) {
        rec.check("radiality", 1.0, 1.0, fmt::format("closing {} makes a cycle at t={}", s.branch_label(b), t + 1));
        rec.report.radial = false;
      }
    }
    std::vector<char> fed(n_nodes, 0);
    for (int i = 0; i < n_nodes; ++i) {
      bool source = s.nodes[i].is_substation;
      for (std::size_t idx = 0; idx < n_sources; ++idx) source = source || p.source_at[idx][t] == i;
      if (source) fed[uf.find(i)] = 1;
    }
    for (int i = 0; i < n_nodes; ++i) {
      const bool loaded = p.restored[i][t] && (s.nodes[i].p_demand[t] > 0.0 || s.nodes[i].q_demand[t] > 0.0);
      if (loaded && !fed[uf.find(i)])
        rec.check("energization", 1.0, 1.0, fmt::format("node {} restored without a source at t={}", s.nodes[i].id, t + 1));
    }
  }

  // Power flow.
  const double overshoot = polygon_overshoot(p.sides);
  rec.report.polygon_bound = overshoot;
  for (int t = 0; t < T; ++t) {
    std::vector<double> p_bal(n_nodes), q_bal(n_nodes), p_scale(n_nodes), q_scale(n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
      const auto& node = s.nodes[i];
      const std::string where = fmt::format("node {} t={}", node.id, t + 1);
      if (t > 0) rec.check("restored_monotone", p.restored[i][t - 1] - p.restored[i][t], 1.0, where);
      p_bal[i] = inject_p[i][t] + p.Pg[i][t] - p.restored[i][t] * node.p_demand[t];
      q_bal[i] = inject_q[i][t] + p.Qg[i][t] - p.restored[i][t] * node.q_demand[t];
      p_scale[i] = std::max({std::abs(inject_p[i][t]), std::abs(p.Pg[i][t]), node.p_demand[t]});
      q_scale[i] = std::max({std::abs(inject_q[i][t]), std::abs(p.Qg[i][t]), node.q_demand[t]});
      const double v = p.v[i][t];
      rec.check("voltage_bounds", node.v_min * node.v_min - v, 1.0, where + " below min");
      rec.check("voltage_bounds", v - node.v_max * node.v_max, 1.0, where + " above max");
      const SubstationCap* cap = nullptr;
      for (const auto& c : s.substations)
        if (c.node == i) cap = &c;
      const double p_max = cap ? cap->p_max : 0.0, q_max = cap ? cap->q_max : 0.0;
      rec.check("substation_caps", std::abs(p.Pg[i][t]) - p_max, p_max, where + " Pg");
      rec.check("substation_caps", std::abs(p.Qg[i][t]) - q_max, q_max, where + " Qg");
    }
    for (int b = 0; b < n_branches; ++b) {
      const auto& br = s.branches[b];
      const double pf = p.pf[b][t], qf = p.qf[b][t];
      const int lam = p.closed[b][t];
      const std::string where = fmt::format("branch {} t={}", s.branch_label(b), t + 1);
      p_bal[br.to] += pf;
      p_bal[br.from] -= pf;
      q_bal[br.to] += qf;
      q_bal[br.from] -= qf;
      for (int e : {br.from, br.to}) {
        p_scale[e] = std::max(p_scale[e], std::abs(pf));
        q_scale[e] = std::max(q_scale[e], std::abs(qf));
      }
      for (int k = 0; k < p.sides; ++k) {
        const double theta = 2.0 * std::numbers::pi * k / p.sides;
        rec.check("capacity", std::cos(theta) * pf + std::sin(theta) * qf - lam * br.s_cap, br.s_cap, where);
      }
      if (lam) {
        rec.report.capacity_ratio = std::max(rec.report.capacity_ratio, std::hypot(pf, qf) / br.s_cap);
        const double drop = p.v[br.from][t] - p.v[br.to][t];
        const double expected = 2.0 * (br.r * pf + br.x * qf) / s.base_kva;
        rec.check("voltage_drop", std::abs(drop - expected), 1.0, where);
      }
    }
    for (int i = 0; i < n_nodes; ++i) {
      const std::string where = fmt::format("node {} t={}", s.nodes[i].id, t + 1);
      rec.check("p_balance", std::abs(p_bal[i]), p_scale[i], where);
      rec.check("q_balance", std::abs(q_bal[i]), q_scale[i], where);
    }
  }

  const double recomputed = plan_objective(s, p);
  rec.check("objective", std::abs(recomputed - p.objective), recomputed, "objective");

  rec.report.feasible = rec.report.violations.empty();
  return rec.report;
}

std::string format_report(const ViolationReport& r) {
  std::string out = fmt::format("feasible: {}\nworst residual: {:.3e}\nradial: {}\n", r.feasible ? "yes" : "no",
                                r.worst_residual, r.radial ? "yes" : "no");
  out += fmt::format("capacity ratio: {:.4f} (polygon bound {:.4f})\n", r.capacity_ratio, r.polygon_bound);
  for (const auto& [family, worst] : r.worst_by_family) out += fmt::format("  {:<18} {:.3e}\n", family, worst);
  constexpr std::size_t kShown = 20;
  for (std::size_t i = 0; i < r.violations.size() && i < kShown; ++i) {
    const auto& v = r.violations[i];
    out += fmt::format("violation [{}] {}: {:.3e}\n", v.family, v.where, v.residual);
  }
  if (r.violations.size() > kShown) out += fmt::format("... {} more\n", r.violations.size() - kShown);
  return out;
}

}  // namespace drl
