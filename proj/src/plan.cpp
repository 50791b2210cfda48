#include "drl/plan.hpp"

#include <fstream>
#include <sstream>

#include <fmt/core.h>
#include <nlohmann/json.hpp>

#include "drl/rc_dispatch.hpp"

namespace drl {

using nlohmann::json;

namespace {

template <class T>
Grid2<T> values_of(const SolveResult& r, const PerPeriod<VarId>& vars) {
  Grid2<T> out;
  for (const auto& row : vars) {
    std::vector<T> vals;
    for (VarId v : row) {
      if (!v.valid()) vals.push_back(T{});
      else if constexpr (std::is_same_v<T, int>) vals.push_back(r.is_one(v) ? 1 : 0);
      else vals.push_back(r.value(v));
    }
    out.push_back(std::move(vals));
  }
  return out;
}

}  // namespace

RestorationPlan decode_plan(const Scenario& s, const CoOptModel& m, const SolveResult& r) {
  if (!r.has_solution()) throw DecodeError("decode_plan: result has no solution");
  const int T = s.periods();
  RestorationPlan p;
  p.scenario = s.name;
  p.periods = T;
  p.sides = m.config.sides;
  p.demand_term = m.config.demand_term;
  p.epsilon = s.effective_epsilon();
  p.repair_once_cut = m.config.repair_once_cut;
  p.status = std::string(to_string(r.status));
  p.objective = r.objective;
  p.mip_gap = r.mip_gap;

  p.crew_at = crew_positions(m.rc, r);
  for (const auto& c : m.rc.crews) {
    Grid2<int> z(s.damaged.size(), std::vector<int>(T, 0));
    for (std::size_t slot = 0; slot < c.tasks.size(); ++slot)
      for (int t = 0; t < T; ++t) z[c.tasks[slot]][t] = r.is_one(c.repaired[slot][t]) ? 1 : 0;
    p.repaired.push_back(std::move(z));
  }

  for (const auto& sv : m.mps.sources) {
    const auto& src = s.sources[sv.source];
    std::vector<int> at(T, -1);
    for (std::size_t j = 0; j < m.mps.nodes.size(); ++j)
      for (int t = 0; t < T; ++t)
        if (r.is_one(sv.connected[j][t])) {
          if (at[t] >= 0) throw DecodeError(fmt::format("source {} connected at two nodes in period {}", src.id, t + 1));
          at[t] = m.mps.nodes[j];
        }
    p.source_at.push_back(at);
    std::vector<double> zeros(T, 0.0);
    std::vector<int> off(T, 0);
    auto row = [&](const std::vector<VarId>& vars) {
      if (vars.empty()) return zeros;
      std::vector<double> out;
      for (VarId v : vars) out.push_back(r.value(v));
      return out;
    };
    auto flags = [&](const std::vector<VarId>& vars) {
      if (vars.empty()) return off;
      std::vector<int> out;
      for (VarId v : vars) out.push_back(r.is_one(v) ? 1 : 0);
      return out;
    };
    p.gp.push_back(row(sv.gp));
    p.gq.push_back(row(sv.gq));
    p.cp.push_back(row(sv.cp));
    p.dp.push_back(row(sv.dp));
    p.soc.push_back(row(sv.soc));
    p.charging.push_back(flags(sv.charging));
    p.discharging.push_back(flags(sv.discharging));
  }

  p.closed = values_of<int>(r, m.grid.closed);
  p.operable = values_of<int>(r, m.grid.operable);
  p.pf = values_of<double>(r, m.grid.pf);
  p.qf = values_of<double>(r, m.grid.qf);
  p.restored = values_of<int>(r, m.grid.restored);
  p.v = values_of<double>(r, m.grid.v);
  p.P = values_of<double>(r, m.grid.P);
  p.Q = values_of<double>(r, m.grid.Q);
  p.Pg = values_of<double>(r, m.grid.Pg);
  p.Qg = values_of<double>(r, m.grid.Qg);
  return p;
}

std::vector<double> served_kw(const Scenario& s, const Grid2<int>& restored) {
  const int T = restored.empty() ? 0 : static_cast<int>(restored[0].size());
  std::vector<double> out(T, 0.0);
  for (std::size_t i = 0; i < restored.size(); ++i)
    for (int t = 0; t < T; ++t)
      if (restored[i][t]) out[t] += s.nodes[i].p_demand[t];
  return out;
}

std::vector<double> served_share(const Scenario& s, const Grid2<int>& restored) {
  auto out = served_kw(s, restored);
  for (std::size_t t = 0; t < out.size(); ++t) {
    double total = 0.0;
    for (const auto& n : s.nodes) total += n.p_demand[t];
    out[t] = total > 0.0 ? out[t] / total : 1.0;
  }
  return out;
}

int travel_periods(const RestorationPlan& plan) {
  int n = 0;
  for (const auto& row : plan.crew_at)
    for (int v : row) n += v < 0 ? 1 : 0;
  for (const auto& row : plan.source_at)
    for (int v : row) n += v < 0 ? 1 : 0;
  return n;
}

double plan_objective(const Scenario& s, const RestorationPlan& plan) {
  double total = 0.0;
  for (std::size_t i = 0; i < plan.restored.size(); ++i) {
    const auto& node = s.nodes[i];
    const auto& demand = plan.demand_term == DemandTerm::Real ? node.p_demand : node.q_demand;
    for (std::size_t t = 0; t < plan.restored[i].size(); ++t)
      if (plan.restored[i][t]) total += node.weight * demand[t];
  }
  return total - plan.epsilon * travel_periods(plan);
}

std::string dump_plan(const RestorationPlan& p) {
  json j;
  j["scenario"] = p.scenario;
  j["periods"] = p.periods;
  j["sides"] = p.sides;
  j["demand_term"] = p.demand_term == DemandTerm::Real ? "real" : "reactive";
  j["epsilon"] = p.epsilon;
  j["repair_once_cut"] = p.repair_once_cut;
  j["status"] = p.status;
  j["objective"] = p.objective;
  j["mip_gap"] = p.mip_gap;
  j["crews"] = {{"at", p.crew_at}, {"repaired", p.repaired}};
  j["sources"] = {{"at", p.source_at}, {"gp", p.gp}, {"gq", p.gq}, {"cp", p.cp}, {"dp", p.dp},
                  {"soc", p.soc}, {"charging", p.charging}, {"discharging", p.discharging}};
  j["branches"] = {{"closed", p.closed}, {"operable", p.operable}, {"pf", p.pf}, {"qf", p.qf}};
  j["nodes"] = {{"restored", p.restored}, {"v", p.v}, {"P", p.P}, {"Q", p.Q}, {"Pg", p.Pg}, {"Qg", p.Qg}};
  return j.dump(1);
}

RestorationPlan parse_plan(const std::string& text) {
  RestorationPlan p;
  try {
    const json j = json::parse(text);
    p.scenario = j.value("scenario", "");
    p.periods = j.at("periods").get<int>();
    p.sides = j.value("sides", 8);
    p.demand_term = j.value("demand_term", "real") == "reactive" ? DemandTerm::Reactive : DemandTerm::Real;
    p.epsilon = j.at("epsilon").get<double>();
    p.repair_once_cut = j.value("repair_once_cut", true);
    p.status = j.value("status", "");
    p.objective = j.value("objective", 0.0);
    p.mip_gap = j.value("mip_gap", 0.0);
    const auto& c = j.at("crews");
    c.at("at").get_to(p.crew_at);
    c.at("repaired").get_to(p.repaired);
    const auto& src = j.at("sources");
    src.at("at").get_to(p.source_at);
    src.at("gp").get_to(p.gp);
    src.at("gq").get_to(p.gq);
    src.at("cp").get_to(p.cp);
    src.at("dp").get_to(p.dp);
    src.at("soc").get_to(p.soc);
    src.at("charging").get_to(p.charging);
    src.at("discharging").get_to(p.discharging);
    const auto& br = j.at("branches");
    br.at("closed").get_to(p.closed);
    br.at("operable").get_to(p.operable);
    br.at("pf").get_to(p.pf);
    br.at("qf").get_to(p.qf);
    const auto& n = j.at("nodes");
    n.at("restored").get_to(p.restored);
    n.at("v").get_to(p.v);
    n.at("P").get_to(p.P);
    n.at("Q").get_to(p.Q);
    n.at("Pg").get_to(p.Pg);
    n.at("Qg").get_to(p.Qg);
  } catch (const json::exception& e) {
    throw ParseError(fmt::format("plan: {}", e.what()));
  }
  return p;
}

void save_plan(const RestorationPlan& plan, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << dump_plan(plan) << '\n';
}

RestorationPlan load_plan(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_plan(buf.str());
}

}  // namespace drl
