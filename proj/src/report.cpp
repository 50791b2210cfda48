#include "drl/report.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <fmt/core.h>

namespace drl {

namespace {

constexpr const char* kTravel = "→";
constexpr const char* kStopped = "x";

std::string align(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  auto visible = [](const std::string& cell) {
    std::size_t n = 0;
    for (unsigned char c : cell) n += (c & 0xC0) != 0x80 ? 1 : 0;
    return n;
  };
  for (const auto& row : rows) {
    if (width.size() < row.size()) width.resize(row.size(), 0);
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], visible(row[c]));
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      line += row[c];
      if (c + 1 < row.size()) line += std::string(width[c] - visible(row[c]) + 2, ' ');
    }
    out += line + "\n";
  }
  return out;
}

std::vector<std::vector<std::string>> tokens(const std::string& table) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(table);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream words(line);
    std::vector<std::string> row;
    for (std::string w; words >> w;) row.push_back(w);
    if (!row.empty()) out.push_back(std::move(row));
  }
  return out;
}

std::vector<std::string> header(const char* first, int T) {
  std::vector<std::string> h{first, "t=0"};
  for (int t = 1; t <= T; ++t) h.push_back(std::to_string(t));
  return h;
}

std::vector<int> split_ints_or_labels(const std::string& cell, const std::map<std::string, int>& index) {
  std::vector<int> out;
  if (cell == "-") return out;
  std::stringstream in(cell);
  for (std::string item; std::getline(in, item, ',');) {
    auto it = index.find(item);
    if (it == index.end()) throw ParseError("unknown branch in switch table: " + item);
    out.push_back(it->second);
  }
  return out;
}

}  // namespace

std::string render_routes(const Scenario& s, const std::vector<CrewRoute>& routes) {
  const int T = routes.empty() ? s.periods() : static_cast<int>(routes.front().cells.size());
  std::vector<std::vector<std::string>> rows{header("crew", T)};
  for (const auto& route : routes) {
    const auto& crew = s.crews[route.crew];
    std::vector<std::string> row{std::to_string(crew.id), fmt::format("D{}", s.depots[crew.depot].id)};
    for (const auto& cell : route.cells) {
      switch (cell.kind) {
        case RouteCellKind::Depot: row.push_back(fmt::format("D{}", s.depots[cell.vertex - s.damaged.size()].id)); break;
        case RouteCellKind::Component: row.push_back(s.branch_label(s.damaged[cell.vertex].branch)); break;
        case RouteCellKind::Traveling: row.push_back(kTravel); break;
        case RouteCellKind::Stopped: row.push_back(kStopped); break;
      }
    }
    rows.push_back(std::move(row));
  }
  return align(rows);
}

PositionMatrix parse_routes(const Scenario& s, const std::string& table) {
  std::map<std::string, int> vertex;
  for (std::size_t m = 0; m < s.damaged.size(); ++m) vertex[s.branch_label(s.damaged[m].branch)] = static_cast<int>(m);
  for (std::size_t n = 0; n < s.depots.size(); ++n)
    vertex[fmt::format("D{}", s.depots[n].id)] = s.depot_vertex(static_cast<int>(n));
  const auto rows = tokens(table);
  PositionMatrix out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() < 2) throw ParseError("route table: short row");
    std::vector<int> pos;
    int previous = vertex.at(row[1]);
    for (std::size_t c = 2; c < row.size(); ++c) {
      if (row[c] == kTravel) previous = -1;
      else if (row[c] != kStopped) {
        auto it = vertex.find(row[c]);
        if (it == vertex.end()) throw ParseError("route table: unknown cell " + row[c]);
        previous = it->second;
      } else if (previous < 0) {
        throw ParseError("route table: stop without a location");
      }
      pos.push_back(previous);
    }
    out.push_back(std::move(pos));
  }
  return out;
}

std::vector<SourceSchedule> schedules_of(const Scenario& s, const RestorationPlan& plan) {
  std::vector<SourceSchedule> out;
  for (std::size_t idx = 0; idx < plan.source_at.size(); ++idx) {
    const auto& src = s.sources[idx];
    SourceSchedule sched;
    sched.source = static_cast<int>(idx);
    for (int t = 0; t < plan.periods; ++t)
      sched.real_power.push_back(src.is_mess() ? plan.dp[idx][t] - plan.cp[idx][t] : plan.gp[idx][t]);
    if (src.is_mess()) sched.soc = plan.soc[idx];
    sched.cells = itinerary_from_positions(src.initial_node.value_or(-1), plan.source_at[idx], sched.real_power,
                                           plan.gq[idx]);
    out.push_back(std::move(sched));
  }
  return out;
}

std::string render_itineraries(const Scenario& s, const std::vector<SourceSchedule>& schedules) {
  const int T = schedules.empty() ? s.periods() : static_cast<int>(schedules.front().cells.size());
  std::vector<std::vector<std::string>> rows{header("source", T)};
  for (const auto& sched : schedules) {
    const auto& src = s.sources[sched.source];
    std::vector<std::string> row{std::to_string(src.id),
                                 src.initial_node ? std::to_string(s.nodes[*src.initial_node].id) : kTravel};
    for (const auto& cell : sched.cells) {
      if (cell.kind == StopKind::Node) row.push_back(std::to_string(s.nodes[cell.node].id));
      else row.push_back(cell.kind == StopKind::Traveling ? kTravel : kStopped);
    }
    rows.push_back(std::move(row));
  }
  return align(rows);
}

Grid2<int> parse_itineraries(const Scenario& s, const std::string& table) {
  const auto rows = tokens(table);
  Grid2<int> out;
  auto node_of = [&](const std::string& cell) {
    const int idx = s.node_index(std::stoi(cell));
    if (idx < 0) throw ParseError("itinerary table: unknown node " + cell);
    return idx;
  };
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() < 2) throw ParseError("itinerary table: short row");
    int previous = row[1] == kTravel ? -1 : node_of(row[1]);
    std::vector<int> pos;
    for (std::size_t c = 2; c < row.size(); ++c) {
      if (row[c] == kTravel) previous = -1;
      else if (row[c] != kStopped) previous = node_of(row[c]);
      else if (previous < 0) throw ParseError("itinerary table: stop without a location");
      pos.push_back(previous);
    }
    out.push_back(std::move(pos));
  }
  return out;
}

std::string render_switches(const Scenario& s, const Grid2<int>& closed) {
  const int T = closed.empty() ? s.periods() : static_cast<int>(closed.front().size());
  std::vector<std::vector<std::string>> rows{{"t", "closed", "opened"}};
  for (int t = 0; t < T; ++t) {
    std::vector<std::string> on, off;
    for (std::size_t b = 0; b < s.branches.size(); ++b) {
      const auto& br = s.branches[b];
      if (!br.has_switch && !br.damaged) continue;
      const int before = t == 0 ? 0 : closed[b][t - 1];
      if (closed[b][t] && !before) on.push_back(s.branch_label(static_cast<int>(b)));
      if (!closed[b][t] && before) off.push_back(s.branch_label(static_cast<int>(b)));
    }
    auto join = [](const std::vector<std::string>& v) {
      if (v.empty()) return std::string("-");
      std::string out;
      for (const auto& x : v) out += (out.empty() ? "" : ",") + x;
      return out;
    };
    rows.push_back({std::to_string(t + 1), join(on), join(off)});
  }
  return align(rows);
}

Grid2<int> parse_switches(const Scenario& s, const std::string& table, int periods) {
  std::map<std::string, int> index;
  for (std::size_t b = 0; b < s.branches.size(); ++b) index[s.branch_label(static_cast<int>(b))] = static_cast<int>(b);
  Grid2<int> closed(s.branches.size(), std::vector<int>(periods, 0));
  std::vector<int> state(s.branches.size(), 0);
  for (std::size_t b = 0; b < s.branches.size(); ++b)
    if (!s.branches[b].has_switch && !s.branches[b].damaged) state[b] = 1;
  const auto rows = tokens(table);
  int t = 0;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != 3) throw ParseError("switch table: expected 3 columns");
    const int period = std::stoi(row[0]);
    if (period != t + 1 || period > periods) throw ParseError("switch table: periods out of order");
    for (int b : split_ints_or_labels(row[1], index)) state[b] = 1;
    for (int b : split_ints_or_labels(row[2], index)) state[b] = 0;
    for (std::size_t b = 0; b < state.size(); ++b) closed[b][t] = state[b];
    ++t;
  }
  if (t != periods) throw ParseError("switch table: missing periods");
  return closed;
}

std::string restored_csv(const Scenario& s, const RestorationPlan& plan) {
  const auto kw = served_kw(s, plan.restored);
  const auto share = served_share(s, plan.restored);
  std::string out = "period,served_kw,served_pct\n";
  for (std::size_t t = 0; t < kw.size(); ++t) out += fmt::format("{},{:.4f},{:.4f}\n", t + 1, kw[t], 100.0 * share[t]);
  return out;
}

std::string power_csv(const Scenario& s, const RestorationPlan& plan) {
  std::string out = "period,source,kind,kw,kvar,soc_kwh\n";
  const auto schedules = schedules_of(s, plan);
  for (int t = 0; t < plan.periods; ++t) {
    for (const auto& sched : schedules) {
      const auto& src = s.sources[sched.source];
      out += fmt::format("{},{},{},{:.4f},{:.4f},", t + 1, src.id, src.is_mess() ? "MESS" : "MEG", sched.real_power[t],
                         plan.gq[sched.source][t]);
      out += src.is_mess() ? fmt::format("{:.4f}\n", sched.soc[t]) : std::string("\n");
    }
  }
  return out;
}

std::string compare_csv(const std::vector<std::string>& names, const std::vector<std::vector<double>>& curves) {
  std::string out = "period";
  for (const auto& n : names) out += "," + n;
  out += "\n";
  const std::size_t T = curves.empty() ? 0 : curves.front().size();
  for (std::size_t t = 0; t < T; ++t) {
    out += std::to_string(t + 1);
    for (const auto& c : curves) out += fmt::format(",{:.4f}", c.at(t));
    out += "\n";
  }
  return out;
}

}  // namespace drl
