#ifndef DRL_MPS_DISPATCH_HPP
#define DRL_MPS_DISPATCH_HPP

#include <span>
#include <vector>

#include "drl/milp.hpp"
#include "drl/scenario.hpp"

namespace drl {

struct SourceVariables {
  int source = 0;
  std::vector<std::vector<VarId>> connected;  // [node slot][t]
  std::vector<VarId> traveling;  // [t]
  std::vector<VarId> gp;  // MEG only
  std::vector<VarId> gq;
  // MESS only.
  std::vector<VarId> charging, discharging, cp, dp, soc;
};

struct MpsVariables {
  std::vector<int> nodes;  // node indices of the reduced candidate set
  std::vector<SourceVariables> sources;

  int slot_of_node(int node) const;
};

struct MpsOptions {
  // Start the relocation window at tau = t instead of t + 1. Parked sources
  // are then forced to leave after tr periods and to be disconnected at T.
  bool window_from_t = false;
};

MpsVariables build_mps_constraints(Model& model, const Scenario& s, std::span<const int> candidate_nodes,
                                   const MpsOptions& opts = {});

enum class StopKind { Node, Traveling, Stopped };

struct ItineraryCell {
  StopKind kind = StopKind::Traveling;
  int node = -1;
  bool operator==(const ItineraryCell&) const = default;
};

struct SourceSchedule {
  int source = 0;
  std::vector<ItineraryCell> cells;  // periods 1..T
  std::vector<double> real_power;  // kW; MESS discharge positive, charge negative
  std::vector<double> soc;  // MESS only
};

std::vector<SourceSchedule> extract_mps_schedule(const Scenario& s, const MpsVariables& vars, const SolveResult& result);

// Trailing zero-output periods at the final node are Stopped, except the
// arrival period. `start` is the position at period 0 (-1 in transit).
std::vector<ItineraryCell> itinerary_from_positions(int start, std::span<const int> positions,
                                                    std::span<const double> real_power,
                                                    std::span<const double> reactive_power);

}  // namespace drl

#endif  // DRL_MPS_DISPATCH_HPP
