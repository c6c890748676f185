#pragma once

#include <cstdint>
#include <unordered_map>

#include "ipp/belief_map.hpp"
#include "ipp/camera.hpp"
#include "ipp/sensor_model.hpp"

namespace ipp {

/// Linear reward decay over mission time: 1 at t = 0, dropping at rate
/// `beta` (<= 0 per second) until the floor `gamma`, reached at
/// switch_time() = (gamma - 1) / beta. beta == 0 disables decay.
struct DecayFunction {
  double gamma = 1.0;
  double beta = 0.0;

  double switch_time() const { return beta < 0.0 ? (gamma - 1.0) / beta : 0.0; }

  double value(double t) const {
    if (beta == 0.0) return 1.0;
    if (t >= switch_time()) return gamma;
    return beta * t + 1.0;
  }

  static DecayFunction none() { return {}; }
  static DecayFunction make(double gamma, double beta);  // validates
};

double decay_value(const DecayFunction& decay, double t);

struct CellReward {
  double reward = 0.0;   // entropy reduction, bits (>= 0)
  double p_after = 0.0;  // stored posterior
};

/// Expected single-view reward assuming the most likely measurement sign
/// (positive iff p >= 0.5). Cells already at the storage clamp bounds are
/// treated as settled and yield zero reward.
CellReward optimistic_cell_reward(double p, double range, const SensorModel& model);

double weighted_cell_reward(double p, double range, const SensorModel& model, double priority,
                            double t, const DecayFunction& decay);

/// Shared inputs for scoring footprints against a base belief snapshot.
struct RewardContext {
  const BeliefMap* base = nullptr;
  const SensorModel* sensor = nullptr;
  DecayFunction decay;
  double speed = 25.0;  // m/s, converts path cost to time for the decay
};

/// Per-node record of the cells one observation changed: cell -> stored
/// posterior.
using DeltaMap = std::unordered_map<CellIndex, double>;

struct NodeScore {
  DeltaMap delta;
  double info_gain = 0.0;  // priority- and decay-weighted bits
};

/// Scores one footprint: looks up each cell's current belief through
/// `belief_of`, applies the optimistic single measurement at the stored
/// (minimum) range, and collects posteriors into a fresh delta map.
/// `belief_of` is any callable CellIndex -> double.
template <typename BeliefFn>
NodeScore score_footprint(const Footprint& fp, BeliefFn&& belief_of, const RewardContext& ctx,
                          double time_at_node) {
  NodeScore out;
  out.delta.reserve(fp.cells.size());
  const double decay = ctx.decay.value(time_at_node);
  for (const CellView& cv : fp.cells) {
    const double p = belief_of(cv.cell);
    const CellReward r = optimistic_cell_reward(p, cv.range, *ctx.sensor);
    out.info_gain += ctx.base->priority(cv.cell) * decay * r.reward;
    out.delta.emplace(cv.cell, r.p_after);
  }
  return out;
}

}  // namespace ipp
