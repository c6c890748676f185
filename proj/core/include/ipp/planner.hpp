#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "ipp/camera.hpp"
#include "ipp/dubins.hpp"
#include "ipp/plan.hpp"
#include "ipp/plan_tree.hpp"
#include "ipp/rewards.hpp"
#include "ipp/sensor_model.hpp"

namespace ipp {

struct PlannerConfig {
  double extend_distance = 1500.0;  // m
  double near_radius = 1500.0;      // m
  double prune_radius = 600.0;      // m
  double planning_time = 10.0;      // wall-clock budget per cycle, s
  int iterations_per_cycle = 0;     // > 0: iteration budget instead of wall clock
  double budget = 15000.0;          // m, default mission budget
  std::vector<double> altitudes{50.0};
  double turn_radius = 100.0;       // m
  std::uint64_t seed = 0;
  double eps_budget = 25.0;         // m, closed-set threshold
  double speed = 25.0;              // m/s, converts cost to time for decay
  DecayFunction decay;
  bool recycle = true;
  bool use_embeddings = true;
  double horizon = 0.0;             // m, 0 plans over the full budget
  double nominal_view_range = 0.0;  // m, 0 derives from camera + altitude
  double match_tol_pos = 1.0;       // m
  double match_tol_heading = deg_to_rad(5.0);
  int max_near_expansions = 8;      // closest open neighbors tried per sample; 0 = all
};

/// Reward-weighted pose sampler: picks a belief cell with probability
/// proportional to its optimistic single-view reward at a nominal range,
/// then a viewing pose whose footprint covers that cell. Falls back to
/// uniform poses when the map carries no reward.
class InformedSampler {
 public:
  InformedSampler(const BeliefMap& map, const CameraModel& cam, const SensorModel& sensor,
                  std::vector<double> altitudes, double nominal_range);

  bool has_reward() const { return total_weight_ > 0.0; }
  CellIndex sample_cell(std::mt19937_64& rng) const;
  Pose sample(const Bounds& bounds, std::mt19937_64& rng) const;

 private:
  Pose uniform_pose(const Bounds& bounds, std::mt19937_64& rng) const;

  const BeliefMap* map_;
  const CameraModel* cam_;
  std::vector<double> altitudes_;
  std::vector<CellIndex> cells_;
  std::vector<double> cum_weights_;
  double total_weight_ = 0.0;
};

/// Naive information recomputation for one node: replays the optimistic
/// observation sequence root -> node on an overlay of the base map using
/// the stored edge footprints. O(depth * footprint) per call.
struct ReplayResult {
  double info = 0.0;
  double cost = 0.0;
};
ReplayResult replay_node_info(const PlanTree& tree, NodeId id, const RewardContext& ctx);

/// Incremental informed-sampling tree planner with plan recycling across
/// cycles.
class InformedTreePlanner : public PlannerBase {
 public:
  InformedTreePlanner(const CameraModel& cam, const SensorModel& sensor, PlannerConfig config);

  Plan plan(const PlanRequest& request) override;
  void reset() override;
  std::string_view name() const override { return "informed_tree"; }
  std::vector<CycleStats> drain_cycle_stats() override {
    std::vector<CycleStats> out;
    out.swap(cycle_stats_);
    return out;
  }

  const PlanTree& tree() const { return tree_; }
  const PlannerConfig& config() const { return config_; }
  const std::vector<CycleStats>& cycle_stats() const { return cycle_stats_; }
  const UpdateStats& last_update_stats() const { return last_update_stats_; }

  /// Recycles the tree for a new start: matches the start against the
  /// previous plan, prunes everything before the match and re-scores the
  /// survivors; falls back to a fresh single-root tree. Returns true when
  /// the previous tree was recycled.
  bool update_graph(const Pose& new_start, double budget, const BeliefMap& base);

 private:
  void init_fresh_root(const Pose& start, double budget, const BeliefMap& base);
  std::optional<NodeId> try_attach(NodeId parent, const SteerResult& steered,
                                   const RewardContext& ctx, double budget, CycleStats& stats);
  Plan make_plan();

  CameraModel cam_;
  SensorModel sensor_;
  PlannerConfig config_;
  PlanTree tree_;
  std::mt19937_64 rng_;
  std::vector<NodeId> last_plan_nodes_;
  std::vector<CycleStats> cycle_stats_;
  UpdateStats last_update_stats_;
};

}  // namespace ipp
