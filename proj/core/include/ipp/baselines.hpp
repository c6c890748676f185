#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "ipp/camera.hpp"
#include "ipp/plan.hpp"
#include "ipp/rewards.hpp"
#include "ipp/sensor_model.hpp"

namespace ipp {

struct MotionPrimitive {
  double curvature = 0.0;   // |curvature| <= 1 / turn_radius
  double arc_length = 0.0;  // m
};

/// `count` arcs with curvatures evenly spanning [-1/r, +1/r].
std::vector<MotionPrimitive> make_primitive_set(double turn_radius, int count,
                                                double arc_length);

/// UCB1 with the exploitation term normalized by the maximum mission
/// duration alpha = budget / speed.
double ucb_score(double node_info, int n_node, int n_tree, double exploration_weight,
                 double alpha);

struct MctsConfig {
  int primitive_count = 7;
  double primitive_length = 250.0;  // m
  double turn_radius = 100.0;
  double exploration_weight = 1.0;
  double planning_time = 10.0;   // s, wall clock
  int iterations_per_cycle = 0;  // > 0: iteration budget instead
  double speed = 25.0;
  double horizon = 0.0;  // m, 0 plans over the full budget
  std::uint64_t seed = 0;
  DecayFunction decay;
};

/// Monte Carlo tree search over motion primitives with UCB1 selection and
/// random-rollout value estimates.
class MctsPlanner : public PlannerBase {
 public:
  MctsPlanner(const CameraModel& cam, const SensorModel& sensor, MctsConfig config);
  Plan plan(const PlanRequest& request) override;
  void reset() override;
  std::string_view name() const override { return "mcts"; }

  /// Visit counts per depth-1 child of the last search, for diagnostics.
  const std::vector<int>& last_root_visits() const { return last_root_visits_; }

 private:
  CameraModel cam_;
  SensorModel sensor_;
  MctsConfig config_;
  std::mt19937_64 rng_;
  std::vector<int> last_root_visits_;
};

struct GreedyConfig {
  double turn_radius = 100.0;
  double speed = 25.0;
  DecayFunction decay;
};

/// Viewpoint placing the camera's central ray on the cell center,
/// approached along the bearing from `from`.
Pose greedy_viewpoint(const Pose& from, Vec2 cell_center, const CameraModel& cam,
                      double altitude);

/// Next viewpoint maximizing reward over travel cost, or nullopt when no
/// cell carries reward. Ties break to the lower cell index. The cost is
/// the curvature-feasible path length to the viewpoint, so viewpoints on
/// top of the vehicle price in the turn-around loop they require.
std::optional<Pose> greedy_plan_step(const Pose& state, const BeliefMap& map,
                                     const CameraModel& cam, const SensorModel& model,
                                     double turn_radius = 100.0);

/// Chains greedy steps, updating a working belief copy optimistically
/// along the way; stops when rewards vanish or the budget is spent.
class GreedyPlanner : public PlannerBase {
 public:
  GreedyPlanner(const CameraModel& cam, const SensorModel& sensor, GreedyConfig config);
  Plan plan(const PlanRequest& request) override;
  std::string_view name() const override { return "greedy"; }

 private:
  CameraModel cam_;
  SensorModel sensor_;
  GreedyConfig config_;
};

struct RandomConfig {
  double turn_radius = 100.0;
  std::uint64_t seed = 0;
};

/// Uniform target sampling; each target is observed via the minimum-cost
/// curvature-feasible path to its viewpoint until the budget runs out.
class RandomPlanner : public PlannerBase {
 public:
  RandomPlanner(const CameraModel& cam, RandomConfig config);
  Plan plan(const PlanRequest& request) override;
  void reset() override;
  std::string_view name() const override { return "random"; }

 private:
  CameraModel cam_;
  RandomConfig config_;
  std::mt19937_64 rng_;
};

struct CoverageConfig {
  double altitude = 50.0;
  double turn_radius = 100.0;
};

/// Row spacing: footprint width measured 20% up from the near edge.
double coverage_row_spacing(const CameraModel& cam, double altitude);

/// Untruncated boustrophedon sweep of the bounds, with loiter circles at
/// the pattern ends so the footprint fan also covers the boundary strips.
Plan coverage_pattern(const Bounds& bounds, const CameraModel& cam, double altitude,
                      double turn_radius);

class CoveragePlanner : public PlannerBase {
 public:
  CoveragePlanner(const CameraModel& cam, CoverageConfig config);
  Plan plan(const PlanRequest& request) override;
  std::string_view name() const override { return "coverage"; }

 private:
  CameraModel cam_;
  CoverageConfig config_;
};

/// Prefix of a plan with total cost at most `budget` (last edge cut).
Plan truncate_plan(const Plan& plan, double budget);

}  // namespace ipp
