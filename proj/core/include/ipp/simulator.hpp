#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ipp/belief_map.hpp"
#include "ipp/camera.hpp"
#include "ipp/plan.hpp"
#include "ipp/sensor_model.hpp"

namespace ipp {

struct SimConfig {
  double dt = 0.5;                  // s
  double speed = 25.0;              // m/s
  double accept_radius = 25.0;      // m, waypoint switch distance
  double banking_threshold = deg_to_rad(15.0);
  double heading_gain = 2.0;        // 1/s
  double altitude_gain = 1.0;       // 1/s
  double climb_rate_limit = 5.0;    // m/s
  double turn_radius = 100.0;       // m, caps the realized turn rate
  double replan_period = 10.0;      // s between plan requests
  double planning_latency = 10.0;   // s: lookahead T and delivery delay
  double track_spacing = 50.0;      // m between executor tracking waypoints
  double time_multiplier = 1.0;     // sim seconds elapsed per planner second
  bool replanning = true;
  std::uint64_t seed = 0;
  double max_mission_time = 0.0;    // s, 0 disables the cap
};

struct VehicleState {
  Pose pose;
  double speed = 25.0;        // m/s, constant
  double distance_flown = 0.0;  // m
};

struct EntropySample {
  double t = 0.0;
  double entropy_bits = 0.0;
  double pct_reduction = 0.0;
  Pose pose;
};

struct MissionState {
  std::vector<std::uint8_t> truth;  // per-cell ground-truth occupancy
  BeliefMap belief;
  VehicleState vehicle;
  Plan plan;
  std::size_t waypoint_index = 0;
  double time = 0.0;
  double budget = 0.0;
  bool complete = false;
  double initial_entropy = 0.0;
  double current_entropy = 0.0;

  double remaining_budget() const { return budget - vehicle.distance_flown; }
  double pct_reduction() const {
    return initial_entropy > 0.0
               ? 100.0 * (initial_entropy - current_entropy) / initial_entropy
               : 0.0;
  }
};

struct MissionReport {
  double final_pct_reduction = 0.0;
  double initial_entropy = 0.0;
  double final_entropy = 0.0;
  double path_length = 0.0;
  double mission_time = 0.0;
  int replan_count = 0;
  int planner_failures = 0;
  int merge_fallbacks = 0;
  int banking_ticks = 0;    // ticks with observations suppressed
  int observing_ticks = 0;
  bool budget_exceeded = false;  // flown more than one step past the budget
  std::vector<EntropySample> trace;
  std::vector<Pose> executed;
  std::vector<CycleStats> cycles;
  std::vector<double> plan_costs;  // total cost of every plan emitted
  BeliefMap final_belief;
};

/// One mission setup: prior belief, sampled ground truth, sensor rig and
/// mission budget.
struct Environment {
  BeliefMap prior;
  std::vector<std::uint8_t> truth;
  Bounds bounds;
  CameraModel cam;
  SensorModel sensor = SensorModel::default_table();
  Pose start;
  double budget = 0.0;
};

/// Draws each cell's occupancy once from its prior probability.
std::vector<std::uint8_t> sample_truth(const BeliefMap& prior, std::uint64_t seed);

/// Advances the vehicle by dt: P-control on heading (turn rate capped at
/// speed / turn_radius) and altitude, constant forward speed, waypoint
/// switching inside the acceptance radius (at most one switch per step).
void step(MissionState& state, const SimConfig& config, double dt);

/// True when the vehicle is considered banking toward its commanded
/// waypoint (heading error above the banking threshold).
bool is_banking(const MissionState& state, const SimConfig& config);

/// Simulates detector measurements over the current footprint and applies
/// the Bayesian update; skipped entirely while banking. Returns the
/// number of cells updated.
int observe(MissionState& state, const CameraModel& cam, const SensorModel& model,
            const SimConfig& config, std::mt19937_64& rng);

struct MergeOutcome {
  Plan plan;
  bool matched = false;  // false: spliced at the nearest plan point instead
};

/// Keeps the current plan up to merge_pose and appends the fresh plan
/// from there, re-chaining costs and predicted info. When merge_pose is
/// not on the current plan, the fresh plan is spliced at the nearest plan
/// point via a straight connector.
MergeOutcome merge_plan(const Plan& current, const Plan& fresh, const Pose& merge_pose,
                        double pos_tol = 1.0, double heading_tol = deg_to_rad(5.0));

MissionReport run_mission(const Environment& env, PlannerBase& planner, const SimConfig& config);

}  // namespace ipp
