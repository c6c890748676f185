#include "ipp/scenarios.hpp"

namespace ipp {

Scenario field_scenario() {
  Scenario sc;
  sc.bounds = {0.0, 0.0, 5000.0, 5000.0};
  sc.cell_size = 30.0;
  sc.cam = CameraModel::standard();
  sc.sensor = SensorModel::default_table();
  sc.env_dist = EnvDistribution{};
  sc.budget = 15000.0;

  sc.planner.extend_distance = 1500.0;
  sc.planner.near_radius = 1500.0;
  sc.planner.prune_radius = 600.0;
  sc.planner.planning_time = 10.0;
  sc.planner.iterations_per_cycle = 0;
  sc.planner.budget = sc.budget;
  sc.planner.altitudes = {50.0};
  sc.planner.turn_radius = 100.0;
  sc.planner.speed = 25.0;

  sc.mcts.primitive_count = 7;
  sc.mcts.primitive_length = 250.0;
  sc.mcts.turn_radius = 100.0;
  sc.mcts.planning_time = 10.0;
  sc.mcts.speed = 25.0;

  sc.greedy.turn_radius = 100.0;
  sc.greedy.speed = 25.0;
  sc.random.turn_radius = 100.0;
  sc.coverage.altitude = 50.0;
  sc.coverage.turn_radius = 100.0;

  sc.sim.dt = 0.5;
  sc.sim.speed = 25.0;
  sc.sim.accept_radius = 25.0;
  sc.sim.turn_radius = 100.0;
  sc.sim.replan_period = 10.0;
  sc.sim.planning_latency = 10.0;

  sc.start = {500.0, 500.0, 50.0, deg_to_rad(45.0)};
  return sc;
}

Scenario desk_scenario() {
  Scenario sc = field_scenario();
  const double s = 0.2;  // linear scale

  sc.bounds = {0.0, 0.0, 1000.0, 1000.0};
  sc.cell_size = 15.0;
  sc.env_dist = EnvDistribution{}.scaled(s);
  sc.budget = 3000.0;
  // Detector reach and turn radius shrink with the arena, keeping the
  // footprint/arena and arc/leg ratios of the field setup; otherwise one
  // pass observes a fifth of the map and every leg is a minimum-radius
  // arc the controller can only track while banking.
  sc.sensor = SensorModel::scaled_default(s);
  sc.cam.max_range = sc.sensor.max_range();
  const double turn_radius = 100.0 * s;

  sc.planner.extend_distance = 150.0;
  sc.planner.near_radius = 150.0;
  sc.planner.prune_radius = 120.0;
  sc.planner.planning_time = 1.0;
  sc.planner.iterations_per_cycle = 30;  // deterministic stand-in for 1 s
  sc.planner.budget = sc.budget;
  sc.planner.turn_radius = turn_radius;

  sc.mcts.primitive_length = 50.0;
  sc.mcts.planning_time = 1.0;
  sc.mcts.iterations_per_cycle = 30;
  sc.mcts.turn_radius = turn_radius;
  sc.greedy.turn_radius = turn_radius;
  sc.random.turn_radius = turn_radius;
  sc.coverage.turn_radius = turn_radius;

  sc.sim.replan_period = 5.0;
  sc.sim.planning_latency = 1.0;
  sc.sim.turn_radius = turn_radius;
  sc.sim.heading_gain = 2.0 / s;  // same saturation error as the field setup
  sc.sim.accept_radius = 10.0;
  sc.sim.dt = 0.1;
  sc.sim.track_spacing = 50.0;

  sc.start = {100.0, 100.0, 50.0, deg_to_rad(45.0)};
  return sc;
}

}  // namespace ipp
