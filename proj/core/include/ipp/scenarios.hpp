#pragma once

#include "ipp/baselines.hpp"
#include "ipp/env_gen.hpp"
#include "ipp/planner.hpp"
#include "ipp/simulator.hpp"

namespace ipp {

/// Bundled defaults for one evaluation scale. The desk scale shrinks the
/// arena, budget and planner radii to a fifth of the field setup while
/// keeping the vehicle, camera and sensor unchanged, so campaign suites
/// finish in minutes instead of hours.
struct Scenario {
  Bounds bounds;
  double cell_size = 30.0;
  CameraModel cam = CameraModel::standard();
  SensorModel sensor = SensorModel::default_table();
  EnvDistribution env_dist;
  PlannerConfig planner;
  MctsConfig mcts;
  GreedyConfig greedy;
  RandomConfig random;
  CoverageConfig coverage;
  SimConfig sim;
  Pose start;
  double budget = 15000.0;
};

/// Field-scale setup: 5 km arena, 30 m cells, 15 km budget, 10 s planning.
Scenario field_scenario();

/// Desk-scale setup: 1 km arena, 15 m cells, 3 km budget,
/// iteration-budgeted planning (deterministic).
Scenario desk_scenario();

}  // namespace ipp
