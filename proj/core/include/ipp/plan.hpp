#pragma once

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "ipp/belief_map.hpp"
#include "ipp/geometry.hpp"

namespace ipp {

struct PlanWaypoint {
  Pose pose;
  double cost = 0.0;  // cumulative path length at this waypoint, m
  double info = 0.0;  // cumulative predicted information, weighted bits
  bool node = true;   // planner decision point (false: tracking point)
};

/// Executable plan: waypoints plus the edge geometry connecting them
/// (edges[i] runs from waypoints[i] to waypoints[i+1]).
struct Plan {
  std::vector<PlanWaypoint> waypoints;
  std::vector<EdgeGeometry> edges;
  double total_info = 0.0;

  bool empty() const { return waypoints.empty(); }
  double total_cost() const { return waypoints.empty() ? 0.0 : waypoints.back().cost; }

  /// Pose at cumulative path length s, interpolated along edge geometry.
  Pose pose_at_cost(double s) const;
};

/// Inserts tracking waypoints along each edge so legs are at most
/// `spacing` long; original waypoints keep their node flag, inserted
/// ones are plain tracking points.
Plan densify_plan(const Plan& plan, double spacing);

struct PlanRequest {
  Pose start;
  double budget = 0.0;
  BeliefMap map;  // belief snapshot
  Bounds bounds;
};

/// Per-planning-cycle bookkeeping, reported through the mission harness.
struct CycleStats {
  int iterations = 0;
  std::size_t tree_size = 0;
  bool recycled = false;
  double recycle_seconds = 0.0;
  double total_seconds = 0.0;
  std::int64_t score_calls = 0;
  double score_seconds = 0.0;  // time spent computing node information
  int nodes_added = 0;
};

/// Uniform planner surface so the harness treats every method alike.
class PlannerBase {
 public:
  virtual ~PlannerBase() = default;
  virtual Plan plan(const PlanRequest& request) = 0;
  /// Drops any state carried across planning cycles.
  virtual void reset() {}
  virtual std::string_view name() const = 0;
  /// Hands over (and clears) accumulated per-cycle stats, when tracked.
  virtual std::vector<CycleStats> drain_cycle_stats() { return {}; }
};

void save_plan(std::ostream& os, const Plan& plan);
Plan load_plan(std::istream& is);

void save_plan_request(std::ostream& os, const PlanRequest& req);
PlanRequest load_plan_request(std::istream& is);

}  // namespace ipp
