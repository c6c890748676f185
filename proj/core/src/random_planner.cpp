#include <stdexcept>

#include "ipp/baselines.hpp"
#include "ipp/dubins.hpp"

namespace ipp {

RandomPlanner::RandomPlanner(const CameraModel& cam, RandomConfig config)
    : cam_(cam), config_(std::move(config)), rng_(config_.seed) {}

void RandomPlanner::reset() { rng_.seed(config_.seed); }

Plan RandomPlanner::plan(const PlanRequest& request) {
  if (request.budget <= 0.0) throw std::invalid_argument("random: budget must be > 0");
  std::uniform_real_distribution<double> ux(request.bounds.x_min, request.bounds.x_max);
  std::uniform_real_distribution<double> uy(request.bounds.y_min, request.bounds.y_max);

  Plan plan;
  Pose pose = request.start;
  double cost = 0.0;
  plan.waypoints.push_back({pose, 0.0, 0.0});

  while (cost < request.budget) {
    std::optional<SteerResult> steered;
    for (int attempt = 0; attempt < 100 && !steered; ++attempt) {
      const Vec2 target{ux(rng_), uy(rng_)};
      const Pose vp = greedy_viewpoint(pose, target, cam_, pose.z);
      if (!request.bounds.contains(vp)) continue;
      steered = steer_full(pose, vp, request.bounds, config_.turn_radius);
    }
    if (!steered) break;
    const double len = steered->edge.length;
    if (cost + len > request.budget) {
      EdgeGeometry cut = truncate_edge(steered->edge, request.budget - cost);
      if (cut.length > 0.0) {
        plan.edges.push_back(cut);
        plan.waypoints.push_back({cut.end_pose(), request.budget, 0.0});
      }
      break;
    }
    cost += len;
    plan.edges.push_back(steered->edge);
    plan.waypoints.push_back({steered->pose, cost, 0.0});
    pose = steered->pose;
  }
  return plan;
}

}  // namespace ipp
