#include <algorithm>
#include <cmath>

#include "ipp/baselines.hpp"
#include "ipp/dubins.hpp"

namespace ipp {

namespace {

double central_ray_ground_offset(const CameraModel& cam, double altitude) {
  if (cam.pitch_down < 1e-3) {
    return std::sqrt(std::max(cam.max_range * cam.max_range - altitude * altitude, 0.0));
  }
  const double d = altitude / std::tan(cam.pitch_down);
  return std::min(d, std::sqrt(std::max(cam.max_range * cam.max_range - altitude * altitude, 0.0)));
}

double central_ray_slant(const CameraModel& cam, double altitude) {
  if (cam.pitch_down < 1e-3) return cam.max_range;
  return std::min(altitude / std::sin(cam.pitch_down), cam.max_range);
}

}  // namespace

Pose greedy_viewpoint(const Pose& from, Vec2 cell_center, const CameraModel& cam,
                      double altitude) {
  const double d_h = central_ray_ground_offset(cam, altitude);
  const Vec2 rel = cell_center - from.xy();
  const double dist = norm(rel);
  const double psi = dist > 1e-9 ? std::atan2(rel.y, rel.x) : from.psi;
  const Vec2 p = cell_center - d_h * unit_from_angle(psi);
  return {p.x, p.y, altitude, psi};
}

namespace {

double viewpoint_travel_cost(const Pose& state, const Pose& viewpoint, double turn_radius) {
  const auto path = dubins_to_point(state.xy(), state.psi, viewpoint.xy(), turn_radius);
  return path ? std::max(path->length, 1.0) : 1.0;
}

}  // namespace

namespace {

struct GreedyCand {
  double upper_bound;  // reward / euclidean, bounds the true ratio above
  double reward;
  CellIndex idx;
};

// Candidates ordered by the Euclidean upper bound of reward / path cost.
std::vector<GreedyCand> ranked_candidates(const Pose& state, const BeliefMap& map,
                                          const CameraModel& cam, const SensorModel& model,
                                          double slant) {
  std::vector<GreedyCand> cands;
  for (CellIndex idx = 0; idx < map.size(); ++idx) {
    const double reward =
        map.priority(idx) * optimistic_cell_reward(map.prob(idx), slant, model).reward;
    if (reward <= 1e-12) continue;
    const Pose vp = greedy_viewpoint(state, map.cell_center(idx), cam, state.z);
    const double euclid = std::max(horizontal_distance(state, vp), 1.0);
    cands.push_back({reward / euclid, reward, idx});
  }
  std::sort(cands.begin(), cands.end(), [](const GreedyCand& a, const GreedyCand& b) {
    if (a.upper_bound != b.upper_bound) return a.upper_bound > b.upper_bound;
    return a.idx < b.idx;
  });
  return cands;
}

}  // namespace

std::optional<Pose> greedy_plan_step(const Pose& state, const BeliefMap& map,
                                     const CameraModel& cam, const SensorModel& model,
                                     double turn_radius) {
  const double slant = central_ray_slant(cam, state.z);
  const std::vector<GreedyCand> cands = ranked_candidates(state, map, cam, model, slant);
  CellIndex best = kInvalidCell;
  double best_ratio = 0.0;
  for (const GreedyCand& c : cands) {
    if (c.upper_bound <= best_ratio) break;  // no later candidate can win
    const Pose vp = greedy_viewpoint(state, map.cell_center(c.idx), cam, state.z);
    const double ratio = c.reward / viewpoint_travel_cost(state, vp, turn_radius);
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best = c.idx;
    }
  }
  if (best == kInvalidCell) return std::nullopt;
  return greedy_viewpoint(state, map.cell_center(best), cam, state.z);
}

GreedyPlanner::GreedyPlanner(const CameraModel& cam, const SensorModel& sensor,
                             GreedyConfig config)
    : cam_(cam), sensor_(sensor), config_(std::move(config)) {}

Plan GreedyPlanner::plan(const PlanRequest& request) {
  BeliefMap working = request.map;
  const RewardContext ctx{&working, &sensor_, config_.decay, config_.speed};
  const double slant = central_ray_slant(cam_, request.start.z);

  Plan plan;
  Pose pose = request.start;
  double cost = 0.0;
  double info = 0.0;
  plan.waypoints.push_back({pose, 0.0, 0.0});

  const int max_steps = 10000;
  for (int step = 0; step < max_steps; ++step) {
    const std::vector<GreedyCand> cands =
        ranked_candidates(pose, working, cam_, sensor_, slant);
    if (cands.empty()) break;

    // Best feasible exact ratio, pruning on the Euclidean upper bound.
    std::optional<SteerResult> steered;
    double best_ratio = 0.0;
    std::size_t tried = 0;
    for (const GreedyCand& c : cands) {
      if (c.upper_bound <= best_ratio || tried >= 256) break;
      const Pose vp = greedy_viewpoint(pose, working.cell_center(c.idx), cam_, pose.z);
      if (!request.bounds.contains(vp)) continue;
      ++tried;
      const double ratio = c.reward / viewpoint_travel_cost(pose, vp, config_.turn_radius);
      if (ratio <= best_ratio) continue;
      const auto s = steer_full(pose, vp, request.bounds, config_.turn_radius);
      if (!s) continue;
      best_ratio = ratio;
      steered = s;
    }
    if (!steered) break;

    const double len = steered->edge.length;
    if (cost + len >= request.budget) {
      EdgeGeometry cut = truncate_edge(steered->edge, request.budget - cost);
      if (cut.length > 0.0) {
        plan.edges.push_back(cut);
        plan.waypoints.push_back({cut.end_pose(), request.budget, info});
      }
      break;
    }
    cost += len;
    const Footprint view = edge_footprint(steered->edge, cam_, working);
    const NodeScore score = score_footprint(
        view, [&](CellIndex c) { return working.prob(c); }, ctx, cost / config_.speed);
    for (const auto& [cell, p] : score.delta) working.update_prob(cell, p);
    info += score.info_gain;
    plan.edges.push_back(steered->edge);
    plan.waypoints.push_back({steered->pose, cost, info});
    pose = steered->pose;
  }
  plan.total_info = info;
  return plan;
}

}  // namespace ipp
