#include "ipp/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <stdexcept>

namespace ipp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double derive_nominal_range(const CameraModel& cam, double altitude, double fallback) {
  if (fallback > 0.0) return fallback;
  if (cam.pitch_down < 1e-3) return cam.max_range;
  return std::min(altitude / std::sin(cam.pitch_down), cam.max_range);
}

}  // namespace

InformedSampler::InformedSampler(const BeliefMap& map, const CameraModel& cam,
                                 const SensorModel& sensor, std::vector<double> altitudes,
                                 double nominal_range)
    : map_(&map), cam_(&cam), altitudes_(std::move(altitudes)) {
  if (altitudes_.empty()) throw std::invalid_argument("InformedSampler: need an altitude set");
  const double range = derive_nominal_range(cam, altitudes_.front(), nominal_range);
  cells_.reserve(static_cast<std::size_t>(map.size()));
  cum_weights_.reserve(static_cast<std::size_t>(map.size()));
  double cum = 0.0;
  for (CellIndex idx = 0; idx < map.size(); ++idx) {
    const double w =
        map.priority(idx) * optimistic_cell_reward(map.prob(idx), range, sensor).reward;
    if (w > 0.0) {
      cum += w;
      cells_.push_back(idx);
      cum_weights_.push_back(cum);
    }
  }
  total_weight_ = cum;
}

CellIndex InformedSampler::sample_cell(std::mt19937_64& rng) const {
  if (!has_reward()) return kInvalidCell;
  std::uniform_real_distribution<double> u(0.0, total_weight_);
  const double r = u(rng);
  const auto it = std::lower_bound(cum_weights_.begin(), cum_weights_.end(), r);
  const std::size_t i =
      std::min(static_cast<std::size_t>(it - cum_weights_.begin()), cells_.size() - 1);
  return cells_[i];
}

Pose InformedSampler::uniform_pose(const Bounds& bounds, std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> ux(bounds.x_min, bounds.x_max);
  std::uniform_real_distribution<double> uy(bounds.y_min, bounds.y_max);
  std::uniform_real_distribution<double> upsi(-kPi, kPi);
  std::uniform_int_distribution<std::size_t> uz(0, altitudes_.size() - 1);
  return {ux(rng), uy(rng), altitudes_[uz(rng)], wrap_angle(upsi(rng))};
}

Pose InformedSampler::sample(const Bounds& bounds, std::mt19937_64& rng) const {
  if (!has_reward()) return uniform_pose(bounds, rng);

  const CellIndex cell = sample_cell(rng);
  const Vec2 target = map_->cell_center(cell);
  std::uniform_real_distribution<double> upsi(-kPi, kPi);
  std::uniform_int_distribution<std::size_t> uz(0, altitudes_.size() - 1);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  for (int attempt = 0; attempt < 16; ++attempt) {
    const double psi = wrap_angle(upsi(rng));
    const double z = altitudes_[uz(rng)];
    const Pose canonical{0.0, 0.0, z, psi};
    const std::array<Vec2, 4> quad = frustum_ground_quad(canonical, *cam_);
    double x_lo = quad[0].x, x_hi = quad[0].x, y_lo = quad[0].y, y_hi = quad[0].y;
    for (int i = 1; i < 4; ++i) {
      x_lo = std::min(x_lo, quad[i].x);
      x_hi = std::max(x_hi, quad[i].x);
      y_lo = std::min(y_lo, quad[i].y);
      y_hi = std::max(y_hi, quad[i].y);
    }
    // Uniform ground offset within the footprint of the canonical pose.
    Vec2 offset;
    bool found = false;
    for (int trial = 0; trial < 64; ++trial) {
      const Vec2 o{x_lo + u01(rng) * (x_hi - x_lo), y_lo + u01(rng) * (y_hi - y_lo)};
      if (sees_ground_point(canonical, *cam_, o)) {
        offset = o;
        found = true;
        break;
      }
    }
    if (!found) continue;
    const Pose pose{target.x - offset.x, target.y - offset.y, z, psi};
    if (bounds.contains(pose)) return pose;
  }
  return uniform_pose(bounds, rng);
}

ReplayResult replay_node_info(const PlanTree& tree, NodeId id, const RewardContext& ctx) {
  const std::vector<NodeId> chain = tree.path_to(id);
  DeltaMap overlay;
  ReplayResult out;
  double cost = 0.0;
  double info = 0.0;
  for (const NodeId nid : chain) {
    const PlanNode& n = tree.node(nid);
    cost += n.edge.length;
    const double t = cost / ctx.speed;
    const double decay = ctx.decay.value(t);
    for (const CellView& cv : n.edge_view.cells) {
      const auto it = overlay.find(cv.cell);
      const double p = it != overlay.end() ? it->second : ctx.base->prob(cv.cell);
      const CellReward r = optimistic_cell_reward(p, cv.range, *ctx.sensor);
      info += ctx.base->priority(cv.cell) * decay * r.reward;
      overlay[cv.cell] = r.p_after;
    }
  }
  out.info = info;
  out.cost = cost;
  return out;
}

InformedTreePlanner::InformedTreePlanner(const CameraModel& cam, const SensorModel& sensor,
                                         PlannerConfig config)
    : cam_(cam),
      sensor_(sensor),
      config_(std::move(config)),
      tree_(config_.near_radius, config_.eps_budget),
      rng_(config_.seed) {
  if (config_.extend_distance <= 0.0 || config_.near_radius <= 0.0 ||
      config_.prune_radius <= 0.0 || config_.turn_radius <= 0.0) {
    throw std::invalid_argument("PlannerConfig: distances must be > 0");
  }
  if (config_.altitudes.empty()) throw std::invalid_argument("PlannerConfig: empty altitude set");
  if (config_.speed <= 0.0) throw std::invalid_argument("PlannerConfig: speed must be > 0");
}

void InformedTreePlanner::reset() {
  tree_ = PlanTree(config_.near_radius, config_.eps_budget);
  rng_.seed(config_.seed);
  last_plan_nodes_.clear();
  cycle_stats_.clear();
  last_update_stats_ = {};
}

void InformedTreePlanner::init_fresh_root(const Pose& start, double budget,
                                          const BeliefMap& base) {
  const RewardContext ctx{&base, &sensor_, config_.decay, config_.speed};
  Footprint view = project_footprint(start, cam_, base);
  NodeScore score =
      score_footprint(view, [&](CellIndex c) { return base.prob(c); }, ctx, 0.0);
  if (!config_.use_embeddings) score.delta.clear();
  tree_.init_root(start, std::move(view), std::move(score.delta), score.info_gain, budget);
  last_plan_nodes_.clear();
}

bool InformedTreePlanner::update_graph(const Pose& new_start, double budget,
                                       const BeliefMap& base) {
  NodeId match = kNoNode;
  for (const NodeId id : last_plan_nodes_) {
    if (!tree_.contains(id)) continue;
    const Pose& p = tree_.node(id).pose;
    if (spatial_distance(p, new_start) <= config_.match_tol_pos &&
        std::abs(wrap_angle(p.psi - new_start.psi)) <= config_.match_tol_heading) {
      match = id;
      break;
    }
  }
  if (match == kNoNode || !config_.use_embeddings) {
#ifdef IPP_DEBUG_MATCH
    double best_d = 1e18, best_h = 0;
    for (const NodeId id : last_plan_nodes_) {
      if (!tree_.contains(id)) continue;
      const Pose& p = tree_.node(id).pose;
      const double d = spatial_distance(p, new_start);
      if (d < best_d) { best_d = d; best_h = std::abs(wrap_angle(p.psi - new_start.psi)); }
    }
    std::fprintf(stderr, "[match-miss] nearest plan node: d=%.3f dh=%.4f (plan nodes %zu)\n",
                 best_d, best_h, last_plan_nodes_.size());
#endif
    init_fresh_root(new_start, budget, base);
    last_update_stats_ = {};
    return false;
  }
  tree_.prune_before(match);
  const RewardContext ctx{&base, &sensor_, config_.decay, config_.speed};
  last_update_stats_ = tree_.update_subtree(base, budget, ctx);
  return true;
}

std::optional<NodeId> InformedTreePlanner::try_attach(NodeId parent, const SteerResult& steered,
                                                      const RewardContext& ctx, double budget,
                                                      CycleStats& stats) {
  const PlanNode& parent_node = tree_.node(parent);
  const double cost = parent_node.cost + steered.edge.length;
  if (cost > budget + 1e-9) return std::nullopt;
  if (steered.edge.length < 1e-6) return std::nullopt;

  Footprint view = edge_footprint(steered.edge, cam_, *ctx.base);
  const double t = cost / ctx.speed;

  const auto t0 = Clock::now();
  NodeScore score;
  if (config_.use_embeddings) {
    // Flatten the ancestor deltas once; nearest ancestor first.
    std::vector<const DeltaMap*> chain;
    for (NodeId nid = parent; nid != kNoNode; nid = tree_.node(nid).parent) {
      const DeltaMap& d = tree_.node(nid).delta;
      if (!d.empty()) chain.push_back(&d);
    }
    score = score_footprint(
        view,
        [&](CellIndex c) {
          for (const DeltaMap* d : chain) {
            const auto it = d->find(c);
            if (it != d->end()) return it->second;
          }
          return ctx.base->prob(c);
        },
        ctx, t);
  } else {
    // Full replay of the ancestor observations on an overlay map.
    DeltaMap overlay;
    for (const NodeId nid : tree_.path_to(parent)) {
      const PlanNode& n = tree_.node(nid);
      for (const CellView& cv : n.edge_view.cells) {
        const auto it = overlay.find(cv.cell);
        const double p = it != overlay.end() ? it->second : ctx.base->prob(cv.cell);
        overlay[cv.cell] = optimistic_cell_reward(p, cv.range, *ctx.sensor).p_after;
      }
    }
    score = score_footprint(
        view,
        [&](CellIndex c) {
          const auto it = overlay.find(c);
          return it != overlay.end() ? it->second : ctx.base->prob(c);
        },
        ctx, t);
    score.delta.clear();
  }
  stats.score_seconds += seconds_since(t0);
  ++stats.score_calls;

  const double info_new = parent_node.info + score.info_gain;
  if (!tree_.prune_check({steered.pose, info_new, cost}, config_.prune_radius)) {
    return std::nullopt;
  }
  auto id = tree_.attach(parent, steered.pose, steered.edge, std::move(view),
                         std::move(score.delta), score.info_gain, budget);
  if (id) ++stats.nodes_added;
  return id;
}

Plan InformedTreePlanner::make_plan() {
  Plan plan;
  const NodeId best = tree_.best_node();
  if (best == kNoNode) return plan;
  last_plan_nodes_ = tree_.path_to(best);
  for (const NodeId id : last_plan_nodes_) {
    const PlanNode& n = tree_.node(id);
    plan.waypoints.push_back({n.pose, n.cost, n.info});
    if (n.parent != kNoNode) plan.edges.push_back(n.edge);
  }
  plan.total_info = tree_.node(best).info;
  return plan;
}

Plan InformedTreePlanner::plan(const PlanRequest& request) {
  if (!request.bounds.contains(request.start)) {
    throw std::invalid_argument("plan: start pose outside search bounds");
  }
  double budget = request.budget;
  if (config_.horizon > 0.0) budget = std::min(budget, config_.horizon);

  CycleStats stats;
  const auto cycle_start = Clock::now();

  if (tree_.empty()) {
    init_fresh_root(request.start, budget, request.map);
  } else if (!config_.recycle) {
    init_fresh_root(request.start, budget, request.map);
  } else {
    stats.recycled = update_graph(request.start, budget, request.map);
    stats.recycle_seconds = seconds_since(cycle_start);
  }

  const RewardContext ctx{&request.map, &sensor_, config_.decay, config_.speed};
  const InformedSampler sampler(request.map, cam_, sensor_, config_.altitudes,
                                config_.nominal_view_range);

  const bool iteration_mode = config_.iterations_per_cycle > 0;
  int iter = 0;
  while (true) {
    if (iteration_mode) {
      if (iter >= config_.iterations_per_cycle) break;
    } else if (seconds_since(cycle_start) >= config_.planning_time) {
      break;
    }
    ++iter;

    const Pose sample = sampler.sample(request.bounds, rng_);
    const NodeId nearest = tree_.nearest_open(sample);
    if (nearest == kNoNode) break;  // fully closed tree

    const auto steered =
        steer(tree_.node(nearest).pose, sample, config_.extend_distance, request.bounds,
              config_.turn_radius);
    if (!steered) continue;
    const auto attached = try_attach(nearest, *steered, ctx, budget, stats);

    // Neighbors may also extend toward the new pose, whether or not it
    // was kept.
    std::vector<NodeId> neighbors = tree_.near_open(steered->pose, config_.near_radius);
    if (config_.max_near_expansions > 0 &&
        neighbors.size() > static_cast<std::size_t>(config_.max_near_expansions)) {
      std::sort(neighbors.begin(), neighbors.end(), [&](NodeId a, NodeId b) {
        const double da = spatial_distance(tree_.node(a).pose, steered->pose);
        const double db = spatial_distance(tree_.node(b).pose, steered->pose);
        if (da != db) return da < db;
        return a < b;
      });
      neighbors.resize(static_cast<std::size_t>(config_.max_near_expansions));
    }
    for (const NodeId n_near : neighbors) {
      if (n_near == nearest || (attached && n_near == *attached)) continue;
      if (spatial_distance(tree_.node(n_near).pose, steered->pose) < 1e-6) continue;
      const auto s2 = steer(tree_.node(n_near).pose, steered->pose, config_.extend_distance,
                            request.bounds, config_.turn_radius);
      if (!s2) continue;
      try_attach(n_near, *s2, ctx, budget, stats);
    }
  }

  stats.iterations = iter;
  stats.tree_size = tree_.size();
  stats.total_seconds = seconds_since(cycle_start);
  cycle_stats_.push_back(stats);
  return make_plan();
}

}  // namespace ipp
