#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ipp/baselines.hpp"
#include "ipp/dubins.hpp"

namespace ipp {

std::vector<MotionPrimitive> make_primitive_set(double turn_radius, int count,
                                                double arc_length) {
  if (count < 1) throw std::invalid_argument("make_primitive_set: count must be >= 1");
  if (turn_radius <= 0.0 || arc_length <= 0.0) {
    throw std::invalid_argument("make_primitive_set: lengths must be > 0");
  }
  std::vector<MotionPrimitive> out;
  out.reserve(static_cast<std::size_t>(count));
  const double k_max = 1.0 / turn_radius;
  for (int i = 0; i < count; ++i) {
    const double f = count == 1 ? 0.0 : -1.0 + 2.0 * i / (count - 1);
    out.push_back({f * k_max, arc_length});
  }
  return out;
}

double ucb_score(double node_info, int n_node, int n_tree, double exploration_weight,
                 double alpha) {
  if (n_node < 1 || n_tree < 1) throw std::invalid_argument("ucb_score: counts must be >= 1");
  if (alpha <= 0.0) throw std::invalid_argument("ucb_score: alpha must be > 0");
  return node_info / alpha +
         exploration_weight * std::sqrt(std::log(static_cast<double>(n_tree)) / n_node);
}

namespace {

using Clock = std::chrono::steady_clock;

struct MNode {
  Pose pose;
  double cost = 0.0;
  double info = 0.0;  // exact cumulative optimistic information
  DeltaMap delta;
  EdgeGeometry edge;
  int parent = -1;
  std::vector<int> children;
  int visits = 0;
  double value_sum = 0.0;
  bool expanded = false;
};

class Search {
 public:
  Search(const CameraModel& cam, const SensorModel& sensor, const MctsConfig& cfg,
         const PlanRequest& req, std::mt19937_64& rng)
      : cam_(cam),
        sensor_(sensor),
        cfg_(cfg),
        req_(req),
        rng_(rng),
        ctx_{&req.map, &sensor, cfg.decay, cfg.speed},
        primitives_(make_primitive_set(cfg.turn_radius, cfg.primitive_count,
                                       cfg.primitive_length)),
        budget_(cfg.horizon > 0.0 ? std::min(req.budget, cfg.horizon) : req.budget),
        alpha_(req.budget / cfg.speed) {}

  Plan run() {
    MNode root;
    root.pose = req_.start;
    Footprint view = project_footprint(req_.start, cam_, req_.map);
    NodeScore score =
        score_footprint(view, [&](CellIndex c) { return req_.map.prob(c); }, ctx_, 0.0);
    root.info = score.info_gain;
    root.delta = std::move(score.delta);
    nodes_.push_back(std::move(root));

    const auto t0 = Clock::now();
    int iter = 0;
    while (true) {
      if (cfg_.iterations_per_cycle > 0) {
        if (iter >= cfg_.iterations_per_cycle) break;
      } else if (std::chrono::duration<double>(Clock::now() - t0).count() >=
                 cfg_.planning_time) {
        break;
      }
      ++iter;
      iterate();
    }
    return extract();
  }

  std::vector<int> root_visits() const {
    std::vector<int> out;
    for (const int c : nodes_[0].children) out.push_back(nodes_[c].visits);
    return out;
  }

 private:
  double chain_belief(int id, CellIndex cell) const {
    for (int cur = id; cur >= 0; cur = nodes_[cur].parent) {
      const auto it = nodes_[cur].delta.find(cell);
      if (it != nodes_[cur].delta.end()) return it->second;
    }
    return req_.map.prob(cell);
  }

  void expand(int id) {
    // nodes_ may reallocate while children are appended; hold values, not
    // references.
    const Pose pose = nodes_[id].pose;
    const double base_cost = nodes_[id].cost;
    const double base_info = nodes_[id].info;
    nodes_[id].expanded = true;
    for (const MotionPrimitive& prim : primitives_) {
      const double cost = base_cost + prim.arc_length;
      if (cost > budget_ + 1e-9) continue;
      EdgeGeometry edge = make_arc_edge(pose, prim.curvature, prim.arc_length, pose.z);
      if (!edge_inside_bounds(edge, req_.bounds)) continue;
      Footprint view = edge_footprint(edge, cam_, req_.map);
      NodeScore score = score_footprint(
          view, [&](CellIndex c) { return chain_belief(id, c); }, ctx_, cost / cfg_.speed);
      MNode child;
      child.pose = edge.end_pose();
      child.pose.z = pose.z;
      child.cost = cost;
      child.info = base_info + score.info_gain;
      child.delta = std::move(score.delta);
      child.edge = std::move(edge);
      child.parent = id;
      const int cid = static_cast<int>(nodes_.size());
      nodes_.push_back(std::move(child));
      nodes_[id].children.push_back(cid);
    }
  }

  int select_child(int id) {
    const MNode& n = nodes_[id];
    for (const int c : n.children) {
      if (nodes_[c].visits == 0) return c;  // unvisited-first
    }
    const int n_tree = std::max(1, nodes_[0].visits);
    int best = n.children.front();
    double best_score = -std::numeric_limits<double>::infinity();
    for (const int c : n.children) {
      const MNode& ch = nodes_[c];
      const double s = ucb_score(ch.value_sum / ch.visits, ch.visits, n_tree,
                                 cfg_.exploration_weight, alpha_);
      if (s > best_score) {
        best_score = s;
        best = c;
      }
    }
    return best;
  }

  double rollout(int id) {
    DeltaMap overlay;
    Pose pose = nodes_[id].pose;
    double cost = nodes_[id].cost;
    double info = 0.0;
    auto belief = [&](CellIndex c) {
      const auto it = overlay.find(c);
      return it != overlay.end() ? it->second : chain_belief(id, c);
    };
    std::vector<std::size_t> order(primitives_.size());
    while (true) {
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::shuffle(order.begin(), order.end(), rng_);
      bool stepped = false;
      for (const std::size_t pi : order) {
        const MotionPrimitive& prim = primitives_[pi];
        if (cost + prim.arc_length > budget_ + 1e-9) continue;
        EdgeGeometry edge = make_arc_edge(pose, prim.curvature, prim.arc_length, pose.z);
        if (!edge_inside_bounds(edge, req_.bounds)) continue;
        cost += prim.arc_length;
        const Footprint view = edge_footprint(edge, cam_, req_.map);
        const NodeScore score = score_footprint(view, belief, ctx_, cost / cfg_.speed);
        info += score.info_gain;
        for (const auto& [cell, p] : score.delta) overlay[cell] = p;
        Pose next = edge.end_pose();
        next.z = pose.z;
        pose = next;
        stepped = true;
        break;
      }
      if (!stepped) break;
    }
    return info;
  }

  void iterate() {
    // Selection
    int cur = 0;
    std::vector<int> path{0};
    while (nodes_[cur].expanded && !nodes_[cur].children.empty()) {
      cur = select_child(cur);
      path.push_back(cur);
    }
    // Expansion: only nodes that have been visited before grow children.
    if (!nodes_[cur].expanded && (nodes_[cur].visits > 0 || cur == 0)) {
      expand(cur);
      if (!nodes_[cur].children.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, nodes_[cur].children.size() - 1);
        cur = nodes_[cur].children[pick(rng_)];
        path.push_back(cur);
      }
    }
    const double value = nodes_[cur].info + rollout(cur);
    for (const int id : path) {
      ++nodes_[id].visits;
      nodes_[id].value_sum += value;
    }
  }

  Plan extract() const {
    int best = 0;
    for (int id = 1; id < static_cast<int>(nodes_.size()); ++id) {
      const MNode& a = nodes_[id];
      const MNode& b = nodes_[best];
      if (a.info > b.info || (a.info == b.info && a.cost < b.cost)) best = id;
    }
    std::vector<int> chain;
    for (int cur = best; cur >= 0; cur = nodes_[cur].parent) chain.push_back(cur);
    std::reverse(chain.begin(), chain.end());
    Plan plan;
    for (const int id : chain) {
      const MNode& n = nodes_[id];
      plan.waypoints.push_back({n.pose, n.cost, n.info});
      if (n.parent >= 0) plan.edges.push_back(n.edge);
    }
    plan.total_info = nodes_[best].info;
    return plan;
  }

  const CameraModel& cam_;
  const SensorModel& sensor_;
  const MctsConfig& cfg_;
  const PlanRequest& req_;
  std::mt19937_64& rng_;
  RewardContext ctx_;
  std::vector<MotionPrimitive> primitives_;
  double budget_;
  double alpha_;
  std::vector<MNode> nodes_;

  friend class ::ipp::MctsPlanner;
};

}  // namespace

MctsPlanner::MctsPlanner(const CameraModel& cam, const SensorModel& sensor, MctsConfig config)
    : cam_(cam), sensor_(sensor), config_(std::move(config)), rng_(config_.seed) {
  if (config_.speed <= 0.0) throw std::invalid_argument("MctsConfig: speed must be > 0");
}

void MctsPlanner::reset() { rng_.seed(config_.seed); }

Plan MctsPlanner::plan(const PlanRequest& request) {
  if (!request.bounds.contains(request.start)) {
    throw std::invalid_argument("mcts: start pose outside search bounds");
  }
  Search search(cam_, sensor_, config_, request, rng_);
  Plan plan = search.run();
  last_root_visits_ = search.root_visits();
  return plan;
}

}  // namespace ipp
