#include "ipp/plan_tree.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace ipp {

PlanTree::PlanTree(double near_radius, double eps_budget)
    : index_(near_radius), eps_budget_(eps_budget) {
  if (near_radius <= 0.0) throw std::invalid_argument("PlanTree: near_radius must be > 0");
}

const PlanNode& PlanTree::node(NodeId id) const {
  if (!contains(id)) throw std::out_of_range("PlanTree: unknown node");
  return nodes_[id];
}

NodeId PlanTree::allocate() {
  if (!free_.empty()) {
    const NodeId id = free_.back();
    free_.pop_back();
    nodes_[id] = PlanNode{};
    return id;
  }
  nodes_.emplace_back();
  return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId PlanTree::init_root(const Pose& pose, Footprint view, DeltaMap delta, double info,
                           double budget) {
  nodes_.clear();
  free_.clear();
  index_.clear();
  alive_count_ = 0;

  const NodeId id = allocate();
  PlanNode& n = nodes_[id];
  n.pose = pose;
  n.info = info;
  n.cost = 0.0;
  n.parent = kNoNode;
  n.delta = std::move(delta);
  n.edge_view = std::move(view);
  n.closed = n.cost >= budget - eps_budget_;
  n.alive = true;
  root_ = id;
  ++alive_count_;
  index_.insert(id, pose.x, pose.y, pose.z);
  return id;
}

std::optional<NodeId> PlanTree::attach(NodeId parent, const Pose& pose, EdgeGeometry edge,
                                       Footprint edge_view, DeltaMap delta, double info_gain,
                                       double budget) {
  if (!contains(parent)) throw std::out_of_range("PlanTree::attach: unknown parent");
  if (edge.length <= 0.0) throw std::invalid_argument("PlanTree::attach: edge must have length");
  const double cost = nodes_[parent].cost + edge.length;
  if (cost > budget + 1e-9) return std::nullopt;

  const NodeId id = allocate();
  PlanNode& n = nodes_[id];
  n.pose = pose;
  n.info = nodes_[parent].info + info_gain;
  n.cost = cost;
  n.parent = parent;
  n.delta = std::move(delta);
  n.edge_view = std::move(edge_view);
  n.edge = std::move(edge);
  n.closed = cost >= budget - eps_budget_;
  n.alive = true;
  nodes_[parent].children.push_back(id);
  ++alive_count_;
  index_.insert(id, pose.x, pose.y, pose.z);
  return id;
}

double PlanTree::belief_at(NodeId id, CellIndex cell, const BeliefMap& base) const {
  if (!contains(id)) throw std::out_of_range("PlanTree::belief_at: unknown node");
  for (NodeId cur = id; cur != kNoNode; cur = nodes_[cur].parent) {
    const auto it = nodes_[cur].delta.find(cell);
    if (it != nodes_[cur].delta.end()) return it->second;
  }
  return base.prob(cell);
}

bool PlanTree::prune_check(const TreeCandidate& candidate, double radius) const {
  if (radius <= 0.0) throw std::invalid_argument("PlanTree::prune_check: radius must be > 0");
  const std::vector<NodeId> neighbors = near_open(candidate.pose, radius);
  for (const NodeId id : neighbors) {
    const PlanNode& n = nodes_[id];
    const bool dominates = n.cost <= candidate.cost && n.info >= candidate.info &&
                           (n.cost < candidate.cost || n.info > candidate.info);
    if (dominates) return false;
  }
  return true;
}

NodeId PlanTree::best_node() const {
  NodeId best = kNoNode;
  for (NodeId id = 0; id < static_cast<NodeId>(nodes_.size()); ++id) {
    if (!nodes_[id].alive) continue;
    if (best == kNoNode) {
      best = id;
      continue;
    }
    const PlanNode& a = nodes_[id];
    const PlanNode& b = nodes_[best];
    if (a.info > b.info || (a.info == b.info && a.cost < b.cost)) best = id;
  }
  return best;
}

std::vector<NodeId> PlanTree::path_to(NodeId id) const {
  if (!contains(id)) throw std::out_of_range("PlanTree::path_to: unknown node");
  std::vector<NodeId> chain;
  for (NodeId cur = id; cur != kNoNode; cur = nodes_[cur].parent) chain.push_back(cur);
  std::reverse(chain.begin(), chain.end());
  return chain;
}

void PlanTree::release_node(NodeId id) {
  PlanNode& n = nodes_[id];
  index_.remove(id, n.pose.x, n.pose.y);
  n.alive = false;
  n.delta.clear();
  n.edge_view.cells.clear();
  n.children.clear();
  n.edge = EdgeGeometry{};
  free_.push_back(id);
  --alive_count_;
}

void PlanTree::release_subtree(NodeId id) {
  for (const NodeId child : nodes_[id].children) release_subtree(child);
  release_node(id);
}

void PlanTree::prune_before(NodeId id) {
  if (!contains(id)) throw std::out_of_range("PlanTree::prune_before: unknown node");
  if (id == root_) return;

  const std::vector<NodeId> chain = path_to(id);
  // Merge ancestor deltas, deeper entries overriding shallower ones; the
  // node's own entries stay on top.
  DeltaMap merged;
  for (const NodeId a : chain) {
    if (a == id) break;
    for (const auto& [cell, p] : nodes_[a].delta) merged[cell] = p;
  }
  for (const auto& [cell, p] : nodes_[id].delta) merged[cell] = p;
  nodes_[id].delta = std::move(merged);

  // Drop every former ancestor and its other subtrees.
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    const NodeId a = chain[i];
    const NodeId keep = chain[i + 1];
    for (const NodeId child : nodes_[a].children) {
      if (child != keep) release_subtree(child);
    }
    release_node(a);
  }
  nodes_[id].parent = kNoNode;
  nodes_[id].edge = EdgeGeometry{};
  root_ = id;
}

UpdateStats PlanTree::update_subtree(const BeliefMap& base, double budget,
                                     const RewardContext& ctx) {
  if (empty()) return {};
  UpdateStats stats;

  struct Frame {
    NodeId id;
  };
  std::vector<Frame> stack;
  stack.push_back({root_});
  while (!stack.empty()) {
    const NodeId id = stack.back().id;
    stack.pop_back();
    PlanNode& n = nodes_[id];

    if (id == root_) {
      n.cost = 0.0;
    } else {
      n.cost = nodes_[n.parent].cost + n.edge.length;
      if (n.cost > budget + 1e-9) {
        // Whole subtree is over budget since edge lengths are positive.
        const NodeId parent = n.parent;
        auto& siblings = nodes_[parent].children;
        siblings.erase(std::find(siblings.begin(), siblings.end(), id));
        const std::size_t before = alive_count_;
        release_subtree(id);
        stats.removed += static_cast<int>(before - alive_count_);
        continue;
      }
    }

    ++stats.visited;
    const double t = n.cost / ctx.speed;
    const NodeId parent = n.parent;
    std::vector<const DeltaMap*> chain;
    for (NodeId nid = parent; nid != kNoNode; nid = nodes_[nid].parent) {
      if (!nodes_[nid].delta.empty()) chain.push_back(&nodes_[nid].delta);
    }
    auto belief_of = [&](CellIndex cell) {
      for (const DeltaMap* d : chain) {
        const auto it = d->find(cell);
        if (it != d->end()) return it->second;
      }
      return base.prob(cell);
    };
    NodeScore score = score_footprint(n.edge_view, belief_of, ctx, t);
    n.delta = std::move(score.delta);
    n.info = (parent == kNoNode ? 0.0 : nodes_[parent].info) + score.info_gain;
    n.closed = n.cost >= budget - eps_budget_;

    // Push children in reverse so traversal visits them in stored order.
    for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) stack.push_back({*it});
  }
  return stats;
}

NodeId PlanTree::nearest_open(const Pose& p) const {
  const int id = index_.nearest(p.x, p.y, p.z, [this](int i) { return !nodes_[i].closed; });
  return id < 0 ? kNoNode : static_cast<NodeId>(id);
}

std::vector<NodeId> PlanTree::near_open(const Pose& p, double radius) const {
  const std::vector<int> found =
      index_.near(p.x, p.y, p.z, radius, [this](int i) { return !nodes_[i].closed; });
  return {found.begin(), found.end()};
}

std::vector<NodeId> PlanTree::alive_nodes() const {
  std::vector<NodeId> out;
  out.reserve(alive_count_);
  for (NodeId id = 0; id < static_cast<NodeId>(nodes_.size()); ++id) {
    if (nodes_[id].alive) out.push_back(id);
  }
  return out;
}

std::size_t PlanTree::total_delta_entries() const {
  std::size_t total = 0;
  for (const PlanNode& n : nodes_) {
    if (n.alive) total += n.delta.size();
  }
  return total;
}

void PlanTree::dump(std::ostream& os) const {
  os << "plan_tree nodes " << alive_count_ << "\n";
  os << "id parent x y z psi cost info closed\n";
  for (const NodeId id : alive_nodes()) {
    const PlanNode& n = nodes_[id];
    os << id << ' ' << n.parent << ' ' << n.pose.x << ' ' << n.pose.y << ' ' << n.pose.z << ' '
       << n.pose.psi << ' ' << n.cost << ' ' << n.info << ' ' << (n.closed ? 1 : 0) << "\n";
  }
  os << "edges\n";
  os << "parent child length segments\n";
  for (const NodeId id : alive_nodes()) {
    const PlanNode& n = nodes_[id];
    if (n.parent == kNoNode) continue;
    os << n.parent << ' ' << id << ' ' << n.edge.length << ' ' << n.edge.segments.size() << "\n";
  }
}

}  // namespace ipp
