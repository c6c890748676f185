#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "ipp/geometry.hpp"
#include "ipp/rewards.hpp"
#include "ipp/spatial_grid.hpp"

namespace ipp {

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

/// Search-tree node. `delta` holds only the cells this node's observation
/// changed; belief lookups fall back along the ancestor chain to the base
/// map. `edge_view` keeps the observed (cell, range) set so the node can
/// be re-scored without re-running geometry.
struct PlanNode {
  Pose pose;
  double info = 0.0;  // cumulative weighted bits from the root
  double cost = 0.0;  // cumulative path length, m
  NodeId parent = kNoNode;
  std::vector<NodeId> children;
  DeltaMap delta;
  Footprint edge_view;  // edge footprint; pose footprint for the root
  EdgeGeometry edge;    // geometry from parent (empty for the root)
  bool closed = false;
  bool alive = false;
};

struct TreeCandidate {
  Pose pose;
  double info = 0.0;
  double cost = 0.0;
};

struct UpdateStats {
  int visited = 0;
  int removed = 0;
};

class PlanTree {
 public:
  /// `near_radius` sizes the spatial-index buckets.
  explicit PlanTree(double near_radius, double eps_budget = 25.0);

  bool empty() const { return root_ == kNoNode; }
  std::size_t size() const { return alive_count_; }
  NodeId root() const { return root_; }
  const PlanNode& node(NodeId id) const;
  bool contains(NodeId id) const {
    return id >= 0 && id < static_cast<NodeId>(nodes_.size()) && nodes_[id].alive;
  }
  double eps_budget() const { return eps_budget_; }

  /// Installs the root. Resets any previous contents.
  NodeId init_root(const Pose& pose, Footprint view, DeltaMap delta, double info, double budget);

  /// Adds a child node; cost = parent cost + edge length. Rejected (and
  /// nullopt returned) when the cost would exceed the budget. The node is
  /// closed when the remaining budget drops below eps_budget.
  std::optional<NodeId> attach(NodeId parent, const Pose& pose, EdgeGeometry edge,
                               Footprint edge_view, DeltaMap delta, double info_gain,
                               double budget);

  /// Belief of a cell as seen from a node: nearest ancestor delta entry,
  /// else the base map value. Throws on unknown node.
  double belief_at(NodeId id, CellIndex cell, const BeliefMap& base) const;

  /// Dominance check against non-closed neighbors within `radius`
  /// (Euclidean over x, y, z): discard when some neighbor has
  /// cost <= candidate.cost and info >= candidate.info with at least one
  /// strict. Returns true when the candidate should be kept.
  bool prune_check(const TreeCandidate& candidate, double radius) const;

  /// Node with maximal info; ties broken by lower cost, then lower id.
  NodeId best_node() const;
  /// Root-to-node chain.
  std::vector<NodeId> path_to(NodeId id) const;

  /// Re-roots the tree at `id`: the node's delta becomes the merged delta
  /// of its former ancestor chain, all former ancestors and their other
  /// subtrees are dropped. Costs/info of survivors are untouched (see
  /// update_subtree).
  void prune_before(NodeId id);

  /// Pre-order re-scoring of the whole tree against the current base map:
  /// rebuilds each node's delta and info from its stored edge_view,
  /// re-chains costs from a zero-cost root, drops nodes beyond the
  /// budget, and re-derives closed flags. Visits each node exactly once.
  UpdateStats update_subtree(const BeliefMap& base, double budget, const RewardContext& ctx);

  /// Nearest open (non-closed) node to a pose, or kNoNode.
  NodeId nearest_open(const Pose& p) const;
  /// Open nodes within `radius` of a pose, ascending by id.
  std::vector<NodeId> near_open(const Pose& p, double radius) const;

  /// Alive node ids in ascending order.
  std::vector<NodeId> alive_nodes() const;
  std::size_t total_delta_entries() const;

  /// Node and edge tables in a structured text form.
  void dump(std::ostream& os) const;

 private:
  NodeId allocate();
  void release_subtree(NodeId id);
  void release_node(NodeId id);

  std::vector<PlanNode> nodes_;
  std::vector<NodeId> free_;
  NodeId root_ = kNoNode;
  std::size_t alive_count_ = 0;
  SpatialHashGrid index_;
  double eps_budget_;
};

}  // namespace ipp
