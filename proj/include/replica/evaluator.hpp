#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "replica/aggregate.hpp"
#include "replica/model.hpp"

namespace replica {

/// General failure model: events and candidates joined by directed edges.
/// Used for evaluation only; cycles among events are allowed.
class FailureDag {
 public:
  NodeId add_vertex(std::string name, bool candidate);
  void add_edge(NodeId from, NodeId to);

  /// Same vertices (same ids) and edges as the tree; leaves become candidates.
  static FailureDag from_tree(const FailureTree& tree);

  std::size_t size() const { return names_.size(); }
  bool is_candidate(NodeId v) const { return candidate_.at(v.value); }
  std::span<const NodeId> successors(NodeId v) const { return out_.at(v.value); }
  const std::string& name(NodeId v) const { return names_.at(v.value); }

 private:
  std::vector<std::string> names_;
  std::vector<bool> candidate_;
  std::vector<std::vector<NodeId>> out_;
};

/// Replicas reachable from `event`; a placed leaf reaches itself.
std::uint32_t failure_number(const FailureTree& tree, NodeId event, const Placement& placement);
std::uint32_t failure_number(const FailureDag& dag, NodeId event, std::span<const NodeId> placement);

/// Replicas in every subtree, indexed by node. One post-order pass.
std::vector<std::uint32_t> subtree_replicas(const FailureTree& tree, const Placement& placement);

FailureAggregate failure_aggregate(const FailureTree& tree, const Placement& placement);
/// Reachability-based evaluation, O(V (V + A)).
FailureAggregate failure_aggregate(const FailureDag& dag, std::span<const NodeId> placement);

/// Histogram of failure numbers over the nodes on the path from `from` down
/// to `to` (both inclusive), with `capacity + 1` entries.
/// Throws std::invalid_argument if `to` is not a descendant of `from`.
FailureAggregate path_aggregate(const FailureTree& tree, NodeId from, NodeId to,
                                const Placement& placement, Replicas capacity);
/// Same, reading failure numbers from precomputed subtree replica counts.
FailureAggregate path_aggregate(const FailureTree& tree, NodeId from, NodeId to,
                                std::span<const std::uint32_t> replicas, Replicas capacity);

struct BalanceViolation {
  NodeId node;
  NodeId unfilled_child;  // holds r_i replicas with spare leaves
  NodeId heavier_child;   // holds r_j > r_i + 1 replicas
};

struct BalanceReport {
  bool balanced = true;
  std::optional<BalanceViolation> violation;
};

/// Every unfilled child must hold at least r_j - 1 replicas for each sibling j.
BalanceReport is_balanced(const FailureTree& tree, const Placement& placement);

struct MonotonicityViolation {
  NodeId parent;
  NodeId child;
};

/// Checks f(child) <= f(parent) along every edge.
std::optional<MonotonicityViolation> monotonicity_check(const FailureTree& tree,
                                                        const Placement& placement);

}  // namespace replica
