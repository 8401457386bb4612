#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "replica/aggregate.hpp"
#include "replica/model.hpp"

namespace replica {

/// Positions (into the capacity list handed to get_filled) of children that
/// end up holding all their leaves, and of the rest.
struct FillClassification {
  std::vector<std::uint32_t> filled;    // ascending positions
  std::vector<std::uint32_t> unfilled;  // ascending positions
  Replicas filled_total = 0;            // sum of leaf counts over `filled`
  std::uint32_t unfilled_count() const { return static_cast<std::uint32_t>(unfilled.size()); }
};

/// Splits children into filled and unfilled for `replicas` balanced
/// replicas, by repeated median selection over the undecided children.
/// When both sides are nonempty the result satisfies
///   max filled capacity < (replicas - filled_total) / unfilled_count <= min unfilled capacity.
/// Throws std::invalid_argument if replicas exceeds the total capacity.
FillClassification get_filled(std::span<const std::uint32_t> capacities, Replicas replicas);

/// Replica counts handed to the unfilled children of a node whose unfilled
/// side receives `spread` (high case) or `spread - 1` (low case).
struct ChildTargets {
  Replicas ceil = 0;          // ceil(spread / k)
  Replicas floor = 0;         // floor((spread - 1) / k), always ceil - 1
  std::uint32_t high_count = 0;  // children taking `ceil` when spread replicas go down
  std::uint32_t low_count = 0;   // children taking `ceil` when spread - 1 go down
};

/// `replicas - filled_total` must be at least 1 and k at least 1;
/// throws std::invalid_argument otherwise.
ChildTargets child_targets(Replicas replicas, Replicas filled_total, std::uint32_t k);

/// Indices of the `count` lexicographically smallest diffs (ties to the
/// lower index), ascending. Expected linear in the total diff length.
std::vector<std::uint32_t> conquer_select(std::span<const AggregateDiff> diffs, std::uint32_t count);

/// Aggregate of a fully placed subtree: an internal node contributes one at
/// its leaf count, a leaf one at index 1. Accumulated into `out`, which must
/// already have capacity for leaf_count(u).
void accumulate_filled(const FailureTree& tree, NodeId u, CompactAggregate& out);
CompactAggregate filled_aggregate(const FailureTree& tree, NodeId u);

/// Per-node record of the divide phase, later completed by the conquer phase
/// with the replica split chosen for each child.
struct NodePlan {
  enum class Kind {
    kLeaf,       // a single leaf asked for 1 (and 0)
    kFullOnly,   // a one-leaf path asked for 1; the low case is empty
    kShallowest, // one replica on a shallowest leaf, no classification
    kBranch,     // children classified for `split` replicas
  };

  NodeId node;
  Kind kind = Kind::kBranch;
  Replicas target = 0;       // replicas in the high case
  bool full = false;         // target == leaf_count: the high case fills the subtree
  Replicas split = 0;        // replicas the classification distributes (target or target - 1)
  FillClassification fill;   // positions index the node's child list
  ChildTargets targets;      // valid when fill.unfilled is nonempty
  bool chain_member = false; // single unfilled child, not full
  // Replicas per child for `split` and `split - 1` replicas.
  std::vector<Replicas> assign_high;
  std::vector<Replicas> assign_low;
};

/// All plans produced for one solve, in top-down visit order.
class DivisionPlan {
 public:
  explicit DivisionPlan(std::size_t nodes = 0) : slot_(nodes, -1) {}

  NodePlan& add(NodePlan plan);
  const NodePlan* find(NodeId u) const;
  NodePlan* find(NodeId u);

  std::span<const NodePlan> plans() const { return plans_; }
  std::span<NodePlan> plans() { return plans_; }

 private:
  std::vector<std::int64_t> slot_;
  std::vector<NodePlan> plans_;
};

/// One classified node, in the order the divide phase met them.
struct TraceEntry {
  NodeId node;
  Replicas replicas = 0;  // the `split` that was classified
  Replicas filled_total = 0;
  std::uint32_t unfilled = 0;
  Replicas ceil = 0;
  Replicas floor = 0;
  bool full = false;
  bool chain_member = false;
};

/// `node=<name> r=<int> L=<int> k=<int> ceil=<int> floor=<int>`
std::string format_trace(const FailureTree& tree, const TraceEntry& entry);

}  // namespace replica
