#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace replica {

/// Dense node index assigned at build time. Names live in the owning tree.
struct NodeId {
  std::uint32_t value = 0;

  friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

using Replicas = std::uint32_t;

class ParseError : public std::runtime_error {
 public:
  enum class Kind {
    kEmpty,
    kMalformed,
    kDuplicateEdge,
    kMultipleParents,
    kCycle,
    kMultipleRoots,
    kOrphan,
  };

  ParseError(Kind kind, std::size_t line, const std::string& detail);

  Kind kind() const noexcept { return kind_; }
  /// 1-based line number in the topology text (0 when no line applies).
  std::size_t line() const noexcept { return line_; }

 private:
  Kind kind_;
  std::size_t line_;
};

const char* to_string(ParseError::Kind kind);

/// Rooted failure tree. Leaves are the placement candidates; every vertex,
/// leaf or internal, is a failure event. Immutable once built.
class FailureTree {
 public:
  /// Builds and preprocesses a tree from a parent table (root has no parent).
  /// Throws std::invalid_argument if the table is not a single rooted tree.
  static FailureTree from_parents(std::vector<std::string> names,
                                  std::vector<std::optional<NodeId>> parents);

  std::size_t size() const noexcept { return names_.size(); }
  NodeId root() const noexcept { return root_; }

  const std::string& name(NodeId u) const { return names_.at(u.value); }
  std::optional<NodeId> find(std::string_view name) const;

  std::optional<NodeId> parent(NodeId u) const;
  std::span<const NodeId> children(NodeId u) const {
    return std::span<const NodeId>(child_list_).subspan(child_offset_[u.value],
                                                        child_offset_[u.value + 1] - child_offset_[u.value]);
  }
  bool is_leaf(NodeId u) const { return child_offset_[u.value] == child_offset_[u.value + 1]; }

  /// Leaf descendants (a leaf counts itself).
  std::uint32_t leaf_count(NodeId u) const { return leaf_count_[u.value]; }
  std::uint32_t subtree_size(NodeId u) const { return subtree_size_[u.value]; }
  /// Edges from u down to its shallowest leaf.
  std::uint32_t min_leaf_depth(NodeId u) const { return min_leaf_depth_[u.value]; }
  std::uint32_t depth(NodeId u) const { return depth_[u.value]; }

  std::uint32_t total_leaves() const { return leaf_count(root_); }

  /// Pre-order (parents before children, children in input order).
  std::span<const NodeId> preorder() const { return preorder_; }
  /// All leaves in pre-order.
  std::span<const NodeId> leaves() const { return leaves_; }

  bool contains(NodeId u) const noexcept { return u.value < names_.size(); }

 private:
  friend FailureTree parse_topology(std::string_view text);

  FailureTree() = default;
  void preprocess(const std::vector<std::vector<NodeId>>& lists);

  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<std::int64_t> parent_;
  std::vector<std::uint32_t> child_offset_;  // children of u: [offset[u], offset[u + 1])
  std::vector<NodeId> child_list_;
  NodeId root_{};
  std::vector<std::uint32_t> leaf_count_;
  std::vector<std::uint32_t> subtree_size_;
  std::vector<std::uint32_t> min_leaf_depth_;
  std::vector<std::uint32_t> depth_;
  std::vector<NodeId> preorder_;
  std::vector<NodeId> leaves_;
};

/// Parses the edge-list topology format: one `<parent> <child>` pair per
/// line, `#` comments and blank lines ignored. A line holding a single
/// token declares a node, which is how a one-node tree is written.
FailureTree parse_topology(std::string_view text);

/// Emits edges in pre-order; a single-node tree is written as its name.
std::string serialize_topology(const FailureTree& tree);

/// Random recursive tree: node i attaches to a uniformly chosen earlier node
/// whose arity is still below `max_children`. Names are `n0`, `n1`, ...
FailureTree generate_random_tree(std::size_t nodes, std::size_t max_children,
                                 std::uint64_t seed);

/// Random tree biased toward caterpillar spines: spine nodes carry a few
/// small side subtrees that tend to end up filled, and spines are broken up
/// by unary runs. Produces exactly `nodes` nodes.
FailureTree generate_chain_heavy_tree(std::size_t nodes, std::uint64_t seed);

/// Set of distinct leaves of a particular tree, kept sorted by index.
class Placement {
 public:
  Placement() = default;

  /// Throws std::invalid_argument for unknown ids, internal nodes or repeats.
  static Placement of(const FailureTree& tree, std::vector<NodeId> leaves);
  /// Resolves leaf names; same validation as `of`.
  static Placement of_names(const FailureTree& tree,
                            std::span<const std::string> names);

  std::span<const NodeId> leaves() const { return leaves_; }
  Replicas rho() const { return static_cast<Replicas>(leaves_.size()); }
  bool contains(NodeId u) const;

  friend bool operator==(const Placement&, const Placement&) = default;

 private:
  std::vector<NodeId> leaves_;
};

}  // namespace replica
