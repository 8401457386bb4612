#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "replica/aggregate.hpp"
#include "replica/division.hpp"
#include "replica/model.hpp"

namespace replica {

/// A solver invariant broke; indicates a bug rather than bad input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Edge from a solver-visible node down to one of its children, possibly
/// skipping a run of one-child nodes. `top` is the original child, `bottom`
/// the first node below it that is a leaf or branches.
struct ContractedEdge {
  NodeId top;
  NodeId bottom;
  std::uint32_t interior = 0;  // one-child nodes from top down to bottom, exclusive of bottom
};

/// One maximal run of one-child nodes between `upper` and `lower`.
struct ChainRecord {
  NodeId upper;
  NodeId lower;
  std::uint32_t first = 0;   // offset of the run in ContractedTree::interior
  std::uint32_t length = 0;  // one-child nodes on the run
};

/// The tree as seen by the solver. Children of a visible node are listed in
/// the original order, one edge per original child.
class ContractedTree {
 public:
  const FailureTree& tree() const { return *tree_; }
  std::span<const ContractedEdge> edges(NodeId u) const {
    return std::span<const ContractedEdge>(edges_).subspan(offset_[u.value],
                                                          offset_[u.value + 1] - offset_[u.value]);
  }
  std::span<const ChainRecord> records() const { return records_; }
  /// Nodes of a run, top-down.
  std::span<const NodeId> interior(const ChainRecord& record) const {
    return std::span<const NodeId>(interior_).subspan(record.first, record.length);
  }

 struct Layout {
    std::vector<std::uint32_t> offset;
    std::vector<ContractedEdge> edges;
  };

 private:
  friend ContractedTree contract_unary_paths(const FailureTree& tree);
  friend ContractedTree identity_view(const FailureTree& tree);

  const FailureTree* tree_ = nullptr;
  std::vector<std::uint32_t> offset_;  // edges of u are [offset_[u], offset_[u + 1])
  std::vector<ContractedEdge> edges_;
  std::vector<ChainRecord> records_;
  std::vector<NodeId> interior_;
};

/// Skips every non-root node with exactly one child. The tree must outlive
/// the result.
ContractedTree contract_unary_paths(const FailureTree& tree);
/// Every edge maps to itself; no records.
ContractedTree identity_view(const FailureTree& tree);

/// Chain members v_1..v_{t-1} (each with a single unfilled child and not
/// holding all its leaves) and the node below the last member.
struct DegenerateChain {
  std::vector<NodeId> members;
  NodeId terminal;
};

/// Maximal chains among the plans' chain members, heads in plan order.
std::vector<DegenerateChain> find_degenerate_chains(const ContractedTree& view,
                                                    const DivisionPlan& plan);

/// Stand-in for a chain: what the members and their filled subtrees add to
/// the terminal's results.
struct Pseudonode {
  NodeId head;
  NodeId terminal;
  std::vector<NodeId> chain;
  CompactAggregate high_contribution;  // capacity head_target
  CompactAggregate low_contribution;   // capacity head_target - 1
  Replicas head_target = 0;
  std::uint32_t absorbed = 0;          // original nodes accounted for
};

struct TransformStats {
  std::uint64_t chains = 0;
  std::uint64_t accumulator_allocations = 0;
  std::uint64_t accumulator_entries = 0;
};

std::vector<Pseudonode> transform_chains(const ContractedTree& view, const DivisionPlan& plan,
                                         std::span<const DegenerateChain> chains,
                                         TransformStats* stats = nullptr);

struct ChainSummary {
  NodeId head;
  std::uint32_t length = 0;  // members plus the terminal
  std::uint32_t absorbed = 0;
  Replicas replicas = 0;
};

ChainSummary summarize(const Pseudonode& pseudonode);
/// `chain v1=<name> t=<int> |S_w|=<int> r=<int>`
std::string format_chain(const FailureTree& tree, const ChainSummary& summary);

/// Places `replicas` replicas under the root following the plan's per-child
/// decisions. Throws InternalError if the plan does not cover a node the
/// walk reaches.
Placement expand_solution(const FailureTree& tree, const DivisionPlan& plan, Replicas replicas);

}  // namespace replica
