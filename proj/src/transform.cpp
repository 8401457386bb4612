#include "replica/transform.hpp"

#include <algorithm>
#include <numeric>

namespace replica {

namespace {

// One edge slot per original child, laid out by node index; every edge
// starts out mapping to itself.
ContractedTree::Layout identity_layout(const FailureTree& tree) {
  ContractedTree::Layout layout;
  layout.offset.assign(tree.size() + 1, 0);
  for (std::uint32_t u = 0; u < tree.size(); ++u) {
    layout.offset[u + 1] =
        layout.offset[u] + static_cast<std::uint32_t>(tree.children(NodeId{u}).size());
  }
  layout.edges.reserve(layout.offset.back());
  for (std::uint32_t u = 0; u < tree.size(); ++u) {
    for (NodeId c : tree.children(NodeId{u})) layout.edges.push_back({c, c, 0});
  }
  return layout;
}

}  // namespace

ContractedTree contract_unary_paths(const FailureTree& tree) {
  ContractedTree view = identity_view(tree);
  std::vector<NodeId> queue{tree.root()};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId u = queue[head];
    const std::uint32_t begin = view.offset_[u.value], end = view.offset_[u.value + 1];
    for (std::uint32_t slot = begin; slot < end; ++slot) {
      ContractedEdge& edge = view.edges_[slot];
      const auto first = static_cast<std::uint32_t>(view.interior_.size());
      while (tree.children(edge.bottom).size() == 1) {
        view.interior_.push_back(edge.bottom);
        edge.bottom = tree.children(edge.bottom).front();
      }
      edge.interior = static_cast<std::uint32_t>(view.interior_.size()) - first;
      if (edge.interior > 0) view.records_.push_back({u, edge.bottom, first, edge.interior});
      queue.push_back(edge.bottom);
    }
  }
  return view;
}

ContractedTree identity_view(const FailureTree& tree) {
  ContractedTree view;
  view.tree_ = &tree;
  auto layout = identity_layout(tree);
  view.offset_ = std::move(layout.offset);
  view.edges_ = std::move(layout.edges);
  return view;
}

namespace {

bool is_member(const NodePlan* p) {
  return p != nullptr && p->kind == NodePlan::Kind::kBranch && p->chain_member;
}

}  // namespace

std::vector<DegenerateChain> find_degenerate_chains(const ContractedTree& view,
                                                    const DivisionPlan& plan) {
  std::vector<bool> taken(view.tree().size(), false);
  std::vector<DegenerateChain> chains;
  for (const NodePlan& p : plan.plans()) {
    if (!p.chain_member || p.kind != NodePlan::Kind::kBranch || taken[p.node.value]) continue;
    DegenerateChain chain;
    const NodePlan* at = &p;
    while (true) {
      taken[at->node.value] = true;
      chain.members.push_back(at->node);
      const NodeId next = view.edges(at->node)[at->fill.unfilled.front()].bottom;
      const NodePlan* below = plan.find(next);
      if (!is_member(below)) {
        chain.terminal = next;
        break;
      }
      at = below;
    }
    chains.push_back(std::move(chain));
  }
  return chains;
}

std::vector<Pseudonode> transform_chains(const ContractedTree& view, const DivisionPlan& plan,
                                         std::span<const DegenerateChain> chains,
                                         TransformStats* stats) {
  const FailureTree& tree = view.tree();
  std::vector<Pseudonode> out;
  out.reserve(chains.size());
  for (const DegenerateChain& chain : chains) {
    const NodePlan* head = plan.find(chain.members.front());
    if (head == nullptr) throw InternalError("chain head has no plan");
    const Replicas r1 = head->target;

    CompactAggregate high(r1), low(r1), filled(r1);
    if (stats != nullptr) {
      ++stats->chains;
      stats->accumulator_allocations += 3;
      stats->accumulator_entries += 3 * (std::uint64_t{r1} + 1);
    }

    Pseudonode node;
    node.head = chain.members.front();
    node.terminal = chain.terminal;
    node.chain = chain.members;
    node.head_target = r1;
    for (NodeId v : chain.members) {
      const NodePlan* p = plan.find(v);
      if (!is_member(p)) throw InternalError("chain member lost its plan");
      const auto edges = view.edges(v);
      for (std::uint32_t i : p->fill.filled) {
        accumulate_filled(tree, edges[i].top, filled);
        node.absorbed += tree.subtree_size(edges[i].top);
      }
      high.bump(p->target);
      low.bump(p->target - 1);
      const ContractedEdge& down = edges[p->fill.unfilled.front()];
      if (down.interior > 0) {
        high.bump(p->targets.ceil, down.interior);
        low.bump(p->targets.ceil - 1, down.interior);
      }
      node.absorbed += 1 + down.interior;
    }
    high += filled;
    low += filled;
    low.shrink(r1 - 1);
    node.high_contribution = std::move(high);
    node.low_contribution = std::move(low);
    out.push_back(std::move(node));
  }
  return out;
}

ChainSummary summarize(const Pseudonode& pseudonode) {
  return {pseudonode.head, static_cast<std::uint32_t>(pseudonode.chain.size() + 1),
          pseudonode.absorbed, pseudonode.head_target};
}

std::string format_chain(const FailureTree& tree, const ChainSummary& summary) {
  return "chain v1=" + tree.name(summary.head) + " t=" + std::to_string(summary.length) +
         " |S_w|=" + std::to_string(summary.absorbed) + " r=" + std::to_string(summary.replicas);
}

Placement expand_solution(const FailureTree& tree, const DivisionPlan& plan, Replicas replicas) {
  if (replicas > tree.total_leaves()) {
    throw InternalError("asked to expand more replicas than leaves");
  }
  std::vector<NodeId> chosen;
  chosen.reserve(replicas);
  std::vector<std::pair<NodeId, Replicas>> stack;
  stack.emplace_back(tree.root(), replicas);
  std::vector<NodeId> below;
  while (!stack.empty()) {
    const auto [u, t] = stack.back();
    stack.pop_back();
    if (t == 0) continue;
    const auto kids = tree.children(u);

    if (t == tree.leaf_count(u)) {
      below.assign(1, u);
      while (!below.empty()) {
        const NodeId v = below.back();
        below.pop_back();
        if (tree.is_leaf(v)) chosen.push_back(v);
        below.insert(below.end(), tree.children(v).begin(), tree.children(v).end());
      }
      continue;
    }

    const NodePlan* p = plan.find(u);
    if (p != nullptr && p->kind == NodePlan::Kind::kBranch) {
      const std::vector<Replicas>* assign = nullptr;
      if (t == p->split) {
        assign = &p->assign_high;
      } else if (t + 1 == p->split) {
        assign = &p->assign_low;
      }
      if (assign == nullptr || assign->size() != kids.size()) {
        throw InternalError("no decision for " + std::to_string(t) + " replicas at '" +
                            tree.name(u) + "'");
      }
      if (std::accumulate(assign->begin(), assign->end(), Replicas{0}) != t) {
        throw InternalError("decision at '" + tree.name(u) + "' does not conserve replicas");
      }
      for (std::size_t i = 0; i < kids.size(); ++i) stack.emplace_back(kids[i], (*assign)[i]);
      continue;
    }

    if (kids.size() == 1) {
      stack.emplace_back(kids.front(), t);
      continue;
    }
    if (t == 1 && !kids.empty()) {
      NodeId best = kids.front();
      for (NodeId c : kids) {
        if (tree.min_leaf_depth(c) < tree.min_leaf_depth(best)) best = c;
      }
      stack.emplace_back(best, 1);
      continue;
    }
    throw InternalError("no decision for " + std::to_string(t) + " replicas at '" +
                        tree.name(u) + "'");
  }
  return Placement::of(tree, std::move(chosen));
}

}  // namespace replica
