#include "replica/evaluator.hpp"

#include <algorithm>
#include <stdexcept>

namespace replica {
namespace {

void check_node(const FailureTree& tree, NodeId u) {
  if (!tree.contains(u)) throw std::invalid_argument("unknown node index " + std::to_string(u.value));
}

void check_placement(const FailureTree& tree, const Placement& placement) {
  for (NodeId leaf : placement.leaves()) {
    check_node(tree, leaf);
    if (!tree.is_leaf(leaf)) throw std::invalid_argument("'" + tree.name(leaf) + "' is not a leaf");
  }
}

}  // namespace

NodeId FailureDag::add_vertex(std::string name, bool candidate) {
  names_.push_back(std::move(name));
  candidate_.push_back(candidate);
  out_.emplace_back();
  return NodeId{static_cast<std::uint32_t>(names_.size() - 1)};
}

void FailureDag::add_edge(NodeId from, NodeId to) {
  if (from.value >= size() || to.value >= size()) throw std::invalid_argument("edge endpoint out of range");
  out_[from.value].push_back(to);
}

FailureDag FailureDag::from_tree(const FailureTree& tree) {
  FailureDag dag;
  for (std::uint32_t i = 0; i < tree.size(); ++i) {
    dag.add_vertex(tree.name(NodeId{i}), tree.is_leaf(NodeId{i}));
  }
  for (std::uint32_t i = 0; i < tree.size(); ++i) {
    for (NodeId c : tree.children(NodeId{i})) dag.add_edge(NodeId{i}, c);
  }
  return dag;
}

std::uint32_t failure_number(const FailureTree& tree, NodeId event, const Placement& placement) {
  check_node(tree, event);
  check_placement(tree, placement);
  std::uint32_t count = 0;
  for (NodeId leaf : placement.leaves()) {
    for (std::optional<NodeId> v = leaf; v; v = tree.parent(*v)) {
      if (*v == event) {
        ++count;
        break;
      }
    }
  }
  return count;
}

std::uint32_t failure_number(const FailureDag& dag, NodeId event, std::span<const NodeId> placement) {
  if (event.value >= dag.size()) throw std::invalid_argument("unknown vertex");
  std::vector<bool> placed(dag.size(), false);
  for (NodeId p : placement) {
    if (p.value >= dag.size()) throw std::invalid_argument("unknown vertex in placement");
    placed[p.value] = true;
  }
  std::vector<bool> seen(dag.size(), false);
  std::vector<NodeId> stack{event};
  seen[event.value] = true;
  std::uint32_t count = 0;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    if (placed[v.value]) ++count;
    for (NodeId w : dag.successors(v)) {
      if (!seen[w.value]) {
        seen[w.value] = true;
        stack.push_back(w);
      }
    }
  }
  return count;
}

std::vector<std::uint32_t> subtree_replicas(const FailureTree& tree, const Placement& placement) {
  check_placement(tree, placement);
  std::vector<std::uint32_t> count(tree.size(), 0);
  for (NodeId leaf : placement.leaves()) count[leaf.value] = 1;
  const auto order = tree.preorder();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (auto p = tree.parent(*it)) count[p->value] += count[it->value];
  }
  return count;
}

FailureAggregate failure_aggregate(const FailureTree& tree, const Placement& placement) {
  const auto count = subtree_replicas(tree, placement);
  FailureAggregate aggregate(placement.rho());
  for (std::uint32_t c : count) aggregate.bump(c);
  return aggregate;
}

FailureAggregate failure_aggregate(const FailureDag& dag, std::span<const NodeId> placement) {
  std::vector<NodeId> distinct(placement.begin(), placement.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  for (NodeId p : distinct) {
    if (p.value >= dag.size() || !dag.is_candidate(p)) {
      throw std::invalid_argument("placement member is not a candidate");
    }
  }
  FailureAggregate aggregate(static_cast<Replicas>(distinct.size()));
  for (std::uint32_t v = 0; v < dag.size(); ++v) {
    aggregate.bump(failure_number(dag, NodeId{v}, distinct));
  }
  return aggregate;
}

FailureAggregate path_aggregate(const FailureTree& tree, NodeId from, NodeId to,
                                const Placement& placement, Replicas capacity) {
  return path_aggregate(tree, from, to, subtree_replicas(tree, placement), capacity);
}

FailureAggregate path_aggregate(const FailureTree& tree, NodeId from, NodeId to,
                                std::span<const std::uint32_t> replicas, Replicas capacity) {
  check_node(tree, from);
  check_node(tree, to);
  if (tree.depth(to) < tree.depth(from)) {
    throw std::invalid_argument("'" + tree.name(to) + "' is not below '" + tree.name(from) + "'");
  }
  FailureAggregate aggregate(capacity);
  NodeId v = to;
  while (true) {
    aggregate.bump(replicas[v.value]);
    if (v == from) break;
    auto p = tree.parent(v);
    if (!p || tree.depth(*p) < tree.depth(from)) {
      throw std::invalid_argument("'" + tree.name(to) + "' is not below '" + tree.name(from) + "'");
    }
    v = *p;
  }
  return aggregate;
}

BalanceReport is_balanced(const FailureTree& tree, const Placement& placement) {
  const auto count = subtree_replicas(tree, placement);
  for (NodeId u : tree.preorder()) {
    const auto kids = tree.children(u);
    if (kids.size() < 2) continue;
    NodeId heaviest = kids.front();
    for (NodeId c : kids) {
      if (count[c.value] > count[heaviest.value]) heaviest = c;
    }
    for (NodeId c : kids) {
      const bool unfilled = count[c.value] < tree.leaf_count(c);
      if (unfilled && count[c.value] + 1 < count[heaviest.value]) {
        return {false, BalanceViolation{u, c, heaviest}};
      }
    }
  }
  return {};
}

std::optional<MonotonicityViolation> monotonicity_check(const FailureTree& tree,
                                                        const Placement& placement) {
  const auto count = subtree_replicas(tree, placement);
  for (NodeId u : tree.preorder()) {
    for (NodeId c : tree.children(u)) {
      if (count[c.value] > count[u.value]) return MonotonicityViolation{u, c};
    }
  }
  return std::nullopt;
}

}  // namespace replica
