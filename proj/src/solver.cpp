#include "replica/solver.hpp"

#include <optional>

namespace replica {
namespace {

struct Pair {
  CompactAggregate high;
  CompactAggregate low;
};

class Solver {
 public:
  Solver(const FailureTree& tree, Replicas rho, SolveMode mode, SolveReport* report)
      : tree_(tree),
        rho_(rho),
        fast_(mode == SolveMode::kFast),
        report_(report),
        view_(fast_ ? contract_unary_paths(tree) : identity_view(tree)),
        plan_(tree.size()),
        results_(tree.size()) {}

  SolveResult run() {
    divide();
    if (fast_) transform();
    conquer();

    Pair& root = take(tree_.root());
    SolveResult out;
    out.rho = rho_;
    out.high = expand(root.high, rho_);
    root.low.shrink(rho_ - 1);
    out.low = expand(root.low, rho_ - 1);
    if (report_ != nullptr) {
      report_->unary_records = view_.records().size();
      report_->plans = plan_.plans().size();
    }
    out.plan = std::move(plan_);
    return out;
  }

 private:
  Replicas high_capacity(Replicas target) const { return fast_ ? target : rho_; }
  Replicas low_capacity(Replicas target) const { return fast_ ? target - 1 : rho_; }

  void divide() {
    std::vector<std::pair<NodeId, Replicas>> queue{{tree_.root(), rho_}};
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const auto [u, r] = queue[head];
      NodePlan p;
      p.node = u;
      p.target = r;
      p.split = r;
      p.full = r == tree_.leaf_count(u);
      if (tree_.is_leaf(u)) {
        p.kind = NodePlan::Kind::kLeaf;
      } else if (fast_ && r == 1) {
        p.kind = NodePlan::Kind::kShallowest;
      } else if (p.full && r == 1) {
        p.kind = NodePlan::Kind::kFullOnly;
        p.split = 0;
      } else {
        p.kind = NodePlan::Kind::kBranch;
        if (p.full) p.split = r - 1;
        const auto edges = view_.edges(u);
        capacities_.clear();
        for (const ContractedEdge& e : edges) capacities_.push_back(tree_.leaf_count(e.top));
        p.fill = get_filled(capacities_, p.split);
        if (p.fill.unfilled.empty()) throw InternalError("node below capacity has no unfilled child");
        p.targets = child_targets(p.split, p.fill.filled_total, p.fill.unfilled_count());
        p.chain_member = !p.full && p.fill.unfilled_count() == 1;
        if (fast_ && p.chain_member) {
          // Collapsed into a pseudonode, so the split is fixed here.
          p.assign_high.assign(edges.size(), 0);
          for (std::uint32_t i : p.fill.filled) p.assign_high[i] = capacities_[i];
          p.assign_low = p.assign_high;
          p.assign_high[p.fill.unfilled.front()] = p.targets.ceil;
          p.assign_low[p.fill.unfilled.front()] = p.targets.floor;
        }
        if (report_ != nullptr) {
          report_->trace.push_back({u, p.split, p.fill.filled_total, p.fill.unfilled_count(),
                                    p.targets.ceil, p.targets.floor, p.full, p.chain_member});
        }
        for (std::uint32_t i : p.fill.unfilled) queue.emplace_back(edges[i].bottom, p.targets.ceil);
      }
      plan_.add(std::move(p));
    }
  }

  void transform() {
    const auto chains = find_degenerate_chains(view_, plan_);
    pseudonodes_ = transform_chains(view_, plan_, chains,
                                    report_ != nullptr ? &report_->transform : nullptr);
    pseudonode_of_.assign(tree_.size(), -1);
    for (std::size_t i = 0; i < pseudonodes_.size(); ++i) {
      pseudonode_of_[pseudonodes_[i].head.value] = static_cast<std::int64_t>(i);
      if (report_ != nullptr) report_->chains.push_back(summarize(pseudonodes_[i]));
    }
  }

  Pair& take(NodeId u) {
    auto& slot = results_[u.value];
    if (!slot) throw InternalError("no result for '" + tree_.name(u) + "'");
    return *slot;
  }

  void conquer() {
    auto plans = plan_.plans();
    for (std::size_t i = plans.size(); i-- > 0;) {
      NodePlan& p = plans[i];
      const NodeId u = p.node;
      Pair out{CompactAggregate(high_capacity(p.target)), CompactAggregate(low_capacity(p.target))};
      switch (p.kind) {
        case NodePlan::Kind::kLeaf:
          out.high.bump(1);
          out.low.bump(0);
          break;
        case NodePlan::Kind::kShallowest: {
          const Count path = tree_.min_leaf_depth(u) + 1;
          out.high.bump(1, path);
          out.high.bump(0, tree_.subtree_size(u) - path);
          out.low.bump(0, tree_.subtree_size(u));
          break;
        }
        case NodePlan::Kind::kFullOnly:
          accumulate_filled(tree_, u, out.high);
          out.low.bump(0, tree_.subtree_size(u));
          break;
        case NodePlan::Kind::kBranch:
          if (fast_ && p.chain_member) {
            const std::int64_t at = pseudonode_of_[u.value];
            if (at < 0) continue;  // inside a chain; the head speaks for it
            const Pseudonode& pn = pseudonodes_[static_cast<std::size_t>(at)];
            Pair& below = take(pn.terminal);
            out.high = pn.high_contribution + below.high;
            out.low = pn.low_contribution + below.low;
            results_[pn.terminal.value].reset();
          } else {
            combine(p, out);
          }
          break;
      }
      results_[u.value] = std::move(out);
    }
  }

  // Assembles the node's pair from its children's pairs and records how the
  // replicas split among children.
  void combine(NodePlan& p, Pair& out) {
    const auto edges = view_.edges(p.node);
    const Replicas split = p.split;
    const Replicas cap = fast_ ? split : rho_;
    const std::uint32_t k = p.fill.unfilled_count();

    CompactAggregate common(cap);
    for (std::uint32_t i : p.fill.filled) accumulate_filled(tree_, edges[i].top, common);

    std::vector<AggregateDiff> diffs;
    diffs.reserve(k);
    for (std::uint32_t i : p.fill.unfilled) {
      const ContractedEdge& e = edges[i];
      Pair& child = take(e.bottom);
      if (e.interior > 0) {
        child.high.bump(p.targets.ceil, e.interior);
        child.low.bump(p.targets.floor, e.interior);
      }
      common += child.low;
      diffs.push_back(child.high - child.low);
      results_[e.bottom.value].reset();
    }

    const auto assemble = [&](std::uint32_t count, Replicas own, std::vector<Replicas>& assign) {
      CompactAggregate total = common;
      assign.assign(edges.size(), 0);
      for (std::uint32_t i : p.fill.filled) assign[i] = tree_.leaf_count(edges[i].top);
      for (std::uint32_t j : p.fill.unfilled) assign[j] = p.targets.floor;
      for (std::uint32_t sel : conquer_select(diffs, count)) {
        total += diffs[sel];
        assign[p.fill.unfilled[sel]] = p.targets.ceil;
      }
      total.bump(own);
      return total;
    };

    CompactAggregate at_split = assemble(p.targets.high_count, split, p.assign_high);
    if (p.full) {
      accumulate_filled(tree_, p.node, out.high);
      out.low = std::move(at_split);
      return;
    }
    CompactAggregate below_split = assemble(p.targets.low_count, split - 1, p.assign_low);
    if (fast_) below_split.shrink(split - 1);
    out.high = std::move(at_split);
    out.low = std::move(below_split);
  }

  const FailureTree& tree_;
  Replicas rho_;
  bool fast_;
  SolveReport* report_;
  ContractedTree view_;
  DivisionPlan plan_;
  std::vector<std::optional<Pair>> results_;
  std::vector<std::uint32_t> capacities_;
  std::vector<Pseudonode> pseudonodes_;
  std::vector<std::int64_t> pseudonode_of_;
};

}  // namespace

SolveResult solve_pair(const FailureTree& tree, Replicas rho, SolveMode mode, SolveReport* report) {
  if (rho > tree.total_leaves()) throw InfeasibleReplicas(rho, tree.total_leaves());
  if (rho == 0) {
    SolveResult out;
    out.high = FailureAggregate(0);
    out.high.bump(0, static_cast<Count>(tree.size()));
    out.plan = DivisionPlan(tree.size());
    return out;
  }
  return Solver(tree, rho, mode, report).run();
}

PlacerOutcome solve(const FailureTree& tree, Replicas rho, SolveMode mode, SolveReport* report) {
  SolveResult result = solve_pair(tree, rho, mode, report);
  PlacerOutcome outcome;
  outcome.placement = expand_solution(tree, result.plan, rho);
  outcome.aggregate = std::move(result.high);
  outcome.evaluations = result.plan.plans().size();
  return outcome;
}

}  // namespace replica
