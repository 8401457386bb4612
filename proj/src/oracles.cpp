#include "replica/oracles.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <random>
#include <string>

#include "replica/evaluator.hpp"

namespace replica {

InfeasibleReplicas::InfeasibleReplicas(Replicas rho, std::uint32_t leaves)
    : std::invalid_argument("cannot place " + std::to_string(rho) + " replicas on " +
                            std::to_string(leaves) + " leaves") {}

BudgetExceeded::BudgetExceeded(std::uint64_t combinations, std::uint64_t budget)
    : std::runtime_error("brute force needs " +
                         (combinations == std::numeric_limits<std::uint64_t>::max()
                              ? std::string("more than 2^64")
                              : std::to_string(combinations)) +
                         " combinations, budget is " + std::to_string(budget)),
      combinations_(combinations) {}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
    if (result > std::numeric_limits<std::uint64_t>::max()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return static_cast<std::uint64_t>(result);
}

namespace {

// Evaluates many placements on one tree without re-validating each.
class AggregateScratch {
 public:
  explicit AggregateScratch(const FailureTree& tree) : count_(tree.size(), 0) {
    const auto order = tree.preorder();
    upward_.reserve(order.size());
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      auto p = tree.parent(*it);
      if (p) upward_.emplace_back(it->value, p->value);
    }
  }

  FailureAggregate evaluate(std::span<const NodeId> leaves) {
    std::fill(count_.begin(), count_.end(), 0);
    for (NodeId leaf : leaves) count_[leaf.value] = 1;
    for (auto [child, parent] : upward_) count_[parent] += count_[child];
    FailureAggregate aggregate(static_cast<Replicas>(leaves.size()));
    for (std::uint32_t c : count_) aggregate.bump(c);
    return aggregate;
  }

 private:
  std::vector<std::uint32_t> count_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> upward_;
};

std::vector<NodeId> sorted_leaves(const FailureTree& tree) {
  std::vector<NodeId> leaves(tree.leaves().begin(), tree.leaves().end());
  std::sort(leaves.begin(), leaves.end());
  return leaves;
}

void check_rho(const FailureTree& tree, Replicas rho) {
  if (rho > tree.total_leaves()) throw InfeasibleReplicas(rho, tree.total_leaves());
}

// Visits every rho-subset of `pool` in lexicographic order.
template <typename Visit>
void for_each_combination(std::span<const NodeId> pool, Replicas rho, Visit&& visit) {
  const std::size_t n = pool.size();
  std::vector<std::size_t> pick(rho);
  for (std::size_t i = 0; i < rho; ++i) pick[i] = i;
  std::vector<NodeId> current(rho);
  while (true) {
    for (std::size_t i = 0; i < rho; ++i) current[i] = pool[pick[i]];
    visit(std::span<const NodeId>(current));
    std::size_t i = rho;
    while (i > 0 && pick[i - 1] == n - rho + i - 1) --i;
    if (i == 0) return;
    ++pick[i - 1];
    for (std::size_t j = i; j < rho; ++j) pick[j] = pick[j - 1] + 1;
  }
}

void check_budget(std::uint64_t leaves, Replicas rho, std::uint64_t budget) {
  const std::uint64_t combinations = binomial(leaves, rho);
  if (combinations > budget) throw BudgetExceeded(combinations, budget);
}

}  // namespace

PlacerOutcome brute_force_place(const FailureTree& tree, Replicas rho, std::uint64_t budget) {
  check_rho(tree, rho);
  const auto pool = sorted_leaves(tree);
  check_budget(pool.size(), rho, budget);

  AggregateScratch scratch(tree);
  PlacerOutcome best;
  bool have = false;
  for_each_combination(pool, rho, [&](std::span<const NodeId> leaves) {
    ++best.evaluations;
    FailureAggregate candidate = scratch.evaluate(leaves);
    if (!have || candidate < best.aggregate) {
      best.aggregate = std::move(candidate);
      best.placement = Placement::of(tree, {leaves.begin(), leaves.end()});
      have = true;
    }
  });
  return best;
}

std::vector<Placement> brute_force_optima(const FailureTree& tree, Replicas rho,
                                          std::uint64_t budget) {
  check_rho(tree, rho);
  const auto pool = sorted_leaves(tree);
  check_budget(pool.size(), rho, budget);

  AggregateScratch scratch(tree);
  std::vector<Placement> optima;
  std::optional<FailureAggregate> best;
  for_each_combination(pool, rho, [&](std::span<const NodeId> leaves) {
    FailureAggregate candidate = scratch.evaluate(leaves);
    if (!best || candidate < *best) {
      best = std::move(candidate);
      optima.clear();
    } else if (candidate != *best) {
      return;
    }
    optima.push_back(Placement::of(tree, {leaves.begin(), leaves.end()}));
  });
  return optima;
}

PlacerOutcome greedy_place(const FailureTree& tree, Replicas rho) {
  check_rho(tree, rho);
  const auto pool = sorted_leaves(tree);
  std::vector<std::uint32_t> count(tree.size(), 0);
  std::vector<bool> placed(tree.size(), false);

  PlacerOutcome outcome;
  for (Replicas step = 0; step < rho; ++step) {
    std::optional<NodeId> choice;
    FailureAggregate best;
    for (NodeId leaf : pool) {
      if (placed[leaf.value]) continue;
      ++outcome.evaluations;
      FailureAggregate path = path_aggregate(tree, tree.root(), leaf, count, rho);
      if (!choice || path < best) {
        best = std::move(path);
        choice = leaf;
      }
    }
    placed[choice->value] = true;
    outcome.selection_order.push_back(*choice);
    for (std::optional<NodeId> v = *choice; v; v = tree.parent(*v)) ++count[v->value];
  }
  outcome.placement = Placement::of(tree, outcome.selection_order);
  outcome.aggregate = failure_aggregate(tree, outcome.placement);
  return outcome;
}

PlacerOutcome round_robin_place(const FailureTree& tree, Replicas rho, RotationOrder order) {
  check_rho(tree, rho);
  std::vector<NodeId> chosen;
  std::vector<std::pair<NodeId, Replicas>> stack;
  if (rho > 0) stack.emplace_back(tree.root(), rho);
  PlacerOutcome outcome;
  while (!stack.empty()) {
    auto [u, replicas] = stack.back();
    stack.pop_back();
    if (tree.is_leaf(u)) {
      chosen.push_back(u);
      continue;
    }
    std::vector<NodeId> kids(tree.children(u).begin(), tree.children(u).end());
    switch (order.kind) {
      case RotationOrder::Kind::kForward: break;
      case RotationOrder::Kind::kReverse: std::reverse(kids.begin(), kids.end()); break;
      case RotationOrder::Kind::kShuffled: {
        std::mt19937_64 rng(order.seed ^ (0x9e3779b97f4a7c15ULL * (u.value + 1)));
        std::shuffle(kids.begin(), kids.end(), rng);
        break;
      }
    }
    std::vector<Replicas> dealt(kids.size(), 0);
    while (replicas > 0) {
      for (std::size_t i = 0; i < kids.size() && replicas > 0; ++i) {
        if (dealt[i] < tree.leaf_count(kids[i])) {
          ++dealt[i];
          --replicas;
          ++outcome.evaluations;
        }
      }
    }
    for (std::size_t i = kids.size(); i-- > 0;) {
      if (dealt[i] > 0) stack.emplace_back(kids[i], dealt[i]);
    }
  }
  outcome.placement = Placement::of(tree, std::move(chosen));
  outcome.aggregate = failure_aggregate(tree, outcome.placement);
  return outcome;
}

}  // namespace replica
