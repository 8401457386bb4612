#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "replica/aggregate.hpp"
#include "replica/model.hpp"

namespace replica {

/// Requested replica count is negative-free but exceeds the leaf count.
class InfeasibleReplicas : public std::invalid_argument {
 public:
  InfeasibleReplicas(Replicas rho, std::uint32_t leaves);
};

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::uint64_t combinations, std::uint64_t budget);
  std::uint64_t combinations() const noexcept { return combinations_; }

 private:
  std::uint64_t combinations_;
};

struct PlacerOutcome {
  Placement placement;
  FailureAggregate aggregate;
  /// Candidate evaluations performed (placer specific).
  std::uint64_t evaluations = 0;
  /// Greedy only: leaves in the order they were chosen.
  std::vector<NodeId> selection_order;
};

inline constexpr std::uint64_t kDefaultBruteBudget = 10'000'000;

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Exhaustive search over all rho-subsets of leaves, in lexicographic order
/// of their sorted leaf indices; the first lexicominimum found wins.
PlacerOutcome brute_force_place(const FailureTree& tree, Replicas rho,
                                std::uint64_t budget = kDefaultBruteBudget);

/// Every rho-subset of leaves attaining the optimum.
std::vector<Placement> brute_force_optima(const FailureTree& tree, Replicas rho,
                                          std::uint64_t budget = kDefaultBruteBudget);

/// Adds one leaf at a time, picking the leaf whose root path has the
/// lexicominimum failure histogram under the partial placement (smallest
/// index on ties).
PlacerOutcome greedy_place(const FailureTree& tree, Replicas rho);

struct RotationOrder {
  enum class Kind { kForward, kReverse, kShuffled };
  Kind kind = Kind::kForward;
  std::uint64_t seed = 0;  // kShuffled only
};

/// Deals replicas to children one at a time in rotation, skipping children
/// whose leaves are exhausted, then recurses. Balanced but not optimal.
PlacerOutcome round_robin_place(const FailureTree& tree, Replicas rho, RotationOrder order = {});

}  // namespace replica
