#pragma once

#include <cstdint>
#include <vector>

#include "replica/aggregate.hpp"
#include "replica/division.hpp"
#include "replica/model.hpp"
#include "replica/oracles.hpp"
#include "replica/transform.hpp"

namespace replica {

enum class SolveMode {
  kBasic,  // full-length vectors, every node solved directly
  kFast,   // compact vectors, one-child runs skipped, chains collapsed, r=1 in closed form
};

/// Optimal aggregates at the root for rho and rho - 1 replicas, and the
/// decisions that reproduce them.
struct SolveResult {
  Replicas rho = 0;
  FailureAggregate high;  // rho replicas
  FailureAggregate low;   // rho - 1 replicas (empty when rho is 0)
  DivisionPlan plan;
};

struct SolveReport {
  std::vector<TraceEntry> trace;
  std::vector<ChainSummary> chains;
  TransformStats transform;
  std::size_t unary_records = 0;
  std::size_t plans = 0;
};

/// Throws InfeasibleReplicas when rho exceeds the leaf count.
SolveResult solve_pair(const FailureTree& tree, Replicas rho, SolveMode mode,
                       SolveReport* report = nullptr);

/// Lexicominimum placement of rho replicas. `evaluations` counts node plans.
PlacerOutcome solve(const FailureTree& tree, Replicas rho, SolveMode mode,
                    SolveReport* report = nullptr);

}  // namespace replica
