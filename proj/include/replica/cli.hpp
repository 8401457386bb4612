#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "replica/model.hpp"
#include "replica/oracles.hpp"
#include "replica/solver.hpp"

namespace replica {

enum class Algorithm { kBrute, kGreedy, kDp, kFast };

/// "brute", "greedy", "dp" or "fast"; throws std::invalid_argument otherwise.
Algorithm parse_algorithm(std::string_view name);
const char* to_string(Algorithm algorithm);

/// Runs one placer. `report` is filled by dp and fast only.
PlacerOutcome run_algorithm(const FailureTree& tree, Replicas rho, Algorithm algorithm,
                            std::uint64_t brute_budget = kDefaultBruteBudget,
                            SolveReport* report = nullptr);

/// PLACER_BRUTE_BUDGET if set and valid, else the default.
std::uint64_t brute_budget_from_env();

enum class TreeShape { kUniform, kChainHeavy };

struct BenchConfig {
  std::size_t nodes = 100;
  Replicas replicas = 4;
  std::size_t trials = 1;
  std::uint64_t seed = 1;
  std::size_t max_children = 3;
  TreeShape shape = TreeShape::kUniform;
  std::vector<Algorithm> algorithms{Algorithm::kBrute, Algorithm::kGreedy, Algorithm::kDp,
                                    Algorithm::kFast};
  std::uint64_t brute_budget = kDefaultBruteBudget;
  std::size_t max_redraws = 64;
};

struct BenchRow {
  std::size_t trial = 0;
  Algorithm algorithm = Algorithm::kFast;
  std::size_t n = 0;
  Replicas rho = 0;
  std::uint64_t seed = 0;  // seed of the tree actually used
  std::int64_t nanos = 0;
  std::uint64_t evals = 0;
  std::string aggregate;
};

/// Trial i draws a tree from seed + i, redrawing from derived seeds while
/// it has fewer leaves than replicas. Rows come back sorted by (trial,
/// algorithm name). Throws std::runtime_error if no feasible tree turns up.
std::vector<BenchRow> run_bench(const BenchConfig& config);
/// First trial whose rows disagree on the aggregate.
std::optional<std::size_t> first_disagreement(const std::vector<BenchRow>& rows);
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

/// Exit codes of the placer command line.
inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitBudget = 4;

/// Entry point of `placer`; args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace replica
