#include "doctest.h"
#include "fixtures.hpp"
#include "replica/evaluator.hpp"
#include "replica/oracles.hpp"
#include "replica/solver.hpp"

using namespace replica;

namespace {

constexpr SolveMode kModes[] = {SolveMode::kBasic, SolveMode::kFast};

const char* mode_name(SolveMode mode) { return mode == SolveMode::kBasic ? "basic" : "fast"; }

}  // namespace

TEST_CASE("solver on the fixture") {
  const auto tree = parse_topology(fixtures::kT13);
  for (SolveMode mode : kModes) {
    CAPTURE(mode_name(mode));
    const auto out = solve(tree, 3, mode);
    CHECK(to_string(out.aggregate) == "<1,1,4,7>");
    CHECK(failure_aggregate(tree, out.placement) == out.aggregate);
    CHECK(is_balanced(tree, out.placement).balanced);
  }
}

TEST_CASE("solver edge cases") {
  const auto tree = parse_topology(fixtures::kT13);
  for (SolveMode mode : kModes) {
    const auto none = solve(tree, 0, mode);
    CHECK(none.placement.rho() == 0);
    CHECK(to_string(none.aggregate) == "<13>");
    CHECK_THROWS_AS(solve(tree, 10, mode), InfeasibleReplicas);
    const auto all = solve(tree, 9, mode);
    CHECK(all.placement.rho() == 9);
    CHECK(all.aggregate == failure_aggregate(tree, all.placement));
  }

  const auto star = parse_topology("hub x1\nhub x2\nhub x3\nhub x4");
  for (SolveMode mode : kModes) CHECK(to_string(solve(star, 4, mode).aggregate) == "<1,0,0,4,0>");

  const auto solo = parse_topology("solo");
  for (SolveMode mode : kModes) {
    CHECK(to_string(solve(solo, 1, mode).aggregate) == "<1,0>");
    CHECK(to_string(solve(solo, 0, mode).aggregate) == "<1>");
  }

  const auto path = parse_topology("a b\nb c\nc d");
  for (SolveMode mode : kModes) CHECK(to_string(solve(path, 1, mode).aggregate) == "<4,0>");
}

TEST_CASE("one replica goes to a shallowest leaf") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto tree = generate_random_tree(1 + seed % 60, 1 + seed % 4, seed);
    const auto out = solve(tree, 1, SolveMode::kFast);
    CHECK(out.aggregate[1] == tree.min_leaf_depth(tree.root()) + 1);
    CHECK(tree.depth(out.placement.leaves().front()) == tree.min_leaf_depth(tree.root()));
  }
}

TEST_CASE("both modes match brute force on small trees") {
  for (std::uint64_t seed = 1; seed <= 250; ++seed) {
    const auto tree = fixtures::small_tree(seed);
    for (Replicas rho = 0; rho <= tree.total_leaves(); ++rho) {
      const auto best = brute_force_place(tree, rho).aggregate;
      for (SolveMode mode : kModes) {
        CAPTURE(seed);
        CAPTURE(rho);
        CAPTURE(mode_name(mode));
        const auto out = solve(tree, rho, mode);
        CHECK(out.aggregate == best);
        CHECK(failure_aggregate(tree, out.placement) == out.aggregate);
        CHECK(is_balanced(tree, out.placement).balanced);
      }
    }
  }
}

TEST_CASE("the low result is optimal for one replica fewer") {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    const auto tree = fixtures::small_tree(seed + 500);
    for (Replicas rho = 1; rho <= tree.total_leaves(); ++rho) {
      const auto fewer = brute_force_place(tree, rho - 1).aggregate;
      for (SolveMode mode : kModes) {
        CAPTURE(seed);
        CAPTURE(rho);
        const auto pair = solve_pair(tree, rho, mode);
        CHECK(pair.low == fewer);
        const auto placed = expand_solution(tree, pair.plan, rho - 1);
        CHECK(failure_aggregate(tree, placed) == pair.low);
      }
    }
  }
}

TEST_CASE("unfilled children receive the two adjacent targets") {
  for (std::uint64_t seed = 1; seed <= 120; ++seed) {
    const auto tree = generate_random_tree(20 + seed % 80, 2 + seed % 4, seed);
    const Replicas rho = 1 + static_cast<Replicas>(seed % tree.total_leaves());
    for (SolveMode mode : kModes) {
      SolveReport report;
      const auto pair = solve_pair(tree, rho, mode, &report);
      // One replica in fast mode is placed without classifying anything.
      if (rho > 1 || mode == SolveMode::kBasic) CHECK(report.trace.size() > 0);
      for (const TraceEntry& e : report.trace) {
        CHECK(e.ceil == (e.replicas - e.filled_total + e.unfilled - 1) / e.unfilled);
        CHECK(e.floor == (e.replicas - e.filled_total - 1) / e.unfilled);
      }
      for (const NodePlan& p : pair.plan.plans()) {
        if (p.kind != NodePlan::Kind::kBranch) continue;
        for (const auto* assign : {&p.assign_high, &p.assign_low}) {
          if (assign->empty()) continue;  // low case of a full node
          for (std::uint32_t i : p.fill.unfilled) {
            const Replicas got = (*assign)[i];
            CHECK((got == p.targets.ceil || got == p.targets.floor));
          }
        }
      }
    }
  }
}

TEST_CASE("targets halve at every branching level in fast mode") {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    const auto tree = seed % 2 == 0 ? generate_chain_heavy_tree(50 + seed, seed)
                                    : generate_random_tree(50 + seed, 3, seed);
    const Replicas rho = 1 + static_cast<Replicas>((seed * 13) % tree.total_leaves());
    const auto view = contract_unary_paths(tree);
    const auto pair = solve_pair(tree, rho, SolveMode::kFast);
    for (const NodePlan& p : pair.plan.plans()) {
      if (p.kind != NodePlan::Kind::kBranch || p.chain_member) continue;
      const std::uint32_t k = p.fill.unfilled_count();
      if (k >= 2) {
        CHECK(p.targets.ceil <= (p.split + 1) / 2);
        continue;
      }
      // A single unfilled child off a chain only happens at a full node,
      // and that child is never full itself.
      CHECK(p.full);
      const auto edge = view.edges(p.node)[p.fill.unfilled.front()];
      const NodePlan* below = pair.plan.find(edge.bottom);
      REQUIRE(below != nullptr);
      CHECK_FALSE(below->full);
    }
  }
}

TEST_CASE("fast mode reports its rewrites") {
  const auto path = parse_topology("root a\na b\nb leaf\nroot c\nc d\nc e");
  SolveReport report;
  solve(path, 2, SolveMode::kFast, &report);
  CHECK(report.unary_records == 1);

  const auto fixture = parse_topology(fixtures::kT13);
  SolveReport t13;
  solve(fixture, 3, SolveMode::kFast, &t13);
  CHECK(t13.unary_records == 0);
  CHECK(t13.chains.empty());

  SolveReport basic;
  solve(path, 2, SolveMode::kBasic, &basic);
  CHECK(basic.unary_records == 0);
  CHECK(basic.chains.empty());
}

TEST_CASE("solver handles larger trees in both modes") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto tree = generate_random_tree(400, 1 + seed % 5, seed);
    const Replicas rho = std::min<Replicas>(tree.total_leaves(), 5 + seed * 3);
    const auto fast = solve(tree, rho, SolveMode::kFast);
    const auto basic = solve(tree, rho, SolveMode::kBasic);
    const auto greedy = greedy_place(tree, rho);
    CHECK(fast.aggregate == basic.aggregate);
    CHECK(fast.aggregate == greedy.aggregate);
    CHECK(failure_aggregate(tree, fast.placement) == fast.aggregate);
  }
}
