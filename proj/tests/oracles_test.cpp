#include <algorithm>

#include "doctest.h"
#include "fixtures.hpp"
#include "replica/evaluator.hpp"
#include "replica/oracles.hpp"

using namespace replica;

TEST_CASE("binomial saturates") {
  CHECK(binomial(9, 3) == 84);
  CHECK(binomial(5, 0) == 1);
  CHECK(binomial(3, 5) == 0);
  CHECK(binomial(200, 100) == UINT64_MAX);
}

TEST_CASE("brute force on the fixture") {
  const auto tree = parse_topology(fixtures::kT13);
  const auto best = brute_force_place(tree, 3);
  CHECK(to_string(best.aggregate) == "<1,1,4,7>");
  CHECK(best.evaluations == 84);
  CHECK(best.aggregate == failure_aggregate(tree, best.placement));

  const auto optima = brute_force_optima(tree, 3);
  CHECK(std::find(optima.begin(), optima.end(),
                  fixtures::placement(tree, {"a2", "b1", "b2"})) != optima.end());
  for (const auto& p : optima) CHECK(failure_aggregate(tree, p) == best.aggregate);
}

TEST_CASE("brute force edge cases") {
  const auto tree = parse_topology(fixtures::kT13);
  const auto all = brute_force_place(tree, 9);
  CHECK(all.placement.rho() == 9);
  CHECK(brute_force_optima(tree, 9).size() == 1);

  const auto star = parse_topology("hub x1\nhub x2\nhub x3\nhub x4\nhub x5");
  CHECK(to_string(brute_force_place(star, 1).aggregate) == "<2,4>");
  CHECK(to_string(brute_force_place(star, 0).aggregate) == "<6>");

  CHECK_THROWS_AS(brute_force_place(tree, 10), InfeasibleReplicas);
  CHECK_THROWS_AS(brute_force_place(tree, 4, 100), BudgetExceeded);
  CHECK_NOTHROW(brute_force_place(tree, 4, 126));
}

TEST_CASE("brute force breaks ties toward the smallest leaf indices") {
  const auto star = parse_topology("hub x1\nhub x2\nhub x3");
  const auto best = brute_force_place(star, 2);
  CHECK(best.placement == fixtures::placement(star, {"x1", "x2"}));
}

TEST_CASE("greedy on small shapes") {
  const auto tree = parse_topology(fixtures::kT13);
  const auto g = greedy_place(tree, 3);
  CHECK(to_string(g.aggregate) == "<1,1,4,7>");
  CHECK(g.selection_order.size() == 3);
  CHECK(g.evaluations <= 3 * tree.total_leaves());

  // The first pick is always a shallowest leaf.
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto t = generate_random_tree(2 + seed % 40, 1 + seed % 4, seed);
    const auto one = greedy_place(t, 1);
    CHECK(t.depth(one.selection_order.front()) == t.min_leaf_depth(t.root()));
  }

  const auto path = parse_topology("a b\nb c\nc d");
  CHECK(to_string(greedy_place(path, 1).aggregate) == "<4,0>");
}

TEST_CASE("greedy matches brute force") {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    const auto tree = fixtures::small_tree(seed);
    for (Replicas rho = 0; rho <= tree.total_leaves(); ++rho) {
      const auto g = greedy_place(tree, rho);
      CHECK(g.aggregate == brute_force_place(tree, rho).aggregate);
      CHECK(g.aggregate == failure_aggregate(tree, g.placement));
      CHECK(g.evaluations <= std::uint64_t{rho} * tree.total_leaves());
    }
  }
}

TEST_CASE("every greedy prefix extends to an optimum") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto tree = fixtures::small_tree(seed, 9);
    const Replicas rho = tree.total_leaves() / 2 + 1;
    const auto g = greedy_place(tree, rho);
    const auto optima = brute_force_optima(tree, rho);
    for (std::size_t i = 1; i <= rho; ++i) {
      const bool extends = std::any_of(optima.begin(), optima.end(), [&](const Placement& p) {
        return std::all_of(g.selection_order.begin(), g.selection_order.begin() + i,
                           [&](NodeId leaf) { return p.contains(leaf); });
      });
      CHECK(extends);
    }
  }
}

TEST_CASE("optimal placements are balanced") {
  for (std::uint64_t seed = 1; seed <= 120; ++seed) {
    const auto tree = fixtures::small_tree(seed, 10);
    for (Replicas rho = 0; rho <= tree.total_leaves(); ++rho) {
      for (const auto& p : brute_force_optima(tree, rho)) CHECK(is_balanced(tree, p).balanced);
    }
  }
}

TEST_CASE("round robin is balanced but not always optimal") {
  bool witnessed = false;
  bool orders_differ = false;
  for (std::uint64_t seed = 1; seed <= 400; ++seed) {
    const auto tree = fixtures::small_tree(seed);
    if (tree.total_leaves() < 3) continue;
    const auto best = brute_force_place(tree, 3);
    const auto forward = round_robin_place(tree, 3);
    const auto reverse = round_robin_place(tree, 3, {RotationOrder::Kind::kReverse, 0});
    const auto shuffled = round_robin_place(tree, 3, {RotationOrder::Kind::kShuffled, seed});
    for (const auto* rr : {&forward, &reverse, &shuffled}) {
      CHECK(is_balanced(tree, rr->placement).balanced);
      CHECK(rr->aggregate == failure_aggregate(tree, rr->placement));
      CHECK(best.aggregate <= rr->aggregate);
      witnessed = witnessed || best.aggregate < rr->aggregate;
    }
    orders_differ = orders_differ || forward.aggregate != reverse.aggregate;
  }
  CHECK(witnessed);
  CHECK(orders_differ);
}

TEST_CASE("round robin on a star is optimal") {
  const auto star = parse_topology("hub x1\nhub x2\nhub x3\nhub x4");
  for (Replicas rho = 0; rho <= 4; ++rho) {
    CHECK(round_robin_place(star, rho).aggregate == brute_force_place(star, rho).aggregate);
  }
}
