#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "replica/model.hpp"

using namespace replica;

namespace {

ParseError::Kind parse_failure(const std::string& text, std::size_t* line = nullptr) {
  try {
    parse_topology(text);
  } catch (const ParseError& e) {
    if (line != nullptr) *line = e.line();
    return e.kind();
  }
  FAIL("parse succeeded: " << text);
  return ParseError::Kind::kEmpty;
}

// Recomputes the per-node statistics from the child lists alone.
void check_recurrences(const FailureTree& tree) {
  std::uint32_t leaves = 0;
  for (NodeId u : tree.preorder()) {
    const auto kids = tree.children(u);
    if (kids.empty()) {
      ++leaves;
      CHECK(tree.leaf_count(u) == 1);
      CHECK(tree.subtree_size(u) == 1);
      CHECK(tree.min_leaf_depth(u) == 0);
      continue;
    }
    std::uint32_t l = 0, size = 1, shallow = UINT32_MAX;
    for (NodeId c : kids) {
      l += tree.leaf_count(c);
      size += tree.subtree_size(c);
      shallow = std::min(shallow, tree.min_leaf_depth(c));
      CHECK(tree.depth(c) == tree.depth(u) + 1);
      CHECK(tree.parent(c) == u);
    }
    CHECK(tree.leaf_count(u) == l);
    CHECK(tree.subtree_size(u) == size);
    CHECK(tree.min_leaf_depth(u) == shallow + 1);
  }
  CHECK(leaves == tree.total_leaves());
  CHECK(tree.leaves().size() == tree.total_leaves());
  CHECK(tree.preorder().size() == tree.size());
}

}  // namespace

TEST_CASE("parse small topologies") {
  const auto tree = parse_topology("r a\nr b\na x\na y\nb z");
  CHECK(tree.size() == 6);
  CHECK(tree.name(tree.root()) == "r");
  CHECK(tree.leaf_count(tree.root()) == 3);
  CHECK(tree.leaf_count(fixtures::id(tree, "a")) == 2);
  std::set<std::string> leaves;
  for (NodeId leaf : tree.leaves()) leaves.insert(tree.name(leaf));
  CHECK(leaves == std::set<std::string>{"x", "y", "z"});

  const auto pair = parse_topology("r a");
  CHECK(pair.name(pair.root()) == "r");
  CHECK(pair.total_leaves() == 1);
  CHECK(pair.is_leaf(fixtures::id(pair, "a")));
}

TEST_CASE("parse ignores comments, blank lines and extra whitespace") {
  const auto tree = parse_topology("# rack layout\n\nroot\t  left\r\n  root right  \n#end\n");
  CHECK(tree.size() == 3);
  CHECK(tree.children(tree.root()).size() == 2);
  CHECK(tree.name(tree.children(tree.root())[0]) == "left");
}

TEST_CASE("children keep input order") {
  const auto tree = parse_topology("r z\nr a\nr m");
  std::vector<std::string> order;
  for (NodeId c : tree.children(tree.root())) order.push_back(tree.name(c));
  CHECK(order == std::vector<std::string>{"z", "a", "m"});
}

TEST_CASE("a single token declares a one-node tree") {
  const auto tree = parse_topology("solo\n");
  CHECK(tree.size() == 1);
  CHECK(tree.total_leaves() == 1);
  CHECK(tree.subtree_size(tree.root()) == 1);
  CHECK(tree.min_leaf_depth(tree.root()) == 0);
}

TEST_CASE("parse errors name their kind and line") {
  std::size_t line = 0;
  CHECK(parse_failure("r a\na r", &line) == ParseError::Kind::kCycle);
  CHECK(line == 2);
  CHECK(parse_failure("r r") == ParseError::Kind::kCycle);
  CHECK(parse_failure("r a\nb c\nc b", &line) == ParseError::Kind::kCycle);
  CHECK(line == 3);
  CHECK(parse_failure("r a\na b\nb a", &line) == ParseError::Kind::kMultipleParents);
  CHECK(line == 3);
  CHECK(parse_failure("r a\nr b\nr a", &line) == ParseError::Kind::kDuplicateEdge);
  CHECK(line == 3);
  CHECK(parse_failure("r a\ns b", &line) == ParseError::Kind::kMultipleRoots);
  CHECK(line == 2);
  CHECK(parse_failure("r a\nq a", &line) == ParseError::Kind::kMultipleParents);
  CHECK(line == 2);
  CHECK(parse_failure("r a\nlonely", &line) == ParseError::Kind::kOrphan);
  CHECK(line == 2);
  CHECK(parse_failure("") == ParseError::Kind::kEmpty);
  CHECK(parse_failure("# nothing\n\n") == ParseError::Kind::kEmpty);
  CHECK(parse_failure("r a b", &line) == ParseError::Kind::kMalformed);
  CHECK(line == 1);
}

TEST_CASE("parse error message carries the line") {
  try {
    parse_topology("r a\na r");
    FAIL("expected a cycle");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("preprocessing statistics") {
  const auto t13 = parse_topology(fixtures::kT13);
  CHECK(t13.size() == 13);
  CHECK(t13.leaf_count(t13.root()) == 9);
  CHECK(t13.leaf_count(fixtures::id(t13, "A")) == 3);
  CHECK(t13.leaf_count(fixtures::id(t13, "B")) == 6);
  CHECK(t13.min_leaf_depth(t13.root()) == 2);
  CHECK(t13.depth(fixtures::id(t13, "l1")) == 3);
  check_recurrences(t13);

  const auto path = parse_topology("a b\nb c\nc d");
  CHECK(path.min_leaf_depth(path.root()) == 3);
  CHECK(path.subtree_size(path.root()) == 4);
  CHECK(path.total_leaves() == 1);
}

TEST_CASE("random trees satisfy the recurrences") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const auto tree = generate_random_tree(1 + seed % 80, 1 + seed % 5, seed);
    check_recurrences(tree);
    const auto chains = generate_chain_heavy_tree(1 + seed % 120, seed);
    check_recurrences(chains);
  }
}

TEST_CASE("generate_random_tree contract") {
  const auto one = generate_random_tree(1, 3, 99);
  CHECK(one.size() == 1);
  CHECK(generate_random_tree(1, 0, 5).size() == 1);

  CHECK(serialize_topology(generate_random_tree(50, 3, 7)) ==
        serialize_topology(generate_random_tree(50, 3, 7)));
  CHECK(serialize_topology(generate_random_tree(50, 3, 7)) !=
        serialize_topology(generate_random_tree(50, 3, 8)));

  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto tree = generate_random_tree(12, 2, seed);
    CHECK(tree.size() == 12);
    for (NodeId u : tree.preorder()) CHECK(tree.children(u).size() <= 2);
  }
  const auto unary = generate_random_tree(6, 1, 3);
  CHECK(unary.total_leaves() == 1);
  CHECK(unary.min_leaf_depth(unary.root()) == 5);

  CHECK_THROWS_AS(generate_random_tree(5, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_random_tree(0, 2, 1), std::invalid_argument);
}

TEST_CASE("generate_chain_heavy_tree is exact and deterministic") {
  for (std::size_t n : {1, 2, 5, 40, 300}) {
    const auto tree = generate_chain_heavy_tree(n, 11);
    CHECK(tree.size() == n);
    CHECK(serialize_topology(tree) == serialize_topology(generate_chain_heavy_tree(n, 11)));
  }
}

TEST_CASE("serialize then parse reproduces the tree") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto tree = seed % 2 == 0 ? generate_random_tree(1 + seed % 60, 1 + seed % 4, seed)
                                    : generate_chain_heavy_tree(1 + seed % 60, seed);
    const auto back = parse_topology(serialize_topology(tree));
    REQUIRE(back.size() == tree.size());
    CHECK(back.name(back.root()) == tree.name(tree.root()));
    for (NodeId u : tree.preorder()) {
      const NodeId v = fixtures::id(back, tree.name(u));
      const auto a = tree.children(u);
      const auto b = back.children(v);
      REQUIRE(a.size() == b.size());
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(tree.name(a[i]) == back.name(b[i]));
    }
    CHECK(serialize_topology(back) == serialize_topology(tree));
  }
}

TEST_CASE("from_parents validates the table") {
  CHECK_THROWS_AS(FailureTree::from_parents({}, {}), std::invalid_argument);
  CHECK_THROWS_AS(FailureTree::from_parents({"a", "b"}, {std::nullopt, std::nullopt}),
                  std::invalid_argument);
  CHECK_THROWS_AS(FailureTree::from_parents({"a", "b", "c"},
                                            {std::nullopt, NodeId{2}, NodeId{1}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(FailureTree::from_parents({"a", "a"}, {std::nullopt, NodeId{0}}),
                  std::invalid_argument);
  const auto ok = FailureTree::from_parents({"a", "b"}, {std::nullopt, NodeId{0}});
  CHECK(ok.total_leaves() == 1);
}

TEST_CASE("placements hold distinct leaves") {
  const auto tree = parse_topology(fixtures::kT13);
  const auto p = fixtures::placement(tree, {"b2", "a2", "b1"});
  CHECK(p.rho() == 3);
  CHECK(p.contains(fixtures::id(tree, "a2")));
  CHECK_FALSE(p.contains(fixtures::id(tree, "l1")));
  CHECK(p == fixtures::placement(tree, {"a2", "b1", "b2"}));

  CHECK_THROWS_AS(fixtures::placement(tree, {"A"}), std::invalid_argument);
  CHECK_THROWS_AS(fixtures::placement(tree, {"nope"}), std::invalid_argument);
  CHECK_THROWS_AS(fixtures::placement(tree, {"b1", "b1"}), std::invalid_argument);
  CHECK_THROWS_AS(Placement::of(tree, {NodeId{99}}), std::invalid_argument);
}
