#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "replica/model.hpp"

namespace fixtures {

// Two racks under a root. Rack A holds a two-leaf shelf A1 and a lone leaf
// a2; rack B holds six leaves. 13 nodes, 9 leaves.
inline constexpr const char* kT13 =
    "root A\n"
    "root B\n"
    "A A1\n"
    "A a2\n"
    "A1 l1\n"
    "A1 l2\n"
    "B b1\n"
    "B b2\n"
    "B b3\n"
    "B b4\n"
    "B b5\n"
    "B b6\n";

inline std::string read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

inline replica::NodeId id(const replica::FailureTree& tree, const std::string& name) {
  auto found = tree.find(name);
  if (!found) throw std::runtime_error("no node named " + name);
  return *found;
}

inline replica::Placement placement(const replica::FailureTree& tree,
                                    const std::vector<std::string>& names) {
  return replica::Placement::of_names(tree, names);
}

// Random tree with at most `max_leaves` leaves, deterministic in the seed.
inline replica::FailureTree small_tree(std::uint64_t seed, std::uint32_t max_leaves = 12) {
  std::mt19937_64 rng(seed);
  for (std::uint64_t attempt = 0;; ++attempt) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 30)(rng);
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
    auto tree = replica::generate_random_tree(n, k, seed * 7919 + attempt);
    if (tree.total_leaves() <= max_leaves) return tree;
  }
}

// Random subset of `rho` leaves.
inline replica::Placement random_placement(const replica::FailureTree& tree, replica::Replicas rho,
                                           std::mt19937_64& rng) {
  std::vector<replica::NodeId> leaves(tree.leaves().begin(), tree.leaves().end());
  std::shuffle(leaves.begin(), leaves.end(), rng);
  leaves.resize(rho);
  return replica::Placement::of(tree, leaves);
}

}  // namespace fixtures
