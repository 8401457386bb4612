#include "replica/model.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <sstream>

namespace replica {

ParseError::ParseError(Kind kind, std::size_t line, const std::string& detail)
    : std::runtime_error(line == 0 ? std::string(to_string(kind)) + ": " + detail
                                   : "line " + std::to_string(line) + ": " +
                                         to_string(kind) + ": " + detail),
      kind_(kind),
      line_(line) {}

const char* to_string(ParseError::Kind kind) {
  switch (kind) {
    case ParseError::Kind::kEmpty: return "empty topology";
    case ParseError::Kind::kMalformed: return "malformed line";
    case ParseError::Kind::kDuplicateEdge: return "duplicate edge";
    case ParseError::Kind::kMultipleParents: return "multiple parents";
    case ParseError::Kind::kCycle: return "cycle";
    case ParseError::Kind::kMultipleRoots: return "multiple roots";
    case ParseError::Kind::kOrphan: return "orphan node";
  }
  return "parse error";
}

FailureTree FailureTree::from_parents(std::vector<std::string> names,
                                      std::vector<std::optional<NodeId>> parents) {
  if (names.empty()) throw std::invalid_argument("tree must have at least one node");
  if (names.size() != parents.size()) {
    throw std::invalid_argument("names and parents differ in length");
  }
  if (names.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("too many nodes");
  }
  FailureTree tree;
  const std::size_t n = names.size();
  tree.parent_.assign(n, -1);
  std::vector<std::vector<NodeId>> children(n);
  std::optional<NodeId> root;
  for (std::size_t i = 0; i < n; ++i) {
    if (!parents[i]) {
      if (root) throw std::invalid_argument("more than one root");
      root = NodeId{static_cast<std::uint32_t>(i)};
      continue;
    }
    const NodeId p = *parents[i];
    if (p.value >= n || p.value == i) throw std::invalid_argument("bad parent index");
    tree.parent_[i] = p.value;
    children[p.value].push_back(NodeId{static_cast<std::uint32_t>(i)});
  }
  if (!root) throw std::invalid_argument("no root");
  tree.root_ = *root;
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, inserted] = tree.index_.emplace(names[i], NodeId{static_cast<std::uint32_t>(i)});
    if (!inserted) throw std::invalid_argument("duplicate node name '" + names[i] + "'");
  }
  tree.names_ = std::move(names);
  tree.preprocess(children);
  if (tree.preorder_.size() != n) throw std::invalid_argument("parent table has a cycle");
  return tree;
}

std::optional<NodeId> FailureTree::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<NodeId> FailureTree::parent(NodeId u) const {
  const std::int64_t p = parent_.at(u.value);
  if (p < 0) return std::nullopt;
  return NodeId{static_cast<std::uint32_t>(p)};
}

void FailureTree::preprocess(const std::vector<std::vector<NodeId>>& lists) {
  const std::size_t n = names_.size();
  child_offset_.assign(n + 1, 0);
  child_list_.clear();
  child_list_.reserve(n);
  for (std::size_t u = 0; u < n; ++u) {
    child_list_.insert(child_list_.end(), lists[u].begin(), lists[u].end());
    child_offset_[u + 1] = static_cast<std::uint32_t>(child_list_.size());
  }
  preorder_.clear();
  preorder_.reserve(n);
  leaves_.clear();
  depth_.assign(n, 0);

  std::vector<NodeId> stack{root_};
  std::vector<bool> seen(n, false);
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    if (seen[u.value]) return;  // cycle; caller checks preorder size
    seen[u.value] = true;
    preorder_.push_back(u);
    const auto kids = this->children(u);
    if (kids.empty()) leaves_.push_back(u);
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
      depth_[it->value] = depth_[u.value] + 1;
      stack.push_back(*it);
    }
  }

  leaf_count_.assign(n, 0);
  subtree_size_.assign(n, 1);
  min_leaf_depth_.assign(n, 0);
  for (auto it = preorder_.rbegin(); it != preorder_.rend(); ++it) {
    const auto u = it->value;
    const auto kids = this->children(NodeId{u});
    if (kids.empty()) {
      leaf_count_[u] = 1;
      continue;
    }
    std::uint32_t leaves = 0;
    std::uint32_t size = 1;
    std::uint32_t shallowest = std::numeric_limits<std::uint32_t>::max();
    for (NodeId c : kids) {
      leaves += leaf_count_[c.value];
      size += subtree_size_[c.value];
      shallowest = std::min(shallowest, min_leaf_depth_[c.value]);
    }
    leaf_count_[u] = leaves;
    subtree_size_[u] = size;
    min_leaf_depth_[u] = shallowest + 1;
  }
}

namespace {

// Union-find over node indices; used to detect cycles while edges stream in.
class DisjointSets {
 public:
  std::uint32_t add() {
    parent_.push_back(static_cast<std::uint32_t>(parent_.size()));
    return parent_.back();
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::uint32_t> parent_;
};

struct EdgeHash {
  std::size_t operator()(std::uint64_t key) const noexcept { return std::hash<std::uint64_t>{}(key); }
};

}  // namespace

FailureTree parse_topology(std::string_view text) {
  std::vector<std::string> names;
  std::unordered_map<std::string, std::uint32_t> index;
  std::vector<std::size_t> first_line;
  std::vector<std::optional<NodeId>> parents;
  std::vector<std::size_t> parent_line;
  std::vector<std::vector<NodeId>> children;
  std::vector<std::pair<std::uint32_t, std::size_t>> declarations;
  std::unordered_map<std::uint64_t, std::size_t, EdgeHash> edges;
  DisjointSets components;

  auto intern = [&](const std::string& token, std::size_t line) {
    auto [it, inserted] = index.emplace(token, static_cast<std::uint32_t>(names.size()));
    if (inserted) {
      names.push_back(token);
      first_line.push_back(line);
      parents.emplace_back();
      parent_line.push_back(0);
      children.emplace_back();
      components.add();
    }
    return it->second;
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool saw_edge = false;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
      if (j > i) tokens.emplace_back(line.substr(i, j - i));
      i = j;
    }
    if (tokens.empty() || tokens.front().front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    if (tokens.size() > 2) {
      throw ParseError(ParseError::Kind::kMalformed, line_no,
                       "expected '<parent> <child>', got " + std::to_string(tokens.size()) + " tokens");
    }
    if (tokens.size() == 1) {
      declarations.emplace_back(intern(tokens[0], line_no), line_no);
    } else {
      if (tokens[0] == tokens[1]) {
        throw ParseError(ParseError::Kind::kCycle, line_no, "'" + tokens[0] + "' is its own parent");
      }
      const std::uint32_t p = intern(tokens[0], line_no);
      const std::uint32_t c = intern(tokens[1], line_no);
      const std::uint64_t key = (static_cast<std::uint64_t>(p) << 32) | c;
      if (auto it = edges.find(key); it != edges.end()) {
        throw ParseError(ParseError::Kind::kDuplicateEdge, line_no,
                         "edge '" + tokens[0] + " " + tokens[1] + "' already given on line " +
                             std::to_string(it->second));
      }
      edges.emplace(key, line_no);
      if (parents[c]) {
        throw ParseError(ParseError::Kind::kMultipleParents, line_no,
                         "'" + tokens[1] + "' already has parent '" + names[parents[c]->value] +
                             "' (line " + std::to_string(parent_line[c]) + ")");
      }
      // c has no parent yet, so it roots its component; p inside it closes a cycle.
      if (components.find(p) == components.find(c)) {
        throw ParseError(ParseError::Kind::kCycle, line_no,
                         "edge '" + tokens[0] + " " + tokens[1] + "' closes a cycle");
      }
      components.unite(c, p);
      parents[c] = NodeId{p};
      parent_line[c] = line_no;
      children[p].push_back(NodeId{c});
      saw_edge = true;
    }
    if (end == text.size()) break;
  }

  if (names.empty()) throw ParseError(ParseError::Kind::kEmpty, 0, "no nodes or edges");
  if (saw_edge) {
    for (auto [node, line] : declarations) {
      if (!parents[node] && children[node].empty()) {
        throw ParseError(ParseError::Kind::kOrphan, line,
                         "'" + names[node] + "' is not connected to any edge");
      }
    }
  }
  std::optional<std::uint32_t> root;
  for (std::uint32_t u = 0; u < names.size(); ++u) {
    if (parents[u]) continue;
    if (root) {
      throw ParseError(ParseError::Kind::kMultipleRoots, first_line[u],
                       "both '" + names[*root] + "' and '" + names[u] + "' have no parent");
    }
    root = u;
  }

  std::vector<std::optional<NodeId>> table(parents.begin(), parents.end());
  FailureTree tree = FailureTree::from_parents(std::move(names), std::move(table));
  // from_parents orders children by index; restore input order.
  tree.preprocess(children);
  return tree;
}

std::string serialize_topology(const FailureTree& tree) {
  std::ostringstream out;
  if (tree.size() == 1) {
    out << tree.name(tree.root()) << '\n';
    return out.str();
  }
  for (NodeId u : tree.preorder()) {
    for (NodeId c : tree.children(u)) out << tree.name(u) << ' ' << tree.name(c) << '\n';
  }
  return out.str();
}

FailureTree generate_random_tree(std::size_t nodes, std::size_t max_children,
                                 std::uint64_t seed) {
  if (nodes == 0) throw std::invalid_argument("tree needs at least one node");
  if (max_children == 0 && nodes > 1) {
    throw std::invalid_argument("max_children must be positive for more than one node");
  }
  std::mt19937_64 rng(seed);
  std::vector<std::string> names;
  names.reserve(nodes);
  std::vector<std::optional<NodeId>> parents(nodes);
  std::vector<std::uint32_t> arity(nodes, 0);
  std::vector<std::uint32_t> open;  // nodes that can still take a child
  for (std::size_t i = 0; i < nodes; ++i) {
    names.push_back("n" + std::to_string(i));
    if (i > 0) {
      std::uniform_int_distribution<std::size_t> pick(0, open.size() - 1);
      const std::size_t slot = pick(rng);
      const std::uint32_t p = open[slot];
      parents[i] = NodeId{p};
      if (++arity[p] == max_children) {
        open[slot] = open.back();
        open.pop_back();
      }
    }
    open.push_back(static_cast<std::uint32_t>(i));
  }
  return FailureTree::from_parents(std::move(names), std::move(parents));
}

FailureTree generate_chain_heavy_tree(std::size_t nodes, std::uint64_t seed) {
  if (nodes == 0) throw std::invalid_argument("tree needs at least one node");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<std::optional<NodeId>> parents;
  parents.reserve(nodes);
  parents.emplace_back();

  auto add = [&](std::uint32_t parent) -> std::optional<std::uint32_t> {
    if (parents.size() >= nodes) return std::nullopt;
    parents.emplace_back(NodeId{parent});
    return static_cast<std::uint32_t>(parents.size() - 1);
  };

  // Breadth-first growth keeps every prefix a valid tree, so the node budget
  // can cut the template anywhere.
  std::vector<std::uint32_t> frontier{0};
  std::size_t head = 0;
  while (parents.size() < nodes) {
    if (head == frontier.size()) frontier.push_back(static_cast<std::uint32_t>(parents.size() - 1));
    const std::uint32_t spine = frontier[head++];
    const int decorations = 1 + static_cast<int>(coin(rng) < 0.5);
    for (int d = 0; d < decorations; ++d) {
      auto side = add(spine);
      if (!side) break;
      const double shape = coin(rng);
      if (shape < 0.6) continue;  // a bare leaf
      const int fan = shape < 0.85 ? 2 : 3;
      for (int f = 0; f < fan; ++f) add(*side);
    }
    const int branches = coin(rng) < 0.15 ? 2 : 1;
    for (int b = 0; b < branches; ++b) {
      auto next = add(spine);
      if (!next) break;
      if (coin(rng) < 0.25) {
        const int run = 1 + static_cast<int>(coin(rng) * 3.0);
        for (int r = 0; r < run; ++r) {
          auto deeper = add(*next);
          if (!deeper) break;
          next = deeper;
        }
      }
      frontier.push_back(*next);
    }
  }

  std::vector<std::string> names;
  names.reserve(parents.size());
  for (std::size_t i = 0; i < parents.size(); ++i) names.push_back("n" + std::to_string(i));
  return FailureTree::from_parents(std::move(names), std::move(parents));
}

Placement Placement::of(const FailureTree& tree, std::vector<NodeId> leaves) {
  for (NodeId u : leaves) {
    if (!tree.contains(u)) {
      throw std::invalid_argument("unknown node index " + std::to_string(u.value));
    }
    if (!tree.is_leaf(u)) {
      throw std::invalid_argument("'" + tree.name(u) + "' is not a leaf");
    }
  }
  std::sort(leaves.begin(), leaves.end());
  if (auto dup = std::adjacent_find(leaves.begin(), leaves.end()); dup != leaves.end()) {
    throw std::invalid_argument("'" + tree.name(*dup) + "' placed twice");
  }
  Placement p;
  p.leaves_ = std::move(leaves);
  return p;
}

Placement Placement::of_names(const FailureTree& tree, std::span<const std::string> names) {
  std::vector<NodeId> ids;
  ids.reserve(names.size());
  for (const auto& name : names) {
    auto id = tree.find(name);
    if (!id) throw std::invalid_argument("unknown node '" + name + "'");
    ids.push_back(*id);
  }
  return of(tree, std::move(ids));
}

bool Placement::contains(NodeId u) const {
  return std::binary_search(leaves_.begin(), leaves_.end(), u);
}

}  // namespace replica
