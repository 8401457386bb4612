#include "replica/division.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <stdexcept>

namespace replica {

FillClassification get_filled(std::span<const std::uint32_t> capacities, Replicas replicas) {
  const std::size_t m = capacities.size();
  const std::uint64_t total = std::accumulate(capacities.begin(), capacities.end(), std::uint64_t{0});
  if (replicas > total) {
    throw std::invalid_argument("cannot spread " + std::to_string(replicas) + " replicas over " +
                                std::to_string(total) + " leaves");
  }

  enum : std::uint8_t { kUndecided, kFilled, kUnfilled };
  std::vector<std::uint8_t> state(m, kUndecided);

  const bool all_filled = total == replicas;
  const bool none_filled =
      !all_filled && m > 0 &&
      std::all_of(capacities.begin(), capacities.end(),
                  [&](std::uint32_t c) { return c > replicas / m; });
  if (all_filled) {
    std::fill(state.begin(), state.end(), kFilled);
  } else if (none_filled) {
    std::fill(state.begin(), state.end(), kUnfilled);
  } else {
    std::vector<std::uint32_t> open(m);
    std::iota(open.begin(), open.end(), 0u);
    std::vector<std::uint32_t> below, at, above;
    std::int64_t filled_sum = 0;
    std::int64_t unfilled_n = 0;
    const auto by_capacity = [&](std::uint32_t a, std::uint32_t b) {
      return capacities[a] < capacities[b];
    };
    while (!open.empty()) {
      const auto mid = open.begin() + static_cast<std::ptrdiff_t>((open.size() - 1) / 2);
      std::nth_element(open.begin(), mid, open.end(), by_capacity);
      const std::int64_t median = capacities[*mid];

      below.clear();
      at.clear();
      above.clear();
      std::int64_t low_sum = 0;
      for (std::uint32_t i : open) {
        const std::int64_t c = capacities[i];
        if (c < median) {
          below.push_back(i);
          low_sum += c;
        } else if (c == median) {
          at.push_back(i);
          low_sum += c;
        } else {
          above.push_back(i);
        }
      }
      // Replicas left for the children above the median and those already unfilled.
      const std::int64_t rest = static_cast<std::int64_t>(replicas) - filled_sum - low_sum;
      if (rest > median * (unfilled_n + static_cast<std::int64_t>(above.size()))) {
        for (std::uint32_t i : below) state[i] = kFilled;
        for (std::uint32_t i : at) state[i] = kFilled;
        filled_sum += low_sum;
        open.swap(above);
      } else {
        for (std::uint32_t i : at) state[i] = kUnfilled;
        for (std::uint32_t i : above) state[i] = kUnfilled;
        unfilled_n += static_cast<std::int64_t>(at.size() + above.size());
        open.swap(below);
      }
    }
  }

  FillClassification result;
  for (std::uint32_t i = 0; i < m; ++i) {
    if (state[i] == kFilled) {
      result.filled.push_back(i);
      result.filled_total += capacities[i];
    } else {
      result.unfilled.push_back(i);
    }
  }
#ifndef NDEBUG
  if (!result.filled.empty() && !result.unfilled.empty()) {
    const std::uint64_t spread = replicas - result.filled_total;
    const std::uint64_t k = result.unfilled.size();
    for (std::uint32_t i : result.filled) assert(std::uint64_t{capacities[i]} * k < spread);
    for (std::uint32_t i : result.unfilled) assert(spread <= std::uint64_t{capacities[i]} * k);
  }
#endif
  return result;
}

ChildTargets child_targets(Replicas replicas, Replicas filled_total, std::uint32_t k) {
  if (k == 0) throw std::invalid_argument("no unfilled children to spread replicas over");
  if (filled_total >= replicas) {
    throw std::invalid_argument("unfilled children must receive at least one replica");
  }
  const Replicas spread = replicas - filled_total;
  ChildTargets t;
  t.ceil = (spread + k - 1) / k;
  t.floor = (spread - 1) / k;
  t.high_count = spread - k * t.floor;
  t.low_count = t.high_count - 1;
  return t;
}

std::vector<std::uint32_t> conquer_select(std::span<const AggregateDiff> diffs, std::uint32_t count) {
  const auto k = static_cast<std::uint32_t>(diffs.size());
  if (count > k) throw std::invalid_argument("cannot select more diffs than exist");
  std::vector<std::uint32_t> order(k);
  std::iota(order.begin(), order.end(), 0u);
  if (count == 0) return {};
  if (count == k) return order;

  std::nth_element(order.begin(), order.begin() + (count - 1), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) {
                     const auto cmp = lex_compare(diffs[a], diffs[b]);
                     return cmp < 0 || (cmp == 0 && a < b);
                   });
  std::vector<bool> chosen(k, false);
  for (std::uint32_t i = 0; i < count; ++i) chosen[order[i]] = true;
  std::vector<std::uint32_t> result;
  result.reserve(count);
  for (std::uint32_t i = 0; i < k; ++i) {
    if (chosen[i]) result.push_back(i);
  }
  return result;
}

void accumulate_filled(const FailureTree& tree, NodeId u, CompactAggregate& out) {
  std::vector<NodeId> stack{u};
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    const auto kids = tree.children(v);
    if (kids.empty()) {
      out.bump(1);
      continue;
    }
    out.bump(tree.leaf_count(v));
    stack.insert(stack.end(), kids.begin(), kids.end());
  }
}

CompactAggregate filled_aggregate(const FailureTree& tree, NodeId u) {
  CompactAggregate out(tree.leaf_count(u));
  accumulate_filled(tree, u, out);
  return out;
}

NodePlan& DivisionPlan::add(NodePlan plan) {
  auto& slot = slot_.at(plan.node.value);
  if (slot >= 0) throw std::logic_error("node planned twice");
  slot = static_cast<std::int64_t>(plans_.size());
  plans_.push_back(std::move(plan));
  return plans_.back();
}

const NodePlan* DivisionPlan::find(NodeId u) const {
  if (u.value >= slot_.size() || slot_[u.value] < 0) return nullptr;
  return &plans_[static_cast<std::size_t>(slot_[u.value])];
}

NodePlan* DivisionPlan::find(NodeId u) {
  if (u.value >= slot_.size() || slot_[u.value] < 0) return nullptr;
  return &plans_[static_cast<std::size_t>(slot_[u.value])];
}

std::string format_trace(const FailureTree& tree, const TraceEntry& entry) {
  return "node=" + tree.name(entry.node) + " r=" + std::to_string(entry.replicas) +
         " L=" + std::to_string(entry.filled_total) + " k=" + std::to_string(entry.unfilled) +
         " ceil=" + std::to_string(entry.ceil) + " floor=" + std::to_string(entry.floor);
}

}  // namespace replica
