#include "replica/aggregate.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace replica {
namespace {

template <typename ReadA, typename ReadB>
std::strong_ordering compare_from_top(std::size_t top, ReadA&& a, ReadB&& b) {
  for (std::size_t i = top + 1; i-- > 0;) {
    if (auto order = a(i) <=> b(i); order != 0) return order;
  }
  return std::strong_ordering::equal;
}

std::string render_descending(std::span<const Count> ascending) {
  std::string out = "<";
  for (std::size_t i = ascending.size(); i-- > 0;) {
    out += std::to_string(ascending[i]);
    if (i != 0) out += ',';
  }
  out += '>';
  return out;
}

}  // namespace

CompactAggregate CompactAggregate::from_entries(std::vector<Count> ascending) {
  if (ascending.empty()) throw std::invalid_argument("aggregate needs at least one entry");
  CompactAggregate c;
  c.entries_ = std::move(ascending);
  return c;
}

void CompactAggregate::bump(Replicas index, Count by) {
  if (index >= entries_.size()) {
    throw std::out_of_range("bump index " + std::to_string(index) + " above capacity " +
                            std::to_string(capacity()));
  }
  entries_[index] += by;
}

void CompactAggregate::grow(Replicas capacity) {
  if (std::size_t{capacity} + 1 > entries_.size()) entries_.resize(std::size_t{capacity} + 1, 0);
}

void CompactAggregate::shrink(Replicas capacity) {
  const std::size_t keep = std::size_t{capacity} + 1;
  if (keep >= entries_.size()) return;
  if (std::any_of(entries_.begin() + static_cast<std::ptrdiff_t>(keep), entries_.end(),
                  [](Count v) { return v != 0; })) {
    throw std::logic_error("shrinking would drop a nonzero entry");
  }
  entries_.resize(keep);
}

Count CompactAggregate::total() const {
  return std::accumulate(entries_.begin(), entries_.end(), Count{0});
}

CompactAggregate& CompactAggregate::operator+=(const CompactAggregate& other) {
  grow(other.capacity());
  for (std::size_t i = 0; i < other.entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

CompactAggregate& CompactAggregate::operator-=(const CompactAggregate& other) {
  grow(other.capacity());
  for (std::size_t i = 0; i < other.entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

std::strong_ordering operator<=>(const CompactAggregate& a, const CompactAggregate& b) {
  return lex_compare(a, b);
}

CompactAggregate operator+(CompactAggregate a, const CompactAggregate& b) {
  a += b;
  return a;
}

AggregateDiff operator-(CompactAggregate a, const CompactAggregate& b) {
  a -= b;
  return a;
}

CompactAggregate sum(std::span<const CompactAggregate* const> parts) {
  Replicas capacity = 0;
  for (const auto* part : parts) capacity = std::max(capacity, part->capacity());
  CompactAggregate out(capacity);
  for (const auto* part : parts) out += *part;
  return out;
}

FailureAggregate FailureAggregate::from_entries(std::vector<Count> ascending) {
  if (ascending.empty()) throw std::invalid_argument("aggregate needs at least one entry");
  FailureAggregate f;
  f.entries_ = std::move(ascending);
  return f;
}

FailureAggregate FailureAggregate::from_display(std::span<const Count> descending) {
  return from_entries(std::vector<Count>(descending.rbegin(), descending.rend()));
}

void FailureAggregate::bump(Replicas index, Count by) {
  if (index >= entries_.size()) {
    throw std::out_of_range("bump index " + std::to_string(index) + " above rho " +
                            std::to_string(rho()));
  }
  entries_[index] += by;
}

Count FailureAggregate::total() const {
  return std::accumulate(entries_.begin(), entries_.end(), Count{0});
}

std::vector<Count> FailureAggregate::display_order() const {
  return {entries_.rbegin(), entries_.rend()};
}

std::strong_ordering operator<=>(const FailureAggregate& a, const FailureAggregate& b) {
  return lex_compare(a, b);
}

std::strong_ordering lex_compare(const CompactAggregate& a, const CompactAggregate& b) {
  const std::size_t top = std::max(a.capacity(), b.capacity());
  return compare_from_top(top, [&](std::size_t i) { return a[i]; },
                          [&](std::size_t i) { return b[i]; });
}

std::strong_ordering lex_compare(const FailureAggregate& a, const FailureAggregate& b) {
  const std::size_t top = std::max(a.rho(), b.rho());
  return compare_from_top(top, [&](std::size_t i) { return a[i]; },
                          [&](std::size_t i) { return b[i]; });
}

FailureAggregate expand(const CompactAggregate& compact, Replicas rho) {
  if (compact.capacity() > rho) {
    throw std::invalid_argument("capacity " + std::to_string(compact.capacity()) +
                                " exceeds rho " + std::to_string(rho));
  }
  std::vector<Count> entries(compact.entries().begin(), compact.entries().end());
  entries.resize(std::size_t{rho} + 1, 0);
  return FailureAggregate::from_entries(std::move(entries));
}

CompactAggregate truncate(const FailureAggregate& aggregate, Replicas capacity) {
  for (std::size_t i = std::size_t{capacity} + 1; i <= aggregate.rho(); ++i) {
    if (aggregate[i] != 0) {
      throw std::invalid_argument("entry p_" + std::to_string(i) + " is nonzero above capacity " +
                                  std::to_string(capacity));
    }
  }
  std::vector<Count> entries(std::size_t{capacity} + 1, 0);
  for (std::size_t i = 0; i < entries.size(); ++i) entries[i] = aggregate[i];
  return CompactAggregate::from_entries(std::move(entries));
}

std::string to_string(const FailureAggregate& aggregate) {
  return render_descending(aggregate.entries());
}

std::string to_string(const CompactAggregate& aggregate) {
  return render_descending(aggregate.entries());
}

FailureAggregate parse_aggregate(std::string_view text) {
  if (text.size() < 3 || text.front() != '<' || text.back() != '>') {
    throw std::invalid_argument("aggregate must look like <p_rho,...,p_0>");
  }
  std::string_view body = text.substr(1, text.size() - 2);
  std::vector<Count> descending;
  while (true) {
    const std::size_t comma = body.find(',');
    std::string_view field = body.substr(0, comma);
    Count value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size() || value < 0) {
      throw std::invalid_argument("bad aggregate entry '" + std::string(field) + "'");
    }
    descending.push_back(value);
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  return FailureAggregate::from_display(descending);
}

std::ostream& operator<<(std::ostream& out, const FailureAggregate& aggregate) {
  return out << to_string(aggregate);
}

std::ostream& operator<<(std::ostream& out, const CompactAggregate& aggregate) {
  return out << to_string(aggregate);
}

}  // namespace replica
