#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "replica/model.hpp"

namespace replica {

using Count = std::int64_t;

/// Aggregate truncated at its highest attainable failure number. Storage is
/// ascending (index 0 holds p_0); logical entries above the capacity are
/// zero. Entries may be negative when the vector is a difference.
class CompactAggregate {
 public:
  CompactAggregate() : entries_(1, 0) {}
  explicit CompactAggregate(Replicas capacity) : entries_(std::size_t{capacity} + 1, 0) {}

  /// `ascending[i]` is p_i. Must be non-empty.
  static CompactAggregate from_entries(std::vector<Count> ascending);

  Replicas capacity() const { return static_cast<Replicas>(entries_.size() - 1); }
  std::span<const Count> entries() const { return entries_; }

  /// Logical read; zero above the capacity.
  Count operator[](std::size_t index) const {
    return index < entries_.size() ? entries_[index] : 0;
  }

  /// Adds `by` at `index`; throws std::out_of_range above the capacity.
  void bump(Replicas index, Count by = 1);

  /// Zero-extends to at least `capacity`.
  void grow(Replicas capacity);
  /// Cuts to `capacity`; throws std::logic_error if a nonzero entry would be lost.
  void shrink(Replicas capacity);

  Count total() const;

  CompactAggregate& operator+=(const CompactAggregate& other);
  CompactAggregate& operator-=(const CompactAggregate& other);

  friend std::strong_ordering operator<=>(const CompactAggregate& a, const CompactAggregate& b);
  friend bool operator==(const CompactAggregate& a, const CompactAggregate& b) {
    return (a <=> b) == std::strong_ordering::equal;
  }

 private:
  std::vector<Count> entries_;
};

/// Pointwise b - a; signed, capacity is the larger of the two.
using AggregateDiff = CompactAggregate;

CompactAggregate operator+(CompactAggregate a, const CompactAggregate& b);
AggregateDiff operator-(CompactAggregate a, const CompactAggregate& b);

/// Sums vectors of mixed capacity into one buffer sized to the largest,
/// touching each input entry once.
CompactAggregate sum(std::span<const CompactAggregate* const> parts);

/// Failure aggregate <p_rho, ..., p_0> of a placement of rho replicas.
class FailureAggregate {
 public:
  explicit FailureAggregate(Replicas rho = 0) : entries_(std::size_t{rho} + 1, 0) {}

  /// `ascending[i]` is p_i; length rho + 1.
  static FailureAggregate from_entries(std::vector<Count> ascending);
  /// Display order, p_rho first.
  static FailureAggregate from_display(std::span<const Count> descending);

  Replicas rho() const { return static_cast<Replicas>(entries_.size() - 1); }
  std::span<const Count> entries() const { return entries_; }
  Count operator[](std::size_t index) const {
    return index < entries_.size() ? entries_[index] : 0;
  }
  void bump(Replicas index, Count by = 1);
  Count total() const;

  /// p_rho first, as rendered.
  std::vector<Count> display_order() const;

  friend std::strong_ordering operator<=>(const FailureAggregate& a, const FailureAggregate& b);
  friend bool operator==(const FailureAggregate& a, const FailureAggregate& b) {
    return (a <=> b) == std::strong_ordering::equal;
  }

 private:
  std::vector<Count> entries_;
};

/// Lexicographic order read from the highest index down; shorter operands
/// are zero-extended.
std::strong_ordering lex_compare(const CompactAggregate& a, const CompactAggregate& b);
std::strong_ordering lex_compare(const FailureAggregate& a, const FailureAggregate& b);

/// Zero-extends to rho + 1 entries. Throws std::invalid_argument if the
/// capacity exceeds rho.
FailureAggregate expand(const CompactAggregate& compact, Replicas rho);
/// Inverse of expand. Throws std::invalid_argument if a nonzero entry lies
/// above `capacity`.
CompactAggregate truncate(const FailureAggregate& aggregate, Replicas capacity);

/// `<p_rho,...,p_0>`
std::string to_string(const FailureAggregate& aggregate);
std::string to_string(const CompactAggregate& aggregate);
/// Parses the `<p_rho,...,p_0>` rendering; throws std::invalid_argument.
FailureAggregate parse_aggregate(std::string_view text);

std::ostream& operator<<(std::ostream& out, const FailureAggregate& aggregate);
std::ostream& operator<<(std::ostream& out, const CompactAggregate& aggregate);

}  // namespace replica
