#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "npoint/errors.hpp"
#include "npoint/rational.hpp"

namespace npoint {

inline constexpr int kMaxPartitionSize = 12;
inline constexpr int kMaxCosetSize = 10;

/// A partition of {0, ..., n-1} into nonempty blocks. Blocks are sorted internally and
/// ordered by their smallest element.
class SetPartition {
 public:
  /// Builds and validates (disjoint, covering, nonempty blocks).
  SetPartition(int n, std::vector<std::vector<int>> blocks);
  /// From a restricted growth string: element i goes to block rgs[i].
  static SetPartition from_restricted_growth(std::span<const int> rgs);

  int size() const noexcept { return n_; }
  int block_count() const noexcept { return static_cast<int>(blocks_.size()); }
  const std::vector<std::vector<int>>& blocks() const noexcept { return blocks_; }

  /// "{1,3}{2}" with 1-based labels.
  std::string to_string() const;

  friend bool operator==(const SetPartition&, const SetPartition&) = default;

 private:
  int n_;
  std::vector<std::vector<int>> blocks_;
};

/// All Bell(n) set partitions in restricted-growth-string lexicographic order.
std::vector<SetPartition> enumerate_set_partitions(int n, int cap = kMaxPartitionSize);

/// Bell numbers by the Bell triangle.
std::uint64_t bell_number(int n);

/// Block sums of x, one entry per block in block order.
template <class T>
std::vector<T> merge_vector(std::span<const T> x, const SetPartition& alpha) {
  if (static_cast<int>(x.size()) != alpha.size())
    throw DomainError("merge_vector: vector length does not match partition size");
  std::vector<T> out;
  out.reserve(alpha.block_count());
  for (const auto& block : alpha.blocks()) {
    T sum = x[block.front()];
    for (std::size_t k = 1; k < block.size(); ++k) sum = sum + x[block[k]];
    out.push_back(std::move(sum));
  }
  return out;
}

/// Orderings of {0, ..., n-1} modulo rotation. Each representative starts with 0;
/// the list is lexicographic.
struct CyclicCosetSet {
  int n = 0;
  std::vector<std::vector<int>> representatives;
};

CyclicCosetSet cyclic_coset_reps(int n, int cap = kMaxCosetSize);

/// (-1)^{l-1} (l-1)!
Integer mobius_weight(int blocks);

/// Integer partition with non-increasing positive parts.
class IntegerPartition {
 public:
  IntegerPartition() = default;
  explicit IntegerPartition(std::vector<int> parts);

  const std::vector<int>& parts() const noexcept { return parts_; }
  int length() const noexcept { return static_cast<int>(parts_.size()); }
  int weight() const noexcept;
  bool all_odd() const noexcept;
  std::map<int, int> multiplicities() const;
  /// Product of factorials of part multiplicities.
  Integer automorphisms() const;
  std::string to_string() const;

  friend auto operator<=>(const IntegerPartition&, const IntegerPartition&) = default;

 private:
  std::vector<int> parts_;
};

/// All partitions of `total` into odd parts, parts non-increasing.
std::vector<IntegerPartition> odd_partitions(int total);

/// Values indexed by subsets of {0, ..., n-1}; entry `mask` holds the value on that subset.
/// Entry 0 (the empty subset) is ignored by the transforms. T needs T + T, T * T and T * Rational.
template <class T>
using SubsetTable = std::vector<T>;

namespace detail {

std::vector<int> mask_elements(unsigned mask);

template <class T, class Weight>
SubsetTable<T> partition_transform(const SubsetTable<T>& table, int n, Weight weight, const T& zero) {
  if (n < 1 || n > kMaxPartitionSize) throw SizeLimitError("subset table arity out of range");
  if (table.size() != (std::size_t{1} << n)) throw MissingDataError("subset table must cover all subsets");
  SubsetTable<T> out(table.size(), zero);
  for (unsigned mask = 1; mask < table.size(); ++mask) {
    const std::vector<int> elems = mask_elements(mask);
    T acc = zero;
    for (const SetPartition& alpha : enumerate_set_partitions(static_cast<int>(elems.size()))) {
      auto block_mask = [&](const std::vector<int>& block) {
        unsigned sub = 0;
        for (int local : block) sub |= 1u << elems[local];
        return sub;
      };
      T prod = table[block_mask(alpha.blocks()[0])];
      for (int b = 1; b < alpha.block_count(); ++b) prod = prod * table[block_mask(alpha.blocks()[b])];
      acc = acc + prod * weight(alpha.block_count());
    }
    out[mask] = std::move(acc);
  }
  return out;
}

}  // namespace detail

/// Connected part: Q°(S) = sum over partitions alpha of S of
/// (-1)^{l-1}(l-1)! prod_{B in alpha} Q(B), for every subset S.
template <class T>
SubsetTable<T> connected_part(const SubsetTable<T>& table, int n, const T& zero) {
  return detail::partition_transform(
      table, n, [](int blocks) { return Rational(mobius_weight(blocks)); }, zero);
}

/// Inverse transform: D(S) = sum over partitions alpha of S of prod_{B in alpha} C(B).
template <class T>
SubsetTable<T> disconnected_assembly(const SubsetTable<T>& table, int n, const T& zero) {
  return detail::partition_transform(table, n, [](int) { return Rational(1); }, zero);
}

/// Connected part of a numeric evaluator: q(block) returns Q on the given labels.
template <class T, class Q>
T connected_value(int n, Q&& q, const T& zero) {
  T acc = zero;
  for (const SetPartition& alpha : enumerate_set_partitions(n)) {
    T prod = q(alpha.blocks()[0]);
    for (int b = 1; b < alpha.block_count(); ++b) prod = prod * q(alpha.blocks()[b]);
    const Integer w = mobius_weight(alpha.block_count());
    if constexpr (std::is_arithmetic_v<T>)
      acc = acc + prod * static_cast<T>(w.get_si());
    else
      acc = acc + prod * Rational(w);
  }
  return acc;
}

}  // namespace npoint
