#include "npoint/combinatorics.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace npoint {

SetPartition::SetPartition(int n, std::vector<std::vector<int>> blocks) : n_(n), blocks_(std::move(blocks)) {
  if (n < 1) throw DomainError("set partition of an empty set");
  std::vector<int> seen(n, 0);
  for (auto& block : blocks_) {
    if (block.empty()) throw DomainError("set partition has an empty block");
    std::sort(block.begin(), block.end());
    for (int e : block) {
      if (e < 0 || e >= n) throw DomainError("set partition element out of range");
      if (seen[e]++) throw DomainError("set partition blocks overlap");
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) throw DomainError("set partition does not cover the set");
  std::sort(blocks_.begin(), blocks_.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

SetPartition SetPartition::from_restricted_growth(std::span<const int> rgs) {
  const int n = static_cast<int>(rgs.size());
  const int count = n == 0 ? 0 : *std::max_element(rgs.begin(), rgs.end()) + 1;
  std::vector<std::vector<int>> blocks(count);
  for (int i = 0; i < n; ++i) blocks.at(rgs[i]).push_back(i);
  return SetPartition(n, std::move(blocks));
}

std::string SetPartition::to_string() const {
  std::ostringstream os;
  for (const auto& block : blocks_) {
    os << '{';
    for (std::size_t k = 0; k < block.size(); ++k) os << (k ? "," : "") << block[k] + 1;
    os << '}';
  }
  return os.str();
}

std::vector<SetPartition> enumerate_set_partitions(int n, int cap) {
  if (n < 1) throw DomainError("enumerate_set_partitions: n must be positive");
  if (n > cap) throw SizeLimitError("enumerate_set_partitions: n = " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
  // Restricted growth strings a[0] = 0, a[i] <= 1 + max(a[0..i-1]), visited lexicographically.
  std::vector<SetPartition> out;
  std::vector<int> a(n, 0), prefix_max(n, 0);
  while (true) {
    out.push_back(SetPartition::from_restricted_growth(a));
    int i = n - 1;
    while (i > 0 && a[i] > prefix_max[i - 1]) --i;
    if (i == 0) break;
    ++a[i];
    prefix_max[i] = std::max(prefix_max[i - 1], a[i]);
    for (int j = i + 1; j < n; ++j) {
      a[j] = 0;
      prefix_max[j] = prefix_max[i];
    }
  }
  return out;
}

std::uint64_t bell_number(int n) {
  if (n < 0) throw DomainError("bell_number: negative n");
  // Row k of the triangle starts with the last entry of row k-1; B(k) is the first entry of row k.
  std::vector<std::uint64_t> row{1};
  for (int k = 0; k < n; ++k) {
    std::vector<std::uint64_t> next{row.back()};
    for (std::uint64_t v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.front();
}

CyclicCosetSet cyclic_coset_reps(int n, int cap) {
  if (n < 1) throw DomainError("cyclic_coset_reps: n must be positive");
  if (n > cap) throw SizeLimitError("cyclic_coset_reps: n = " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
  CyclicCosetSet set;
  set.n = n;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  // Rotating any ordering so that label 0 comes first is a bijection onto these.
  do {
    set.representatives.push_back(perm);
  } while (std::next_permutation(perm.begin() + 1, perm.end()));
  return set;
}

Integer mobius_weight(int blocks) {
  Integer w = factorial(static_cast<unsigned>(blocks - 1));
  return (blocks - 1) % 2 ? Integer(-w) : w;
}

IntegerPartition::IntegerPartition(std::vector<int> parts) : parts_(std::move(parts)) {
  for (int p : parts_)
    if (p <= 0) throw DomainError("integer partition parts must be positive");
  std::sort(parts_.begin(), parts_.end(), std::greater<>());
}

int IntegerPartition::weight() const noexcept { return std::accumulate(parts_.begin(), parts_.end(), 0); }

bool IntegerPartition::all_odd() const noexcept {
  return std::all_of(parts_.begin(), parts_.end(), [](int p) { return p % 2 == 1; });
}

std::map<int, int> IntegerPartition::multiplicities() const {
  std::map<int, int> m;
  for (int p : parts_) ++m[p];
  return m;
}

Integer IntegerPartition::automorphisms() const {
  Integer r = 1;
  for (const auto& [part, mult] : multiplicities()) r *= factorial(static_cast<unsigned>(mult));
  return r;
}

std::string IntegerPartition::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t k = 0; k < parts_.size(); ++k) os << (k ? "," : "") << parts_[k];
  os << ')';
  return os.str();
}

namespace {

void odd_partitions_rec(int remaining, int max_part, std::vector<int>& parts, std::vector<IntegerPartition>& out) {
  if (remaining == 0) {
    out.emplace_back(parts);
    return;
  }
  for (int p = std::min(max_part, remaining); p >= 1; --p) {
    if (p % 2 == 0) continue;
    parts.push_back(p);
    odd_partitions_rec(remaining - p, p, parts, out);
    parts.pop_back();
  }
}

}  // namespace

std::vector<IntegerPartition> odd_partitions(int total) {
  if (total < 0) throw DomainError("odd_partitions: negative total");
  std::vector<IntegerPartition> out;
  std::vector<int> parts;
  odd_partitions_rec(total, total, parts, out);
  return out;
}

namespace detail {

std::vector<int> mask_elements(unsigned mask) {
  std::vector<int> e;
  for (int i = 0; mask != 0; ++i, mask >>= 1)
    if (mask & 1u) e.push_back(i);
  return e;
}

}  // namespace detail

}  // namespace npoint
