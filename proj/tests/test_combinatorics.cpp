#include <doctest.h>

#include <bit>
#include <numeric>
#include <random>
#include <set>

#include "npoint/combinatorics.hpp"

using namespace npoint;

namespace {

// Bell numbers through B(n+1) = sum_k C(n,k) B(k), independent of the triangle.
std::vector<std::uint64_t> bell_by_binomial_recurrence(int n_max) {
  std::vector<std::uint64_t> b{1};
  for (int n = 0; n < n_max; ++n) {
    std::uint64_t next = 0;
    for (int k = 0; k <= n; ++k) next += binomial(n, k).get_ui() * b[k];
    b.push_back(next);
  }
  return b;
}

}  // namespace

TEST_CASE("set partition counts") {
  const auto oracle = bell_by_binomial_recurrence(12);
  CHECK(enumerate_set_partitions(1).size() == 1);
  CHECK(enumerate_set_partitions(3).size() == 5);
  CHECK(enumerate_set_partitions(5).size() == 52);
  for (int n = 1; n <= 8; ++n) {
    CHECK(enumerate_set_partitions(n).size() == oracle[n]);
    CHECK(bell_number(n) == oracle[n]);
  }
  CHECK(bell_number(12) == oracle[12]);
  CHECK_THROWS_AS(enumerate_set_partitions(13), SizeLimitError);
}

TEST_CASE("set partitions are distinct, valid and ordered") {
  auto parts = enumerate_set_partitions(4);
  std::set<std::string> seen;
  for (const auto& p : parts) seen.insert(p.to_string());
  CHECK(seen.size() == parts.size());
  CHECK(parts.front().to_string() == "{1,2,3,4}");
  CHECK(parts.back().to_string() == "{1}{2}{3}{4}");
  CHECK(parts[1].to_string() == "{1,2,3}{4}");
  CHECK_THROWS_AS(SetPartition(3, {{0, 1}, {1, 2}}), DomainError);
  CHECK_THROWS_AS(SetPartition(3, {{0, 1}}), DomainError);
  CHECK_THROWS_AS(SetPartition(3, {{0, 1, 2}, {}}), DomainError);
}

TEST_CASE("merge_vector") {
  std::vector<int> x{10, 20, 30};
  SetPartition alpha(3, {{2, 0}, {1}});
  CHECK(merge_vector<int>(x, alpha) == std::vector<int>{40, 20});
  SetPartition singletons(3, {{0}, {1}, {2}});
  CHECK(merge_vector<int>(x, singletons) == x);
  std::vector<int> same{7, 7, 7};
  CHECK(merge_vector<int>(same, SetPartition(3, {{0, 1, 2}})) == std::vector<int>{21});
  CHECK_THROWS_AS(merge_vector<int>(std::vector<int>{1, 2}, alpha), DomainError);
  for (const auto& p : enumerate_set_partitions(5)) {
    std::vector<int> v{1, 4, 9, 16, 25};
    auto m = merge_vector<int>(v, p);
    CHECK(std::accumulate(m.begin(), m.end(), 0) == 55);
  }
}

TEST_CASE("cyclic coset representatives") {
  CHECK(cyclic_coset_reps(1).representatives.size() == 1);
  CHECK(cyclic_coset_reps(2).representatives == std::vector<std::vector<int>>{{0, 1}});
  CHECK(cyclic_coset_reps(3).representatives == std::vector<std::vector<int>>{{0, 1, 2}, {0, 2, 1}});
  CHECK(cyclic_coset_reps(4).representatives.size() == 6);
  CHECK_THROWS_AS(cyclic_coset_reps(11), SizeLimitError);
  // Every permutation of 5 labels is a rotation of exactly one representative.
  auto reps = cyclic_coset_reps(5).representatives;
  std::vector<int> perm{0, 1, 2, 3, 4};
  do {
    int matches = 0;
    for (const auto& r : reps)
      for (int shift = 0; shift < 5; ++shift) {
        bool same = true;
        for (int i = 0; i < 5; ++i) same = same && perm[i] == r[(i + shift) % 5];
        matches += same;
      }
    CHECK(matches == 1);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST_CASE("integer partitions") {
  IntegerPartition mu({1, 3, 1, 1});
  CHECK(mu.parts() == std::vector<int>{3, 1, 1, 1});
  CHECK(mu.automorphisms() == 6);
  CHECK(mu.weight() == 6);
  CHECK(mu.all_odd());
  CHECK(mu.to_string() == "(3,1,1,1)");
  CHECK_FALSE(IntegerPartition({2, 1}).all_odd());
  CHECK_THROWS_AS(IntegerPartition({0}), DomainError);
  // Odd partitions equinumerous with distinct-part partitions: 1,1,1,2,2,3,4,5,6,8,10 for n=0..10.
  const std::vector<std::size_t> expected{1, 1, 1, 2, 2, 3, 4, 5, 6, 8, 10};
  for (int n = 0; n <= 10; ++n) {
    auto ps = odd_partitions(n);
    CHECK(ps.size() == expected[n]);
    for (const auto& p : ps) {
      CHECK(p.all_odd());
      CHECK(p.weight() == n);
    }
  }
}

TEST_CASE("mobius weights sum to zero on the constant sequence") {
  for (int n = 1; n <= 8; ++n) {
    Integer sum = 0;
    for (const auto& p : enumerate_set_partitions(n)) sum += mobius_weight(p.block_count());
    CHECK(sum == (n == 1 ? 1 : 0));
  }
}

TEST_CASE("connected part of small tables") {
  // Q on subsets of {0,1}: masks 1,2,3.
  SubsetTable<Rational> q{0, Rational(2), Rational(3), Rational(11)};
  auto c = connected_part(q, 2, Rational(0));
  CHECK(c[3] == Rational(11 - 6));
  CHECK(c[1] == 2);

  // Three-point expansion: coefficient +2 on the triple product.
  SubsetTable<Rational> q3(8, Rational(0));
  q3[1] = 2;
  q3[2] = 3;
  q3[4] = 5;
  q3[3] = 7;
  q3[5] = 11;
  q3[6] = 13;
  q3[7] = 17;
  auto c3 = connected_part(q3, 3, Rational(0));
  CHECK(c3[7] == Rational(17 - 7 * 5 - 11 * 3 - 13 * 2 + 2 * 2 * 3 * 5));

  // Multiplicative tables have no connected part beyond singletons.
  SubsetTable<Rational> mult(16, Rational(1));
  const std::vector<Rational> f{Rational(1, 2), Rational(3), Rational(-2), Rational(5, 7)};
  for (unsigned m = 1; m < 16; ++m)
    for (int i = 0; i < 4; ++i)
      if (m & (1u << i)) mult[m] *= f[i];
  auto cm = connected_part(mult, 4, Rational(0));
  for (unsigned m = 1; m < 16; ++m)
    if (std::popcount(m) >= 2) CHECK(cm[m] == 0);

  CHECK_THROWS_AS(connected_part(SubsetTable<Rational>(5, Rational(0)), 3, Rational(0)), MissingDataError);
}

TEST_CASE("connected part and disconnected assembly are inverse") {
  std::mt19937 rng(12345);
  std::uniform_int_distribution<int> num(-50, 50), den(1, 9);
  for (int n = 1; n <= 5; ++n) {
    SubsetTable<Rational> table(std::size_t{1} << n, Rational(0));
    for (std::size_t m = 1; m < table.size(); ++m) {
      table[m] = Rational(num(rng), den(rng));
      table[m].canonicalize();
    }
    CHECK(connected_part(disconnected_assembly(table, n, Rational(0)), n, Rational(0)) == table);
    CHECK(disconnected_assembly(connected_part(table, n, Rational(0)), n, Rational(0)) == table);
  }
  SubsetTable<Rational> two{0, Rational(2), Rational(3), Rational(5)};
  CHECK(disconnected_assembly(two, 2, Rational(0))[3] == 5 + 6);
}

TEST_CASE("connected value of a numeric evaluator") {
  auto q = [](const std::vector<int>& block) {
    double s = 0;
    for (int i : block) s += i + 1;
    return s * s;
  };
  // Q(1,2) - Q(1)Q(2) = 9 - 4
  CHECK(connected_value(2, q, 0.0) == doctest::Approx(5.0));
}
