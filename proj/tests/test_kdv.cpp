#include <doctest.h>

#include "npoint/combinatorics.hpp"
#include "npoint/errors.hpp"
#include "npoint/kdv.hpp"

using namespace npoint;

TEST_CASE("asymptotic coefficients") {
  auto c = asymptotic_coeffs(5);
  REQUIRE(c.size() == 6);
  CHECK(c[0].a == 1);
  CHECK(c[0].adot == 1);
  CHECK(c[1].a == Rational(5, 24));
  CHECK(c[1].adot == Rational(-7, 24));
  // (11!!)/(36^2 4!) = 10395/31104.
  CHECK(c[2].a == Rational(385, 1152));
  for (const auto& row : c) CHECK(row.adot == row.a * ratio(1 + 6 * row.k, 1 - 6 * row.k));
  CHECK_THROWS_AS(asymptotic_coeffs(51), SizeLimitError);
}

TEST_CASE("bilinear kernel") {
  auto k = bilinear_kernel(12);
  CHECK(k.coefficient({0, 0}) == -1);
  CHECK(k.coefficient({3, 0}) == Rational(-5, 24));
  CHECK(k.coefficient({2, 1}) == Rational(-1, 2));
  CHECK(k.coefficient({1, 2}) == Rational(-1, 2));
  CHECK(k.swapped(0, 1) == k);
  for (const auto& [m, c] : k.terms()) CHECK(TruncatedSeries::degree(m) % 3 == 0);
  CHECK_THROWS_AS(bilinear_kernel(41), SizeLimitError);
}

TEST_CASE("rescaling factors cancel between the conventions") {
  auto rows = rescaling_consistency(12);
  REQUIRE(rows.size() == 13);
  for (const auto& r : rows) CHECK_MESSAGE(r.matches, "degree " << r.degree);
  // Degree 3 carries a purely imaginary factor -i/2.
  CHECK(rows[3].complex_kernel.at({3, 0}) == GaussianRational{Rational(0), Rational(5, 48)});
  CHECK(rows[1].complex_kernel.empty());
}

TEST_CASE("tau coefficients") {
  IntersectionEngine engine;
  TauCoefficients tau(engine);
  CHECK(tau.coefficient(IntegerPartition(std::vector<int>{})) == 1);
  CHECK(tau.coefficient(IntegerPartition({1})) == 0);
  CHECK(tau.coefficient(IntegerPartition({3})) == Rational(1, 8));
  CHECK(tau.coefficient(IntegerPartition({1, 1, 1})) == 1);
  CHECK_THROWS_AS(tau.coefficient(IntegerPartition({2, 1})), DomainError);
  // Six tau_0's split into two <tau_0^3> blocks in 10 ways.
  CHECK(tau.disconnected({0, 0, 0, 0, 0, 0}) == 10);
}

TEST_CASE("connected part of the tau table recovers the correlators") {
  IntersectionEngine engine;
  TauCoefficients tau(engine);
  for (const std::vector<int>& parts :
       {std::vector<int>{3, 1, 1, 1}, std::vector<int>{5, 3, 1}, std::vector<int>{3, 3, 1, 1, 1}, std::vector<int>{7, 1, 1, 1, 1}}) {
    const int n = static_cast<int>(parts.size());
    auto weighted = [&](const std::vector<int>& block) -> Rational {
      std::vector<int> sub;
      Integer w = 1;
      for (int i : block) {
        sub.push_back(parts[i]);
        w *= double_factorial(parts[i]);
      }
      std::sort(sub.begin(), sub.end(), std::greater<>());
      return tau.coefficient(IntegerPartition(sub)) / Rational(w);
    };
    std::vector<int> exponents;
    for (int p : parts) exponents.push_back((p - 1) / 2);
    const Rational connected = connected_value<Rational>(n, weighted, Rational(0));
    CHECK(connected == engine.correlator_any_genus(exponents));
  }
}

TEST_CASE("two-variable identity") {
  IntersectionEngine engine;
  TauCoefficients tau(engine);
  auto series = tau_series(tau, 2, 9);
  CHECK(series.coefficient({0, 0}) == 1);
  CHECK(series.coefficient({3, 0}) == Rational(5, 24));
  CHECK(series.coefficient({2, 1}) == Rational(1, 2));
  for (const auto& [m, c] : series.terms()) CHECK(TruncatedSeries::degree(m) % 3 == 0);
  CHECK(two_variable_identity_check(tau, 18).is_zero());
  CHECK_THROWS_AS(two_variable_identity_check(tau, 25), SizeLimitError);
}

TEST_CASE("two-variable identity detects a perturbed correlator") {
  IntersectionEngine engine({}, InitialValues{1, Rational(1, 24) + Rational(1, 1000)});
  TauCoefficients tau(engine);
  auto residual = two_variable_identity_check(tau, 6);
  CHECK_FALSE(residual.is_zero());
  CHECK(residual.lowest_degree() == 3);
}

TEST_CASE("Fay identity") {
  IntersectionEngine engine;
  TauCoefficients tau(engine);
  auto one = fay_identity_check(tau, 1, 12);
  CHECK(one.is_zero());
  CHECK(fay_identity_check(tau, 2, 8).is_zero());
  CHECK_THROWS_AS(fay_identity_check(tau, 3, 4), SizeLimitError);
  IntersectionEngine bad({}, InitialValues{1, Rational(1, 20)});
  TauCoefficients bad_tau(bad);
  CHECK_FALSE(fay_identity_check(bad_tau, 2, 6).is_zero());
}

TEST_CASE("KdV residual") {
  IntersectionEngine engine;
  const CorrelatorTable table = engine.build_complete(3, 10);
  auto r = kdv_residual(table, 10);
  CHECK(r.coefficients.size() > 10);
  CHECK(r.all_zero());
  CHECK(r.coefficients.count({0}) == 1);
  CHECK(r.coefficients.count({3}) == 1);

  IntersectionEngine perturbed({}, InitialValues{1, Rational(1, 24) + Rational(1, 1000)});
  auto p = kdv_residual(perturbed.build_complete(3, 10), 10);
  REQUIRE(p.first_nonzero().has_value());
  CHECK(p.coefficients.at({3}) == 2 * (Rational(1, 24) + Rational(1, 1000)) - Rational(1, 12));

  auto single = kdv_residual(table.with_entry(make_key(1, {3, 0, 0}), Rational(1, 25)), 10);
  CHECK_FALSE(single.all_zero());

  const CorrelatorTable empty({}, TableCoverage{3, 10});
  CHECK(kdv_residual(empty, 10).all_zero());
  CHECK_THROWS_AS(kdv_residual(table, 11), MissingDataError);
  CHECK_THROWS_AS(kdv_residual(table, 10, 4), MissingDataError);
  CHECK_THROWS_AS(kdv_residual(engine.freeze(), 6), MissingDataError);
}
