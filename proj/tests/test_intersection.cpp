#include <doctest.h>

#include <cmath>

#include "npoint/errors.hpp"
#include "npoint/intersection.hpp"

using namespace npoint;

TEST_CASE("correlator examples") {
  IntersectionEngine e;
  CHECK(e.correlator(1, {1}) == Rational(1, 24));
  CHECK(e.correlator(2, {4}) == Rational(1, 1152));
  CHECK(e.correlator(0, {0, 0, 0}) == 1);
  CHECK(e.correlator(1, {1, 1}) == Rational(1, 24));
  CHECK(e.correlator(1, {2, 0}) == Rational(1, 24));
  CHECK(e.correlator(1, {0, 2}) == Rational(1, 24));
  CHECK(e.correlator(0, {1}) == 0);
  CHECK(e.correlator(0, {0, 0}) == 0);
  // Tabulated values.
  CHECK(e.correlator(2, {2, 3}) == Rational(29, 5760));
  CHECK(e.correlator(2, {2, 2, 2}) == Rational(7, 240));
  CHECK(e.correlator(3, {7}) == Rational(1, 82944));
  CHECK(e.correlator(0, {1, 0, 0, 0}) == 1);
  CHECK(e.correlator(0, {2, 0, 0, 0, 0}) == 1);
  CHECK(e.correlator(0, {1, 1, 0, 0, 0}) == 2);
}

TEST_CASE("caps and domain") {
  IntersectionEngine e(EngineLimits{3, 4});
  CHECK_THROWS_AS(e.correlator(4, {10}), SizeLimitError);
  CHECK_THROWS_AS(e.correlator(0, {0, 0, 0, 0, 1}), SizeLimitError);
  CHECK_THROWS_AS(e.correlator(1, {}), DomainError);
  CHECK_THROWS_AS(e.correlator(1, {-1, 3}), DomainError);
}

TEST_CASE("one-point oracle") {
  IntersectionEngine e;
  for (int g = 1; g <= 10; ++g) CHECK(e.correlator(g, {3 * g - 2}) == one_point_coefficient(g));
  CHECK(one_point_coefficient(2) == Rational(1, 1152));
}

TEST_CASE("one-point closed form") {
  PrecisionGuard guard(128);
  CHECK(std::fabs(one_point_closed(Real(1)).to_double() - std::exp(1.0 / 24)) < 1e-15);
  // exp(x^3/24)/x^2 - 1/x^2 at small x is close to x/24.
  const Real x = Real::from_string("0.001");
  CHECK(std::fabs(((one_point_closed(x) - 1 / (x * x)) / x).to_double() - 1.0 / 24) < 1e-9);
  CHECK_THROWS_AS(one_point_closed(Real(-1)), DomainError);
}

TEST_CASE("two-point series oracle") {
  IntersectionEngine e;
  auto p = two_point_series(21);
  CHECK(p.coefficient({0, 0}) == 1);
  auto f = two_point_correlators_from_series(21);
  CHECK(f.coefficient({2, 0}) == Rational(1, 24));
  CHECK(f.coefficient({1, 1}) == Rational(1, 24));
  CHECK(f.coefficient({0, 2}) == Rational(1, 24));
  for (int a = 0; a <= 20; ++a)
    for (int b = 0; a + b <= 20; ++b) CHECK(e.correlator_any_genus({a, b}) == f.coefficient({a, b}));
  CHECK_THROWS_AS(two_point_series(61), SizeLimitError);
}

TEST_CASE("correlators are symmetric, positive and respect dimension") {
  IntersectionEngine e;
  CHECK(e.correlator(2, {3, 2}) == e.correlator(2, {2, 3}));
  CHECK(e.correlator(2, {5, 0, 1}) == e.correlator(2, {0, 1, 5}));
  auto table = e.build_complete(4, 5);
  for (const auto& [key, value] : table.entries()) {
    CHECK(value > 0);
    CHECK(satisfies_dimension(key.genus, key.exponents));
  }
  CHECK(e.correlator(2, {3, 3}) == 0);
}

TEST_CASE("string equation holds on the recursion output") {
  IntersectionEngine e;
  auto table = e.build_complete(4, 6);
  int checked = 0;
  for (const auto& [key, value] : table.entries()) {
    if (key.exponents.back() != 0 || key.points() < 2) continue;
    if (key.genus == 0 && key.points() == 3) continue;
    std::vector<int> rest(key.exponents.begin(), key.exponents.end() - 1);
    Rational sum = 0;
    for (std::size_t j = 0; j < rest.size(); ++j) {
      if (rest[j] == 0) continue;
      auto lowered = rest;
      --lowered[j];
      sum += table.value(key.genus, lowered);
    }
    CHECK(sum == value);
    ++checked;
  }
  CHECK(checked > 50);
}

TEST_CASE("dilaton equation holds on the recursion output") {
  IntersectionEngine e;
  auto table = e.build_complete(4, 6);
  for (const auto& [key, value] : table.entries()) {
    auto it = std::find(key.exponents.begin(), key.exponents.end(), 1);
    if (it == key.exponents.end() || (key.genus == 1 && key.points() == 1)) continue;
    std::vector<int> rest = key.exponents;
    rest.erase(rest.begin() + (it - key.exponents.begin()));
    CHECK(value == Rational(2 * key.genus - 2 + static_cast<int>(rest.size())) * table.value(key.genus, rest));
  }
}

TEST_CASE("frozen tables") {
  IntersectionEngine e;
  auto table = e.build_complete(2, 3);
  REQUIRE(table.coverage().has_value());
  CHECK(table.value(2, {4}) == Rational(1, 1152));
  CHECK(table.value_any_genus({1}) == Rational(1, 24));
  CHECK(table.value(0, {5}) == 0);
  CHECK_THROWS_AS(table.value(3, {7}), MissingDataError);
  auto changed = table.with_entry(CorrelatorKey{1, {1}}, Rational(1, 23));
  CHECK(changed.value(1, {1}) == Rational(1, 23));
  CHECK(table.value(1, {1}) == Rational(1, 24));

  IntersectionEngine other;
  other.preload(table);
  CHECK(other.freeze().size() == table.size());
  CHECK_THROWS_AS(other.preload(CorrelatorTable({{CorrelatorKey{1, {2}}, Rational(1)}}, std::nullopt)),
                  IntegrityError);
}

TEST_CASE("n-point polynomials") {
  IntersectionEngine e;
  auto p03 = fg_polynomial(e, 0, 3);
  CHECK(p03.coefficients.size() == 1);
  CHECK(p03.coefficient({0, 0, 0}) == 1);
  auto p11 = fg_polynomial(e, 1, 1);
  CHECK(p11.coefficient({1}) == Rational(1, 24));
  auto p12 = fg_polynomial(e, 1, 2);
  CHECK(p12.coefficient({2, 0}) == Rational(1, 24));
  CHECK(p12.coefficient({0, 2}) == Rational(1, 24));
  CHECK(p12.coefficient({1, 1}) == Rational(1, 24));
  auto s = p12.to_series();
  CHECK(s.coefficient({1, 1}) == Rational(1, 24));
  CHECK(s.coefficient({0, 2}) == Rational(1, 24));
  CHECK(fg_polynomial(e, 0, 2).unstable);
  CHECK(fg_polynomial(e, 0, 1).unstable);

  PrecisionGuard guard(128);
  std::vector<Real> x{Real(2), Real(3)};
  // (4 + 6 + 9)/24
  CHECK(p12.evaluate(x) == Real(Rational(19, 24)));
  auto p23 = fg_polynomial(e, 2, 3);
  std::vector<Real> a{Real(0.3), Real(0.7), Real(1.1)}, b{Real(1.1), Real(0.3), Real(0.7)};
  CHECK(std::fabs((p23.evaluate(a) - p23.evaluate(b)).to_double()) < 1e-30);
}

TEST_CASE("two-point closed evaluation") {
  PrecisionGuard guard(128);
  auto f = two_point_correlators_from_series(30);
  std::vector<Real> x{Real(0.5), Real(0.25)};
  const Real series = f.evaluate(x) + 1 / (x[0] + x[1]);
  CHECK(std::fabs((two_point_closed(x[0], x[1]) - series).to_double()) < 1e-12);
}

TEST_CASE("genus sums") {
  PrecisionGuard guard(128);
  IntersectionEngine e;
  std::vector<Real> one{Real(1)};
  auto r1 = genus_sum_eval(e, one, 1e-12, 12);
  CHECK(std::fabs(r1.stable_value.to_double() - (std::exp(1.0 / 24) - 1)) < 1e-12);
  CHECK(r1.unstable_term == Real(1));
  CHECK(r1.tail_estimate < 1e-12);

  std::vector<Real> two{Real(1), Real(1)};
  auto r2 = genus_sum_eval(e, two, 1e-10, 12);
  CHECK(std::fabs((r2.stable_value + r2.unstable_term - two_point_closed(two[0], two[1])).to_double()) < 1e-10);

  std::vector<Real> zeros{Real(0), Real(0), Real(0)};
  auto r3 = genus_sum_eval(e, zeros, 1e-10, 12);
  CHECK(r3.stable_value == Real(1));

  std::vector<Real> big{Real(40)};
  CHECK_THROWS_AS(genus_sum_eval(e, big, 1e-10, 6), ConvergenceError);
}

TEST_CASE("map asymptotics") {
  PrecisionGuard guard(128);
  IntersectionEngine e;
  std::vector<Real> y{Real(2)};
  const Real expected = 1 / (12 * sqrt(pi()));
  CHECK(std::fabs((map_asymptotics(e, 1, y) - expected).to_double()) < 1e-30);
  std::vector<Real> y3{Real(0.4), Real(1.3), Real(0.9)};
  for (double lambda : {0.5, 1.7, 3.0}) {
    for (int g : {0, 1, 2}) {
      std::vector<Real> scaled;
      for (const auto& v : y3) scaled.push_back(v * lambda);
      const double degree = 3 * g - 3 + 1.5 * 3;
      const double ratio = (map_asymptotics(e, g, scaled) / map_asymptotics(e, g, y3)).to_double();
      CHECK(ratio == doctest::Approx(std::pow(lambda, degree)).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(map_asymptotics(e, 0, y), DomainError);
}

TEST_CASE("exponent multisets") {
  CHECK(exponent_multisets(3, 2) == std::vector<std::vector<int>>{{2, 0, 0}, {1, 1, 0}});
  CHECK(exponent_multisets(2, 0) == std::vector<std::vector<int>>{{0, 0}});
  CHECK(exponent_multisets(1, 7).size() == 1);
}

TEST_CASE("string equation on the two-point function") {
  IntersectionEngine engine;
  CHECK(string_equation_residual(engine, 14).is_zero());
  // The recursion applies the string equation itself, so the control corrupts a stored value.
  IntersectionEngine corrupted;
  corrupted.preload(CorrelatorTable({{make_key(1, {2, 1, 0}), Rational(1, 10)}}, std::nullopt));
  const auto residual = string_equation_residual(corrupted, 6);
  CHECK(residual.coefficient({2, 1}) == Rational(1, 12) - Rational(1, 10));
}
