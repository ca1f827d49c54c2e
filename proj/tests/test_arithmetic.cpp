#include <doctest.h>

#include <atomic>
#include <cmath>

#include "npoint/errors.hpp"
#include "npoint/gauss_legendre.hpp"
#include "npoint/parallel.hpp"
#include "npoint/rational.hpp"
#include "npoint/real.hpp"
#include "npoint/series.hpp"

using namespace npoint;

TEST_CASE("rational formatting and parsing") {
  CHECK(to_string(Rational(2, 4)) == "1/2");
  CHECK(to_string(Rational(-3, 6)) == "-1/2");
  CHECK(to_string(Rational(5)) == "5");
  CHECK(parse_rational("1/24") == Rational(1, 24));
  CHECK(parse_rational("-7") == Rational(-7));
  CHECK(parse_rational("6/4") == Rational(3, 2));
  CHECK_THROWS_AS(parse_rational("6/-4"), DomainError);
  CHECK(ratio(6, -4) == Rational(-3, 2));
  CHECK(to_string(ratio(6, 4)) == "3/2");
  CHECK_THROWS_AS(parse_rational("1/0"), DomainError);
  CHECK_THROWS_AS(parse_rational("1/2x"), DomainError);
  CHECK_THROWS_AS(parse_rational(""), DomainError);
}

TEST_CASE("integer helpers") {
  CHECK(factorial(0) == 1);
  CHECK(factorial(10) == 3628800);
  CHECK(double_factorial(-1) == 1);
  CHECK(double_factorial(0) == 1);
  CHECK(double_factorial(7) == 105);
  CHECK(double_factorial(8) == 384);
  CHECK(binomial(10, 3) == 120);
  CHECK(binomial(3, 5) == 0);
}

TEST_CASE("real arithmetic keeps the wider precision") {
  Real a(1L, 200);
  Real b(3L, 64);
  Real c = a / b;
  CHECK(c.precision() == 200);
  PrecisionGuard guard(256);
  CHECK(working_precision() == 256);
  Real third = Real(1) / Real(3);
  CHECK(third.precision() == 256);
  CHECK(std::fabs((third * 3 - 1).to_double()) < 1e-70);
}

TEST_CASE("real special functions") {
  PrecisionGuard guard(128);
  CHECK(std::fabs(exp(Real(1)).to_double() - std::exp(1.0)) < 1e-15);
  CHECK(std::fabs(gamma(Real(0.5)).to_double() - std::sqrt(M_PI)) < 1e-15);
  CHECK(std::fabs(erf(Real(0.5)).to_double() - std::erf(0.5)) < 1e-15);
  CHECK(std::fabs(pi().to_double() - M_PI) < 1e-15);
  Real x = Real::from_string("0.1");
  CHECK(x.to_string(5) == "1.0000e-01");
  CHECK(ldexp(Real(3), -1) == Real(1.5));
}

TEST_CASE("gauss-legendre integrates polynomials exactly") {
  auto rule = gauss_legendre(10, 128);
  REQUIRE(rule->nodes.size() == 10);
  PrecisionGuard guard(128);
  Real total = 0;
  for (std::size_t i = 0; i < 10; ++i) total += rule->weights[i] * pow(rule->nodes[i], 18L);
  // integral of x^18 over [-1,1] = 2/19
  CHECK(std::fabs((total - Real(Rational(2, 19))).to_double()) < 1e-35);
  std::vector<Real> edges{Real(0), Real(1), Real(2)};
  Real e = integrate_panels(edges, *rule, [](const Real& t) { return exp(t); });
  CHECK(std::fabs((e - (exp(Real(2)) - 1)).to_double()) < 1e-28);
}

TEST_CASE("parallel_for visits each index once and rethrows") {
  set_thread_count(4);
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) {
                    if (i == 7) throw DomainError("boom");
                  }),
                  DomainError);
  {
    PrecisionGuard guard(300);
    std::vector<Precision> seen(8);
    parallel_for(8, [&](std::size_t i) { seen[i] = working_precision(); });
    for (auto p : seen) CHECK(p == 300);
  }
  set_thread_count(0);
}

TEST_CASE("truncated series arithmetic") {
  auto x = TruncatedSeries::variable(2, 6, 0);
  auto y = TruncatedSeries::variable(2, 6, 1);
  auto one = TruncatedSeries::constant(2, 6, 1);
  auto p = (x + y) * (x - y);
  CHECK(p.coefficient({2, 0}) == 1);
  CHECK(p.coefficient({0, 2}) == -1);
  CHECK(p.coefficient({1, 1}) == 0);
  auto q = p.divide_by_binomial(0, 1, 1);
  CHECK(q == (x - y).truncated(5));
  CHECK_THROWS_AS((x * x + one).divide_by_binomial(0, 1, 1), IntegrityError);
  CHECK_THROWS_AS(p.coefficient({4, 3}), DomainError);

  auto e = series_exp(x);
  CHECK(e.coefficient({6, 0}) == Rational(1, 720));
  CHECK(e.derivative(0).coefficient({4, 0}) == Rational(1, 24));
  CHECK(p.swapped(0, 1) == p * Rational(-1));
  CHECK((x * x * x * x * x * x * x).is_zero());
}

TEST_CASE("series evaluation") {
  PrecisionGuard guard(128);
  auto x = TruncatedSeries::variable(1, 10, 0);
  auto p = x * x * Rational(3) + TruncatedSeries::constant(1, 10, 2);
  std::vector<Real> pt{Real(2)};
  CHECK(p.evaluate(pt) == Real(14));
}
