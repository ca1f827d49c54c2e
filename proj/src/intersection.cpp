#include "npoint/intersection.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "npoint/errors.hpp"

namespace npoint {

CorrelatorKey make_key(int genus, std::vector<int> exponents) {
  std::sort(exponents.begin(), exponents.end(), std::greater<>());
  return CorrelatorKey{genus, std::move(exponents)};
}

bool is_stable(int genus, int points) noexcept { return 2 * genus - 2 + points > 0; }

bool satisfies_dimension(int genus, std::span<const int> exponents) noexcept {
  const long sum = std::accumulate(exponents.begin(), exponents.end(), 0L);
  return sum == 3L * genus - 3 + static_cast<long>(exponents.size());
}

std::optional<int> genus_from_dimension(std::span<const int> exponents) noexcept {
  const long sum = std::accumulate(exponents.begin(), exponents.end(), 0L);
  const long three_g = sum + 3 - static_cast<long>(exponents.size());
  if (three_g < 0 || three_g % 3 != 0) return std::nullopt;
  return static_cast<int>(three_g / 3);
}

namespace {

void check_exponents(std::span<const int> exponents) {
  if (exponents.empty()) throw DomainError("correlator needs at least one insertion");
  for (int d : exponents)
    if (d < 0) throw DomainError("negative psi exponent");
}

bool vanishes(int genus, std::span<const int> exponents) {
  return genus < 0 || !is_stable(genus, static_cast<int>(exponents.size())) || !satisfies_dimension(genus, exponents);
}

}  // namespace

CorrelatorTable::CorrelatorTable(std::map<CorrelatorKey, Rational> entries, std::optional<TableCoverage> coverage)
    : entries_(std::move(entries)), coverage_(coverage) {}

Rational CorrelatorTable::value(int genus, std::vector<int> exponents) const {
  check_exponents(exponents);
  if (vanishes(genus, exponents)) return 0;
  const int points = static_cast<int>(exponents.size());
  CorrelatorKey key = make_key(genus, std::move(exponents));
  auto it = entries_.find(key);
  if (it != entries_.end()) return it->second;
  if (coverage_ && genus <= coverage_->max_genus && points <= coverage_->max_points) return 0;
  std::string d;
  for (int e : key.exponents) d += (d.empty() ? "" : ",") + std::to_string(e);
  throw MissingDataError("correlator g=" + std::to_string(genus) + " d={" + d + "} absent from table");
}

Rational CorrelatorTable::value_any_genus(std::vector<int> exponents) const {
  check_exponents(exponents);
  const auto g = genus_from_dimension(exponents);
  if (!g) return 0;
  return value(*g, std::move(exponents));
}

CorrelatorTable CorrelatorTable::with_entry(const CorrelatorKey& key, const Rational& value) const {
  CorrelatorTable copy = *this;
  copy.entries_[make_key(key.genus, key.exponents)] = value;
  return copy;
}

IntersectionEngine::IntersectionEngine(EngineLimits limits, InitialValues initial)
    : limits_(limits), initial_(std::move(initial)) {
  if (limits_.max_genus < 0 || limits_.max_points < 1) throw DomainError("engine limits must be positive");
}

Rational IntersectionEngine::correlator(int genus, std::vector<int> exponents) {
  check_exponents(exponents);
  if (genus < 0) throw DomainError("negative genus");
  if (genus > limits_.max_genus)
    throw SizeLimitError("genus " + std::to_string(genus) + " exceeds cap " + std::to_string(limits_.max_genus));
  if (static_cast<int>(exponents.size()) > limits_.max_points)
    throw SizeLimitError("n = " + std::to_string(exponents.size()) + " exceeds cap " +
                         std::to_string(limits_.max_points));
  return lookup(genus, std::move(exponents));
}

Rational IntersectionEngine::correlator_any_genus(std::vector<int> exponents) {
  check_exponents(exponents);
  const auto g = genus_from_dimension(exponents);
  if (!g) return 0;
  return correlator(*g, std::move(exponents));
}

Rational IntersectionEngine::lookup(int genus, std::vector<int> exponents) {
  if (vanishes(genus, exponents)) return 0;
  CorrelatorKey key = make_key(genus, std::move(exponents));
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  Rational v = compute(key);
  memo_.emplace(std::move(key), v);
  return v;
}

Rational IntersectionEngine::compute(const CorrelatorKey& key) {
  const int g = key.genus;
  const std::vector<int>& d = key.exponents;
  const int n = key.points();

  if (g == 0 && d == std::vector<int>{0, 0, 0}) return initial_.tau0_cubed;
  if (g == 1 && d == std::vector<int>{1}) return initial_.tau1;

  // String equation on a tau_0 insertion (exponents are non-increasing, so it sits last).
  if (d.back() == 0) {
    std::vector<int> rest(d.begin(), d.end() - 1);
    Rational sum = 0;
    for (std::size_t j = 0; j < rest.size(); ++j) {
      if (rest[j] == 0) continue;
      std::vector<int> lowered = rest;
      --lowered[j];
      sum += lookup(g, std::move(lowered));
    }
    return sum;
  }

  // Dilaton equation on a tau_1 insertion.
  if (auto it = std::find(d.begin(), d.end(), 1); it != d.end()) {
    std::vector<int> rest = d;
    rest.erase(rest.begin() + (it - d.begin()));
    return Rational(2 * g - 2 + (n - 1)) * lookup(g, std::move(rest));
  }

  // DVV on the largest insertion tau_{k+1}.
  const int k = d.front() - 1;
  const std::vector<int> rest(d.begin() + 1, d.end());
  Rational total = 0;

  for (std::size_t j = 0; j < rest.size(); ++j) {
    std::vector<int> merged = rest;
    merged[j] = rest[j] + k;
    const Rational coeff = ratio(double_factorial(2 * k + 2 * rest[j] + 1), double_factorial(2 * rest[j] - 1));
    total += coeff * lookup(g, std::move(merged));
  }

  // Multiplicity form of the rest, for summing over unordered splits I + J = rest.
  std::vector<std::pair<int, int>> groups;
  for (int v : rest) {
    if (groups.empty() || groups.back().first != v) groups.emplace_back(v, 0);
    ++groups.back().second;
  }

  Rational quadratic = 0;
  for (int r = 0; r <= k - 1; ++r) {
    const int s = k - 1 - r;
    const Rational weight(double_factorial(2 * r + 1) * double_factorial(2 * s + 1));

    if (g >= 1) {
      std::vector<int> with_pair = rest;
      with_pair.push_back(r);
      with_pair.push_back(s);
      quadratic += weight * lookup(g - 1, std::move(with_pair));
    }

    std::vector<int> take(groups.size(), 0);
    while (true) {
      std::vector<int> left{r}, right{s};
      Integer multiplicity = 1;
      for (std::size_t q = 0; q < groups.size(); ++q) {
        left.insert(left.end(), take[q], groups[q].first);
        right.insert(right.end(), groups[q].second - take[q], groups[q].first);
        multiplicity *= binomial(static_cast<unsigned>(groups[q].second), static_cast<unsigned>(take[q]));
      }
      const auto g1 = genus_from_dimension(left);
      const auto g2 = genus_from_dimension(right);
      if (g1 && g2 && *g1 + *g2 == g) {
        const Rational a = lookup(*g1, std::move(left));
        if (a != 0) quadratic += weight * Rational(multiplicity) * a * lookup(*g2, std::move(right));
      }
      std::size_t q = 0;
      while (q < groups.size() && take[q] == groups[q].second) take[q++] = 0;
      if (q == groups.size()) break;
      ++take[q];
    }
  }
  total += quadratic / 2;
  return total / Rational(double_factorial(2 * k + 3));
}

void IntersectionEngine::preload(const CorrelatorTable& table) {
  for (const auto& [key, value] : table.entries()) {
    check_exponents(key.exponents);
    if (key.genus < 0 || !satisfies_dimension(key.genus, key.exponents))
      throw IntegrityError("preloaded correlator violates the dimension constraint");
    if (!is_stable(key.genus, key.points())) throw IntegrityError("preloaded correlator is unstable");
    memo_[make_key(key.genus, key.exponents)] = value;
  }
}

CorrelatorTable IntersectionEngine::freeze() const { return CorrelatorTable(memo_, std::nullopt); }

CorrelatorTable IntersectionEngine::build_complete(int max_genus, int max_points) {
  for (int g = 0; g <= max_genus; ++g)
    for (int n = 1; n <= max_points; ++n) {
      if (!is_stable(g, n)) continue;
      for (auto& d : exponent_multisets(n, 3 * g - 3 + n)) correlator(g, std::move(d));
    }
  return CorrelatorTable(memo_, TableCoverage{max_genus, max_points});
}

std::vector<std::vector<int>> exponent_multisets(int points, int total) {
  std::vector<std::vector<int>> out;
  if (points < 1 || total < 0) return out;
  std::vector<int> current;
  std::function<void(int, int)> rec = [&](int remaining, int bound) {
    const int slots = points - static_cast<int>(current.size());
    if (slots == 0) {
      if (remaining == 0) out.push_back(current);
      return;
    }
    for (int v = std::min(bound, remaining); v >= 0; --v) {
      if (static_cast<long>(v) * slots < remaining) break;
      current.push_back(v);
      rec(remaining - v, v);
      current.pop_back();
    }
  };
  rec(total, total);
  return out;
}

Rational NPointPolynomial::coefficient(std::vector<int> exponents) const {
  if (static_cast<int>(exponents.size()) != points) throw DomainError("exponent count does not match arity");
  std::sort(exponents.begin(), exponents.end(), std::greater<>());
  auto it = coefficients.find(exponents);
  return it == coefficients.end() ? Rational(0) : it->second;
}

Real NPointPolynomial::evaluate(std::span<const Real> x) const {
  if (static_cast<int>(x.size()) != points) throw DomainError("evaluation point arity mismatch");
  Real sum = 0;
  for (const auto& [exps, c] : coefficients) {
    std::vector<int> perm(exps.rbegin(), exps.rend());
    Real symmetric = 0;
    do {
      Real term = 1;
      for (int i = 0; i < points; ++i)
        if (perm[i] != 0) term *= pow(x[i], static_cast<long>(perm[i]));
      symmetric += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    sum += Real(c) * symmetric;
  }
  return sum;
}

TruncatedSeries NPointPolynomial::to_series() const {
  TruncatedSeries s(points, std::max(degree(), 0));
  for (const auto& [exps, c] : coefficients) {
    std::vector<int> perm(exps.rbegin(), exps.rend());
    do {
      s.add_term(perm, c);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return s;
}

NPointPolynomial fg_polynomial(IntersectionEngine& engine, int genus, int points) {
  if (genus < 0 || points < 1) throw DomainError("fg_polynomial: need g >= 0 and n >= 1");
  NPointPolynomial p;
  p.genus = genus;
  p.points = points;
  if (!is_stable(genus, points)) {
    p.unstable = true;
    return p;
  }
  for (auto& d : exponent_multisets(points, 3 * genus - 3 + points)) {
    Rational c = engine.correlator(genus, d);
    if (c != 0) p.coefficients.emplace(std::move(d), std::move(c));
  }
  return p;
}

Real one_point_closed(const Real& x) {
  if (x.sign() <= 0) throw DomainError("one_point_closed: x must be positive");
  return exp(pow(x, 3L) / 24) / (x * x);
}

Rational one_point_coefficient(int genus) {
  if (genus < 0) throw DomainError("negative genus");
  Integer den = factorial(static_cast<unsigned>(genus));
  for (int i = 0; i < genus; ++i) den *= 24;
  return Rational(1) / Rational(den);
}

TruncatedSeries two_point_series(int max_degree) {
  if (max_degree < 0) throw DomainError("two_point_series: negative degree");
  if (max_degree > 60) throw SizeLimitError("two_point_series: degree cap is 60");
  const int D = max_degree;
  TruncatedSeries cubes(2, D);
  cubes.add_term({3, 0}, Rational(1, 24));
  cubes.add_term({0, 3}, Rational(1, 24));
  // b = x1 x2 (x1 + x2) / 2
  TruncatedSeries b(2, D);
  b.add_term({2, 1}, Rational(1, 2));
  b.add_term({1, 2}, Rational(1, 2));
  TruncatedSeries sum = TruncatedSeries::constant(2, D, 1);
  TruncatedSeries power = sum;
  for (int k = 1; 3 * k <= D; ++k) {
    power = power * b;
    sum += power * ratio(factorial(static_cast<unsigned>(k)), factorial(static_cast<unsigned>(2 * k + 1)));
  }
  return series_exp(cubes) * sum;
}

TruncatedSeries two_point_correlators_from_series(int max_degree) {
  if (max_degree < 1) throw DomainError("two_point_correlators_from_series: degree must be positive");
  TruncatedSeries p = two_point_series(max_degree);
  p.add_term({0, 0}, -1);
  return p.divide_by_binomial(0, 1, 1);
}

Real two_point_closed(const Real& x1, const Real& x2) {
  if (x1.sign() <= 0 || x2.sign() <= 0) throw DomainError("two_point_closed: arguments must be positive");
  const Real s = x1 + x2;
  const Real b = x1 * x2 * s / 2;
  Real term = 1, sum = 1;
  const long bits = std::max(x1.precision(), x2.precision());
  for (int k = 1; k < 100000; ++k) {
    term *= b / Real(2 * (2 * k + 1));
    sum += term;
    if (term.is_zero() || term.exponent() < sum.exponent() - bits - 4) break;
  }
  return exp((pow(x1, 3L) + pow(x2, 3L)) / 24) * sum / s;
}

GenusSum genus_sum_eval(IntersectionEngine& engine, std::span<const Real> x, double tolerance, int max_genus) {
  const int n = static_cast<int>(x.size());
  if (n < 1) throw DomainError("genus_sum_eval: empty argument");
  if (!(tolerance > 0)) throw DomainError("genus_sum_eval: tolerance must be positive");
  for (const Real& xi : x)
    if (xi.sign() < 0) throw DomainError("genus_sum_eval: arguments must be nonnegative");

  GenusSum out;
  out.stable_value = 0;
  if (n == 1)
    out.unstable_term = x[0].is_zero() ? Real(0) : Real(1) / (x[0] * x[0]);
  else if (n == 2)
    out.unstable_term = (x[0] + x[1]).is_zero() ? Real(0) : Real(1) / (x[0] + x[1]);
  else
    out.unstable_term = 0;

  int decreasing = 0;
  std::optional<double> previous;
  for (int g = 0; g <= max_genus; ++g) {
    if (!is_stable(g, n)) continue;
    Real term = fg_polynomial(engine, g, n).evaluate(x);
    out.stable_value += term;
    out.terms.push_back(term);
    out.genus_used = g;
    const double magnitude = std::fabs(term.to_double());
    double ratio = 0;
    if (previous) {
      ratio = *previous == 0 ? 0 : magnitude / *previous;
      decreasing = (magnitude == 0 || ratio <= 0.25) ? decreasing + 1 : 0;
    }
    previous = magnitude;
    // Three consecutive terms shrinking by 4x means two qualifying ratios in a row.
    if (decreasing >= 2 && magnitude < tolerance / 10) {
      out.tail_estimate = ratio >= 1 ? INFINITY : magnitude * ratio / (1 - ratio);
      if (out.tail_estimate < tolerance) return out;
    }
  }
  throw ConvergenceError("genus sum did not reach tolerance by genus " + std::to_string(max_genus));
}

TruncatedSeries string_equation_residual(IntersectionEngine& engine, int max_degree) {
  if (max_degree < 0) throw DomainError("string_equation_residual: negative degree");
  TruncatedSeries two(2, max_degree + 1), three(2, max_degree);
  for (int a = 0; a <= max_degree; ++a)
    for (int b = 0; a + b <= max_degree; ++b) {
      two.add_term({a, b}, engine.correlator_any_genus({a, b}));
      three.add_term({a, b}, engine.correlator_any_genus({a, b, 0}));
    }
  TruncatedSeries sum = TruncatedSeries::variable(2, max_degree + 1, 0) + TruncatedSeries::variable(2, max_degree + 1, 1);
  TruncatedSeries left = (sum * two).truncated(max_degree);
  left.add_term({0, 0}, 1);
  return left - three;
}

Real map_asymptotics(IntersectionEngine& engine, int genus, std::span<const Real> y) {
  const int n = static_cast<int>(y.size());
  if (n < 1 || !is_stable(genus, n)) throw DomainError("map_asymptotics needs stable (g, n)");
  std::vector<Real> half;
  Real root_product = 1;
  for (const Real& yi : y) {
    if (yi.sign() <= 0) throw DomainError("map_asymptotics: arguments must be positive");
    half.push_back(yi / 2);
    root_product *= sqrt(half.back());
  }
  const Real fg = fg_polynomial(engine, genus, n).evaluate(half);
  const Real pi_power = pow(pi(), -static_cast<long>(n));
  return ldexp(fg * root_product * sqrt(pi_power), genus);
}

}  // namespace npoint
