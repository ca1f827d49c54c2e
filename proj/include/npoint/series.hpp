#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "npoint/rational.hpp"
#include "npoint/real.hpp"

namespace npoint {

using Monomial = std::vector<int>;

/// Multivariate polynomial with exact rational coefficients, truncated at a total degree.
///
/// Every series carries its truncation order: terms of higher total degree are never stored,
/// and combining two series keeps the smaller order, so a coefficient reported by a series is
/// always exact. Variables are positional; in the tau-function checks they stand for inverse
/// variables x^{-1}, y^{-1}, ...
class TruncatedSeries {
 public:
  TruncatedSeries(int variables, int order);

  static TruncatedSeries constant(int variables, int order, const Rational& c);
  static TruncatedSeries variable(int variables, int order, int index);

  int variables() const noexcept { return variables_; }
  int order() const noexcept { return order_; }
  const std::map<Monomial, Rational>& terms() const noexcept { return terms_; }

  Rational coefficient(const Monomial& m) const;
  /// Adds c to the coefficient of m (dropped when deg m exceeds the order).
  void add_term(const Monomial& m, const Rational& c);

  bool is_zero() const noexcept { return terms_.empty(); }
  /// Lowest total degree carrying a nonzero coefficient, or -1 for the zero series.
  int lowest_degree() const;
  TruncatedSeries homogeneous_part(int degree) const;
  /// Copy with a smaller truncation order.
  TruncatedSeries truncated(int order) const;

  TruncatedSeries& operator+=(const TruncatedSeries& o);
  TruncatedSeries& operator-=(const TruncatedSeries& o);
  TruncatedSeries& operator*=(const Rational& c);

  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
  friend TruncatedSeries operator*(TruncatedSeries a, const Rational& c) { return a *= c; }
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
  friend bool operator==(const TruncatedSeries&, const TruncatedSeries&) = default;

  TruncatedSeries derivative(int index) const;
  /// Exchanges two variables.
  TruncatedSeries swapped(int i, int j) const;

  /// Exact quotient by (x_i + sign * x_j). Throws IntegrityError when the division leaves a
  /// remainder. Exact for every term when the dividend is a genuine polynomial of degree <= order.
  TruncatedSeries divide_by_binomial(int i, int j, int sign) const;

  Real evaluate(std::span<const Real> point) const;

  std::string to_string() const;

  static int degree(const Monomial& m);

 private:
  void check_compatible(const TruncatedSeries& o) const;

  int variables_;
  int order_;
  std::map<Monomial, Rational> terms_;
};

/// exp(s) for a series with zero constant term.
TruncatedSeries series_exp(const TruncatedSeries& s);

}  // namespace npoint
