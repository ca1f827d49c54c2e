#pragma once

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "npoint/rational.hpp"
#include "npoint/real.hpp"
#include "npoint/series.hpp"

namespace npoint {

/// Genus plus psi-exponent multiset, exponents stored non-increasing.
struct CorrelatorKey {
  int genus = 0;
  std::vector<int> exponents;

  int points() const noexcept { return static_cast<int>(exponents.size()); }
  friend auto operator<=>(const CorrelatorKey&, const CorrelatorKey&) = default;
};

CorrelatorKey make_key(int genus, std::vector<int> exponents);

/// 2g - 2 + n > 0.
bool is_stable(int genus, int points) noexcept;

/// sum d_i = 3g - 3 + n.
bool satisfies_dimension(int genus, std::span<const int> exponents) noexcept;

/// The genus forced by the dimension constraint, if it is a nonnegative integer.
std::optional<int> genus_from_dimension(std::span<const int> exponents) noexcept;

struct EngineLimits {
  int max_genus = 12;
  int max_points = 10;
};

/// The two values the recursion starts from: <tau_0^3>_0 and <tau_1>_1.
struct InitialValues {
  Rational tau0_cubed = 1;
  Rational tau1 = Rational(1, 24);
};

/// Range over which a table is known to hold every stable correlator.
struct TableCoverage {
  int max_genus = 0;
  int max_points = 0;
};

/// Immutable map (genus, exponent multiset) -> correlator. Safe for concurrent reads.
class CorrelatorTable {
 public:
  CorrelatorTable() = default;
  CorrelatorTable(std::map<CorrelatorKey, Rational> entries, std::optional<TableCoverage> coverage);

  /// Zero off the dimension constraint or for unstable (g, n). Otherwise the stored value;
  /// MissingDataError when the entry is absent, unless the coverage says it is a stored zero.
  Rational value(int genus, std::vector<int> exponents) const;
  /// Same, with the genus inferred from the dimension constraint (zero when none exists).
  Rational value_any_genus(std::vector<int> exponents) const;

  const std::map<CorrelatorKey, Rational>& entries() const noexcept { return entries_; }
  const std::optional<TableCoverage>& coverage() const noexcept { return coverage_; }
  std::size_t size() const noexcept { return entries_.size(); }

  /// Copy with one entry replaced (used for sensitivity controls).
  CorrelatorTable with_entry(const CorrelatorKey& key, const Rational& value) const;

 private:
  std::map<CorrelatorKey, Rational> entries_;
  std::optional<TableCoverage> coverage_;
};

/// Exact psi-class intersection numbers by the string, dilaton and DVV (Virasoro) recursions,
/// memoized. Single-writer: do not share an engine across threads; share frozen tables instead.
class IntersectionEngine {
 public:
  explicit IntersectionEngine(EngineLimits limits = {}, InitialValues initial = {});

  /// <tau_{d_1} ... tau_{d_n}>_g. Zero when the dimension constraint fails or (g, n) is
  /// unstable. SizeLimitError beyond the configured caps.
  Rational correlator(int genus, std::vector<int> exponents);
  /// Correlator with the genus inferred from the dimension constraint.
  Rational correlator_any_genus(std::vector<int> exponents);

  /// Seeds the memo with validated entries (for example from a cache file).
  void preload(const CorrelatorTable& table);

  /// Snapshot of everything computed so far.
  CorrelatorTable freeze() const;
  /// Computes every stable correlator with genus <= max_genus and n <= max_points.
  CorrelatorTable build_complete(int max_genus, int max_points);

  const EngineLimits& limits() const noexcept { return limits_; }
  const InitialValues& initial_values() const noexcept { return initial_; }

 private:
  Rational compute(const CorrelatorKey& key);
  Rational lookup(int genus, std::vector<int> exponents);

  EngineLimits limits_;
  InitialValues initial_;
  std::map<CorrelatorKey, Rational> memo_;
};

/// Non-increasing length-n sequences of nonnegative integers summing to total.
std::vector<std::vector<int>> exponent_multisets(int points, int total);

/// The genus-g part of the n-point function: a symmetric homogeneous polynomial of degree
/// 3g - 3 + n whose coefficients are keyed by non-increasing exponent multisets.
struct NPointPolynomial {
  int genus = 0;
  int points = 0;
  bool unstable = false;
  std::map<std::vector<int>, Rational> coefficients;

  int degree() const noexcept { return 3 * genus - 3 + points; }
  /// Coefficient of prod x_i^{d_i}; any ordering of d.
  Rational coefficient(std::vector<int> exponents) const;
  /// Sum over all monomials (every distinct permutation of each multiset).
  Real evaluate(std::span<const Real> x) const;
  /// Expanded as a series in `points` variables truncated at its degree.
  TruncatedSeries to_series() const;
};

NPointPolynomial fg_polynomial(IntersectionEngine& engine, int genus, int points);

/// exp(x^3/24) / x^2: the full one-point function including the x^{-2} unstable term.
Real one_point_closed(const Real& x);

/// Coefficient of x^{3g-2} in exp(x^3/24)/x^2, i.e. 1/(24^g g!).
Rational one_point_coefficient(int genus);

/// Exact coefficients of (x1 + x2) F(x1, x2) = exp((x1^3 + x2^3)/24) *
/// sum_k k!/(2k+1)! (x1 x2 (x1 + x2)/2)^k through total degree max_degree. The constant 1 is
/// the (0,2) unstable contribution.
TruncatedSeries two_point_series(int max_degree);

/// Stable two-point correlators <tau_a tau_b> as the coefficients of ((x1 + x2)F - 1)/(x1 + x2),
/// through total degree max_degree - 1.
TruncatedSeries two_point_correlators_from_series(int max_degree);

/// Numeric value of the closed two-point formula, unstable 1/(x1 + x2) included.
Real two_point_closed(const Real& x1, const Real& x2);

struct GenusSum {
  Real stable_value;
  /// x^{-2} for n = 1, 1/(x1 + x2) for n = 2, zero otherwise.
  Real unstable_term;
  int genus_used = 0;
  double tail_estimate = 0;
  std::vector<Real> terms;
};

/// sum_{g <= G} F_g(x) over the stable genera, with G chosen once three consecutive terms
/// shrink by at least 4x each and the last is below tolerance/10. The tail is extrapolated
/// geometrically from the last ratio. ConvergenceError if max_genus is reached first.
GenusSum genus_sum_eval(IntersectionEngine& engine, std::span<const Real> x, double tolerance, int max_genus);

/// (x1 + x2) F(x1, x2) - F(x1, x2, 0) over all genera, unstable 1/(x1 + x2) included, through
/// total degree max_degree. Zero coefficientwise by the string equation.
TruncatedSeries string_equation_residual(IntersectionEngine& engine, int max_degree);

/// map_g(y) = 2^g pi^{-n/2} F_g(y/2) prod (y_i/2)^{1/2}.
Real map_asymptotics(IntersectionEngine& engine, int genus, std::span<const Real> y);

}  // namespace npoint
