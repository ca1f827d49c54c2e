#pragma once

#include <map>
#include <optional>
#include <vector>

#include "npoint/combinatorics.hpp"
#include "npoint/intersection.hpp"
#include "npoint/rational.hpp"
#include "npoint/series.hpp"

namespace npoint {

/// a_k = (6k-1)!!/(36^k (2k)!) and adot_k = (1+6k)/(1-6k) a_k.
struct AsymptoticCoefficients {
  int k = 0;
  Rational a;
  Rational adot;
};

std::vector<AsymptoticCoefficients> asymptotic_coeffs(int k_max);

/// The kernel (a(x) adot(y) - a(y) adot(x))/(x - y) with a(x) = sum a_k x^{-3k} and
/// adot(x) = sum adot_k x^{1-3k}, as a series in X = 1/x (variable 0) and Y = 1/y (variable 1)
/// through total degree `order`. Its constant term is -1.
TruncatedSeries bilinear_kernel(int order);

/// Exact rational in Q(i).
struct GaussianRational {
  Rational re;
  Rational im;

  friend bool operator==(const GaussianRational&, const GaussianRational&) = default;
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
};

struct RescalingRow {
  int degree = 0;
  /// Kernel coefficients with a_k = (-i)^k (6k-1)!!/(72^k (2k)!), keyed by monomials in 1/x, 1/y.
  std::map<Monomial, GaussianRational> complex_kernel;
  /// The same degree of the real kernel multiplied by (-i)^{d/3} 2^{-d/3}.
  std::map<Monomial, GaussianRational> transported;
  bool matches = false;
};

/// Degree by degree, compares the complex-convention kernel with the real one transported by
/// the substitution x = i 2^{-1/3} u, which multiplies degree d by i^d 2^{-d/3}. Tau
/// coefficients pick up the same factor, so equality here moves the tau identities between
/// conventions. Only degrees divisible by 3 occur; other degrees are checked to vanish.
std::vector<RescalingRow> rescaling_consistency(int order);

/// Rescaled tau coefficients tilde-tau_mu over odd partitions:
///   prod (2m_i+1)!! * sum over set partitions of the parts of prod_blocks <prod tau_{m_i}>,
/// where mu_i = 2m_i + 1. Disconnected correlators are memoized by their exponent multiset.
class TauCoefficients {
 public:
  explicit TauCoefficients(IntersectionEngine& engine) : engine_(engine) {}

  /// DomainError on an even part, SizeLimitError when |mu| > 60.
  Rational coefficient(const IntegerPartition& mu);
  /// Sum over set partitions of the exponent multiset (non-increasing) of the block products.
  Rational disconnected(std::vector<int> exponents);

 private:
  IntersectionEngine& engine_;
  std::map<std::vector<int>, Rational> memo_;
};

/// sum_mu tilde-tau_mu t_mu/|Aut mu| with t_k = (sum_v v^k)/k over all `variables` series
/// variables, through total degree `order`.
TruncatedSeries tau_series(TauCoefficients& tau, int variables, int order);

/// tau(X, Y) + kernel(X, Y) through total degree `order` (must vanish). order <= 24.
TruncatedSeries two_variable_identity_check(TauCoefficients& tau, int order);

/// For n = 1, 2 with X_i = 1/x_i, Y_j = 1/y_j (variables X_1..X_n, Y_1..Y_n):
///   prod_{i<j}(X_j - X_i)(Y_j - Y_i) tau  -  sum_sigma sgn(sigma) prod_i P(X_i, Y_sigma(i)) prod_{j != sigma(i)} (X_i + Y_j),
/// P = -kernel. This is the determinant identity with the prefactors 1/(x_i + y_j) and the
/// Vandermonde factors cleared. Order <= 16.
TruncatedSeries fay_identity_check(TauCoefficients& tau, int n, int order);

struct KdvResidual {
  /// Residual coefficient per exponent multiset S (non-increasing), for the coefficient of
  /// t^S/|Aut S|. Only entries that were checked are present.
  std::map<std::vector<int>, Rational> coefficients;
  int max_degree = 0;
  int max_genus = 0;

  bool all_zero() const;
  /// First nonzero entry, if any.
  std::optional<std::pair<std::vector<int>, Rational>> first_nonzero() const;
};

/// With F = sum <prod tau_{d_i}> t^d/|Aut d| over correlators with at most max_degree points
/// and U = d^2F/dt_0^2, the coefficients of
///   dU/dt_1 - U dU/dt_0 - (1/12) d^3U/dt_0^3
/// for every monomial whose coefficient involves only correlators within the bounds: monomials
/// of degree <= max_degree - 5 and genus <= max_genus. max_genus defaults to the table coverage.
/// MissingDataError when the table does not cover the bounds.
KdvResidual kdv_residual(const CorrelatorTable& table, int max_degree, std::optional<int> max_genus = std::nullopt);

}  // namespace npoint
