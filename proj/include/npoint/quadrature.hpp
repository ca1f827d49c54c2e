#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "npoint/rational.hpp"
#include "npoint/real.hpp"
#include "npoint/series.hpp"

namespace npoint {

/// Controls for the orthant quadrature. The node count per dimension starts at nodes_per_dim and
/// doubles up to refinement_levels times until two successive values differ by less than
/// target_abs_error; nodes are laid out as uniform panels of 16 Gauss-Legendre points.
struct QuadratureSpec {
  Precision precision = kDefaultPrecision;
  int nodes_per_dim = 16;
  /// Upper limit S of [0, S]^n; zero selects it automatically.
  double truncation_radius = 0;
  int refinement_levels = 6;
  double target_abs_error = 1e-12;
  /// Integrate numerically even where a closed form exists (n = 1, 2).
  bool force_quadrature = false;
  int max_points = 4;
  /// Allow g_function to double the precision when its terms cancel heavily.
  bool escalate_precision = true;

  /// Throws DomainError on an inconsistent spec.
  void validate() const;
};

struct EIntegralResult {
  Real value;
  double error_estimate = 0;
  int n = 0;
  std::vector<Real> x;
  bool closed_form = false;
  int nodes_per_dim = 0;
  double truncation_radius = 0;
};

/// exp(x^3/12) / (2 sqrt(pi) x^{3/2}).
Real e_closed_n1(const Real& x);
/// exp(s^3/12)/(2 sqrt(pi) s^{3/2}) (1 - erf(sqrt(x1 x2 s)/2)) with s = x1 + x2.
Real e_closed_n2(const Real& x1, const Real& x2);

/// The orthant integral
///   exp(sum x_i^3/12) / (2^n pi^{n/2} prod sqrt(x_i)) *
///   int_{s >= 0} exp(-sum (s_i - s_{i+1})^2/(4 x_i) - sum (s_i + s_{i+1}) x_i/2) ds,  s_{n+1} = s_1,
/// evaluated as the trace of a product of n Gauss-Legendre transfer matrices (closed forms for
/// n <= 2 unless force_quadrature is set). ConvergenceError when the target is not reached.
EIntegralResult e_integral(std::span<const Real> x, const QuadratureSpec& spec = {});

struct GTerm {
  /// Set partition in 1-based block notation, e.g. "{1,3}{2}".
  std::string partition;
  /// Ordering of the merged arguments (indices into the blocks).
  std::vector<int> ordering;
  int sign = 1;
  Real value;
  double error_estimate = 0;
};

struct GResult {
  Real value;
  double error_estimate = 0;
  Precision precision_used = 0;
  std::vector<GTerm> terms;
  /// max |term| / |value|.
  double cancellation = 0;
};

/// sum over set partitions alpha of (-1)^{l(alpha)+1} times the cyclic symmetrization of the
/// orthant integral at the block sums x_alpha.
GResult g_function(std::span<const Real> x, const QuadratureSpec& spec = {});

struct FResult {
  /// (2 pi)^{n/2} / prod sqrt(x_i) * G(x / 2^{1/3}), unstable terms included.
  Real full;
  /// full minus 1/x^2 (n = 1) or 1/(x1 + x2) (n = 2).
  Real stable;
  Real unstable;
  double error_estimate = 0;
  GResult g;
};

FResult f_eval(std::span<const Real> x, const QuadratureSpec& spec = {});

/// 2^{1/3} at the given precision, computed once per precision.
const Real& cube_root_two(Precision bits);

struct ErfSeriesRow {
  int k = 0;
  Rational computed;
  Rational expected;
  Rational residual;
};

/// Coefficient of x^{2k+1} in sqrt(pi) e^{x^2/4} erf(x/2) by the Cauchy product of the two
/// series, against k!/(2k+1)!.
std::vector<ErfSeriesRow> erf_series_check(int max_k);

/// Q(s) = sum_m a_m s^m over exponent vectors with |m| <= 2.
struct QuadraticForm {
  int n = 1;
  std::map<Monomial, Real> coefficients;

  Real coefficient(const Monomial& m) const;
  double evaluate(std::span<const double> s) const;
  /// Q(lambda s).
  QuadraticForm scaled(const Real& lambda) const;
};

/// int_{s >= 0} e^{Q(s)} ds for n <= 3 with negative-definite quadratic part, by tensor
/// Gauss-Legendre with node doubling.
Real orthant_exponential_integral(const QuadraticForm& q, const QuadratureSpec& spec = {});

struct GkzResidual {
  Real value;
  /// (sum_m m_i a_m d/da_m + 1) I / I for i = 1..n.
  std::vector<double> homogeneity;
  /// d^2 I/da_{e1} da_{e2} - d I/da_{e1+e2} (n >= 2), or d^2/da_1^2 - d/da_2 (n = 1), over I.
  double exchange = 0;
  std::string exchange_equation;
  /// |lambda^n I(Q(lambda s)) - I| / I at lambda = 1.3.
  double scaling = 0;
};

/// Finite-difference residuals of the homogeneity and exchange equations satisfied by I(Q).
GkzResidual gkz_residual(const QuadraticForm& q, const QuadratureSpec& spec = {});

}  // namespace npoint
