#pragma once

#include <mpfr.h>

#include <compare>
#include <concepts>
#include <string>

#include "npoint/rational.hpp"

namespace npoint {

/// Significand width in bits.
using Precision = long;

inline constexpr Precision kDefaultPrecision = 128;

/// Precision used for values created in the current thread without an explicit width.
Precision working_precision() noexcept;

/// Scoped override of working_precision() for the current thread.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(Precision bits);
  ~PrecisionGuard();
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  Precision saved_;
};

/// Owning MPFR value. Results of binary operations carry the wider operand precision;
/// values built from machine numbers or rationals take working_precision().
class Real {
 public:
  Real() : Real(0L, working_precision()) {}
  Real(double v) : Real(v, working_precision()) {}  // NOLINT(implicit)
  template <std::integral I>
  Real(I v) : Real(static_cast<long>(v), working_precision()) {}  // NOLINT(implicit)
  Real(const Rational& q) : Real(q, working_precision()) {}        // NOLINT(implicit)

  Real(double v, Precision bits);
  Real(long v, Precision bits);
  Real(const Rational& q, Precision bits);
  static Real from_string(const std::string& decimal, Precision bits = working_precision());

  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  Precision precision() const noexcept { return mpfr_get_prec(v_); }
  /// Rounds to a new width in place.
  void set_precision(Precision bits);

  mpfr_srcptr get() const noexcept { return v_; }
  mpfr_ptr get() noexcept { return v_; }

  double to_double() const noexcept { return mpfr_get_d(v_, MPFR_RNDN); }
  /// Scientific notation with `digits` significant digits (0 = enough to round-trip).
  std::string to_string(int digits = 0) const;

  bool is_zero() const noexcept { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const noexcept { return mpfr_number_p(v_) != 0; }
  int sign() const noexcept { return mpfr_sgn(v_); }
  /// Binary exponent e with 0.5 <= |x| / 2^e < 1; very negative for zero.
  long exponent() const noexcept;

  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Real& o);
  Real& operator/=(const Real& o);
  /// this += a * b with a single rounding.
  void add_product(const Real& a, const Real& b);

  Real operator-() const;

  friend Real operator+(const Real& a, const Real& b);
  friend Real operator-(const Real& a, const Real& b);
  friend Real operator*(const Real& a, const Real& b);
  friend Real operator/(const Real& a, const Real& b);

  friend bool operator==(const Real& a, const Real& b) noexcept { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend std::partial_ordering operator<=>(const Real& a, const Real& b) noexcept;

 private:
  struct Uninitialized {};
  Real(Uninitialized, Precision bits);
  mpfr_t v_;
};

Real abs(const Real& x);
Real sqrt(const Real& x);
Real cbrt(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real pow(const Real& x, const Real& y);
Real pow(const Real& x, long k);
Real sin(const Real& x);
Real cos(const Real& x);
Real erf(const Real& x);
Real erfc(const Real& x);
Real gamma(const Real& x);
Real ldexp(const Real& x, long e);
Real max(const Real& a, const Real& b);
Real min(const Real& a, const Real& b);

Real pi(Precision bits = working_precision());

/// Copy of x rounded to (or widened to) the given precision.
Real at_precision(const Real& x, Precision bits);

}  // namespace npoint
