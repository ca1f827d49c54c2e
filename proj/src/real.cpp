#include "npoint/real.hpp"

#include <algorithm>
#include <cstdlib>
#include <memory>

#include "npoint/errors.hpp"

namespace npoint {

namespace {

thread_local Precision tls_precision = kDefaultPrecision;

Precision wider(const Real& a, const Real& b) { return std::max(a.precision(), b.precision()); }

}  // namespace

Precision working_precision() noexcept { return tls_precision; }

PrecisionGuard::PrecisionGuard(Precision bits) : saved_(tls_precision) {
  if (bits < MPFR_PREC_MIN || bits > MPFR_PREC_MAX) throw DomainError("precision out of range");
  tls_precision = bits;
}

PrecisionGuard::~PrecisionGuard() { tls_precision = saved_; }

Real::Real(Uninitialized, Precision bits) { mpfr_init2(v_, bits); }

Real::Real(double v, Precision bits) : Real(Uninitialized{}, bits) { mpfr_set_d(v_, v, MPFR_RNDN); }

Real::Real(long v, Precision bits) : Real(Uninitialized{}, bits) { mpfr_set_si(v_, v, MPFR_RNDN); }

Real::Real(const Rational& q, Precision bits) : Real(Uninitialized{}, bits) { mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN); }

Real Real::from_string(const std::string& decimal, Precision bits) {
  Real r(Uninitialized{}, bits);
  if (mpfr_set_str(r.v_, decimal.c_str(), 10, MPFR_RNDN) != 0)
    throw DomainError("malformed real '" + decimal + "'");
  return r;
}

Real::Real(const Real& other) : Real(Uninitialized{}, other.precision()) { mpfr_set(v_, other.v_, MPFR_RNDN); }

Real::Real(Real&& other) noexcept {
  v_[0] = other.v_[0];
  other.v_[0]._mpfr_d = nullptr;
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    if (v_[0]._mpfr_d == nullptr) mpfr_init2(v_, other.precision());
    else if (precision() != other.precision()) mpfr_set_prec(v_, other.precision());
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  if (this != &other) std::swap(v_[0], other.v_[0]);
  return *this;
}

Real::~Real() {
  if (v_[0]._mpfr_d != nullptr) mpfr_clear(v_);
}

void Real::set_precision(Precision bits) { mpfr_prec_round(v_, bits, MPFR_RNDN); }

std::string Real::to_string(int digits) const {
  if (mpfr_nan_p(v_)) return "nan";
  if (mpfr_inf_p(v_)) return sign() > 0 ? "inf" : "-inf";
  if (digits <= 0) digits = static_cast<int>(mpfr_get_str_ndigits(10, precision()));
  char* buf = nullptr;
  const std::string fmt = "%." + std::to_string(digits - 1) + "Re";
  if (mpfr_asprintf(&buf, fmt.c_str(), v_) < 0) throw Error("mpfr_asprintf failed");
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

long Real::exponent() const noexcept {
  if (!mpfr_regular_p(v_)) return mpfr_zero_p(v_) ? -(1L << 40) : (1L << 40);
  return mpfr_get_exp(v_);
}

Real& Real::operator+=(const Real& o) {
  if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
  mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Real& Real::operator-=(const Real& o) {
  if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
  mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Real& Real::operator*=(const Real& o) {
  if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
  mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Real& Real::operator/=(const Real& o) {
  if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
  mpfr_div(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

void Real::add_product(const Real& a, const Real& b) { mpfr_fma(v_, a.v_, b.v_, v_, MPFR_RNDN); }

Real Real::operator-() const {
  Real r(Uninitialized{}, precision());
  mpfr_neg(r.v_, v_, MPFR_RNDN);
  return r;
}

Real operator+(const Real& a, const Real& b) {
  Real r(Real::Uninitialized{}, wider(a, b));
  mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

Real operator-(const Real& a, const Real& b) {
  Real r(Real::Uninitialized{}, wider(a, b));
  mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

Real operator*(const Real& a, const Real& b) {
  Real r(Real::Uninitialized{}, wider(a, b));
  mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

Real operator/(const Real& a, const Real& b) {
  Real r(Real::Uninitialized{}, wider(a, b));
  mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

std::partial_ordering operator<=>(const Real& a, const Real& b) noexcept {
  if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.v_, b.v_);
  return c < 0 ? std::partial_ordering::less : c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent;
}

#define NPOINT_UNARY(name, fn)                 \
  Real name(const Real& x) {                   \
    Real r(0L, x.precision());                 \
    fn(r.get(), x.get(), MPFR_RNDN);           \
    return r;                                  \
  }

NPOINT_UNARY(abs, mpfr_abs)
NPOINT_UNARY(sqrt, mpfr_sqrt)
NPOINT_UNARY(cbrt, mpfr_cbrt)
NPOINT_UNARY(exp, mpfr_exp)
NPOINT_UNARY(log, mpfr_log)
NPOINT_UNARY(sin, mpfr_sin)
NPOINT_UNARY(cos, mpfr_cos)
NPOINT_UNARY(erf, mpfr_erf)
NPOINT_UNARY(erfc, mpfr_erfc)
NPOINT_UNARY(gamma, mpfr_gamma)

#undef NPOINT_UNARY

Real pow(const Real& x, const Real& y) {
  Real r(0L, std::max(x.precision(), y.precision()));
  mpfr_pow(r.get(), x.get(), y.get(), MPFR_RNDN);
  return r;
}

Real pow(const Real& x, long k) {
  Real r(0L, x.precision());
  mpfr_pow_si(r.get(), x.get(), k, MPFR_RNDN);
  return r;
}

Real ldexp(const Real& x, long e) {
  Real r(0L, x.precision());
  mpfr_mul_2si(r.get(), x.get(), e, MPFR_RNDN);
  return r;
}

Real max(const Real& a, const Real& b) { return a < b ? b : a; }
Real min(const Real& a, const Real& b) { return b < a ? b : a; }

Real pi(Precision bits) {
  Real r(0L, bits);
  mpfr_const_pi(r.get(), MPFR_RNDN);
  return r;
}

Real at_precision(const Real& x, Precision bits) {
  Real r = x;
  r.set_precision(bits);
  return r;
}

}  // namespace npoint
