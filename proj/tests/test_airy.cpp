#include <doctest.h>

#include <cmath>

#include "npoint/airy.hpp"
#include "npoint/errors.hpp"

using namespace npoint;

namespace {

// MPFR's own Ai serves as the independent oracle.
Real mpfr_reference_ai(double x, Precision bits) {
  Real r(0L, bits);
  Real xr(x, bits);
  mpfr_ai(r.get(), xr.get(), MPFR_RNDN);
  return r;
}

double rel(const Real& a, const Real& b) { return (abs(a - b) / abs(b)).to_double(); }

}  // namespace

TEST_CASE("Airy values at zero") {
  PrecisionGuard guard(128);
  CHECK(airy_ai(Real(0)).to_double() == doctest::Approx(0.3550280538878172).epsilon(1e-15));
  CHECK(airy_ai_prime(Real(0)).to_double() == doctest::Approx(-0.2588194037928068).epsilon(1e-15));
  const Real three(3L, 128);
  const Real ai0 = Real(1) / (cbrt(three * three) * gamma(Real(2) / three));
  CHECK(rel(airy_ai(Real(0)), ai0) < 1e-36);
}

TEST_CASE("Airy agrees with the reference implementation") {
  const Precision bits = 128;
  PrecisionGuard guard(bits);
  for (double x = -30; x <= 30; x += 1.37) {
    const Real ours = airy_ai(Real(x), bits);
    const Real ref = mpfr_reference_ai(x, bits + 20);
    if (x > 0) {
      CHECK_MESSAGE(rel(ours, ref) < 1e-35, "x = " << x);
    } else {
      CHECK_MESSAGE(abs(ours - ref).to_double() < 1e-35, "x = " << x);
    }
  }
}

TEST_CASE("Airy derivative matches a finite difference of Ai") {
  PrecisionGuard guard(256);
  const Real h = ldexp(Real(1), -60);
  for (double x : {-7.5, -2.0, 0.3, 4.0, 12.0}) {
    const Real fd = (airy_ai(Real(x) + h, 256) - airy_ai(Real(x) - h, 256)) / (2 * h);
    const Real d = airy_ai_prime(Real(x), 256);
    CHECK_MESSAGE(abs(fd - d).to_double() < 1e-30 * std::max(1.0, std::fabs(d.to_double())), "x = " << x);
  }
}

TEST_CASE("Airy equation residual") {
  PrecisionGuard guard(128);
  const Real h = ldexp(Real(1), -40);
  for (int i = 0; i < 20; ++i) {
    const Real x(-9.5 + i * 0.9);
    const Real second = (airy_ai_prime(x + h) - airy_ai_prime(x - h)) / (2 * h);
    CHECK_MESSAGE(abs(second - x * airy_ai(x)).to_double() < 1e-20, "x = " << x.to_double());
  }
}

TEST_CASE("series and asymptotic forms agree in the switch band") {
  // At 20 bits the expansion reaches its target throughout |x| in [6, 10].
  for (double x = 6.0; x <= 10.0; x += 0.5) {
    for (double sx : {x, -x}) {
      auto asym = airy_asymptotic(Real(sx, 64), 20);
      REQUIRE_MESSAGE(asym.has_value(), "x = " << sx);
      const AiryPair series = airy_series(Real(sx, 64), 64);
      if (sx > 0) {
        CHECK(rel(asym->ai, series.ai) < 1e-5);
        CHECK(rel(asym->ai_prime, series.ai_prime) < 1e-5);
      } else {
        CHECK(abs(asym->ai - series.ai).to_double() < 1e-5);
        CHECK(abs(asym->ai_prime - series.ai_prime).to_double() < 1e-5);
      }
    }
  }
  CHECK_FALSE(airy_asymptotic(Real(8.0), 128).has_value());
  CHECK(airy_asymptotic(Real(25.0), 128).has_value());
}

TEST_CASE("Airy range limits") {
  CHECK_THROWS_AS(airy_series(Real(31.0), 64), RangeError);
  CHECK_THROWS_AS(airy(Real(31.0), 4000), RangeError);
  CHECK_NOTHROW(airy(Real(-200.0), 128));
}

TEST_CASE("Airy kernel") {
  PrecisionGuard guard(128);
  const Real d0 = airy_ai_prime(Real(0));
  CHECK(abs(airy_kernel(Real(0), Real(0)) - d0 * d0).to_double() < 1e-36);
  CHECK(airy_kernel(Real(0), Real(0)).to_double() == doctest::Approx(0.06698).epsilon(1e-4));
  CHECK(airy_kernel(Real(1), Real(2)) == airy_kernel(Real(2), Real(1)));
  // Near the diagonal switch the two branches agree with a high-precision ratio.
  for (double z : {-3.0, 0.0, 1.5}) {
    for (int e : {-20, -31, -33, -45}) {
      const Real h = ldexp(Real(1), e);
      const Real near = airy_kernel(Real(z), Real(z) + h, 128);
      PrecisionGuard wide(512);
      const AiryPair p = airy(Real(z, 512), 512), q = airy(Real(z, 512) + h, 512);
      const Real exact = (p.ai * q.ai_prime - p.ai_prime * q.ai) / (-h);
      CHECK_MESSAGE(abs(near - exact).to_double() < 1e-30, "z = " << z << " e = " << e);
    }
  }
}

TEST_CASE("kernel integral representation") {
  PrecisionGuard guard(128);
  for (auto [z, w] : {std::pair{0.0, 0.0}, std::pair{1.0, 2.0}, std::pair{-3.0, 0.5}}) {
    auto check = kernel_integral_check(Real(z), Real(w));
    CHECK_MESSAGE(check.residual < 1e-10, "z = " << z << " w = " << w);
  }
  auto full = kernel_integral_check(Real(0), Real(0));
  auto halved = kernel_integral_check(Real(0), Real(0), 128, full.a_max / 2);
  auto quarter = kernel_integral_check(Real(0), Real(0), 128, full.a_max / 4);
  CHECK(halved.residual > full.residual);
  CHECK(quarter.residual > halved.residual);
  CHECK_THROWS_AS(kernel_integral_check(Real(-6), Real(0)), DomainError);
}

TEST_CASE("Laplace transform of a product of Airy functions") {
  PrecisionGuard guard(128);
  auto r = laplace_product(Real(1), Real(0), Real(0));
  CHECK(r.closed_form.to_double() == doctest::Approx(std::exp(1.0 / 12) / (2 * std::sqrt(M_PI))).epsilon(1e-14));
  CHECK(r.closed_form.to_double() == doctest::Approx(0.30661).epsilon(1e-4));
  CHECK(r.relative_error < 1e-8);
  auto s = laplace_product(Real(1), Real(1), Real(0));
  CHECK(s.closed_form.to_double() ==
        doctest::Approx(std::exp(1.0 / 12 - 0.5 - 0.25) / (2 * std::sqrt(M_PI))).epsilon(1e-14));
  CHECK(s.relative_error < 1e-8);
  auto t = laplace_product(Real(1), Real(0), Real(1));
  CHECK(abs(s.closed_form - t.closed_form).to_double() == 0);
  CHECK(abs(s.numeric - t.numeric).to_double() < 1e-20);
  CHECK_THROWS_AS(laplace_product(Real(0), Real(0), Real(0)), DomainError);
}

TEST_CASE("one-point kernel Laplace transform") {
  PrecisionGuard guard(128);
  auto r = kernel_laplace_n1(Real(1));
  CHECK(r.closed_form.to_double() == doctest::Approx(0.30661).epsilon(1e-4));
  CHECK(abs(r.numeric - r.closed_form).to_double() < 1e-8);
  auto h = kernel_laplace_n1(Real(0.5));
  CHECK(h.closed_form.to_double() ==
        doctest::Approx(std::exp(1.0 / 96) / (2 * std::sqrt(M_PI) * std::pow(0.5, 1.5))).epsilon(1e-14));
  CHECK(h.relative_error < 1e-8);
  // The closed form decreases up to 6^{1/3} and increases afterwards.
  const double xmin = std::cbrt(6.0);
  auto closed = [](double x) { return kernel_laplace_n1(Real(x), 64, 1e-3).closed_form.to_double(); };
  CHECK(closed(xmin - 0.2) > closed(xmin - 0.1));
  CHECK(closed(xmin - 0.1) > closed(xmin));
  CHECK(closed(xmin + 0.1) > closed(xmin));
  CHECK(closed(xmin + 0.2) > closed(xmin + 0.1));
}
