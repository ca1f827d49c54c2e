#pragma once

#include <optional>

#include "npoint/real.hpp"

namespace npoint {

struct AiryPair {
  Real ai;
  Real ai_prime;
};

/// Beyond this |x| the asymptotic expansions are tried first.
inline constexpr double kAiryAsymptoticCutoff = 8.0;
/// Largest |x| for which the Maclaurin series is used as a fallback.
inline constexpr double kAirySeriesLimit = 30.0;

/// Ai and Ai' with relative error about 2^{-bits} for x >= 0 and absolute error about 2^{-bits}
/// for x < 0. For |x| >= 8 the asymptotic expansion is used when its smallest term meets the
/// target; otherwise the Maclaurin series runs with guard bits covering its cancellation. Throws
/// RangeError when neither method can meet the target (|x| > 30 and the expansion too coarse).
AiryPair airy(const Real& x, Precision bits = working_precision());
Real airy_ai(const Real& x, Precision bits = working_precision());
Real airy_ai_prime(const Real& x, Precision bits = working_precision());

/// Maclaurin evaluation of Ai, Ai' at any |x| <= 30.
AiryPair airy_series(const Real& x, Precision bits);

/// Asymptotic evaluation (decaying form for x > 0, oscillatory form for x < 0), truncated at the
/// smallest term. Empty when that term exceeds 2^{-bits}.
std::optional<AiryPair> airy_asymptotic(const Real& x, Precision bits);

/// (Ai(z)Ai'(w) - Ai'(z)Ai(w))/(z - w). Within |z - w| < 2^{-bits/4} the value is taken at the
/// midpoint m from Ai'(m)^2 - m Ai(m)^2 plus the h^2 correction of the symmetric expansion.
Real airy_kernel(const Real& z, const Real& w, Precision bits = working_precision());

struct KernelIntegralCheck {
  Real kernel;
  Real integral;
  double residual = 0;
  double a_max = 0;
};

/// |K(z, w) - int_0^{a_max} Ai(z + a) Ai(w + a) da|. By default a_max is where the integrand
/// falls below 2^{-bits}; a_max_override truncates earlier (or later). Requires z, w >= -5.
KernelIntegralCheck kernel_integral_check(const Real& z, const Real& w, Precision bits = working_precision(),
                                          std::optional<double> a_max_override = std::nullopt);

struct LaplaceComparison {
  Real numeric;
  Real closed_form;
  double relative_error = 0;
  double z_min = 0;
  double z_max = 0;
};

/// Envelope constant C in |Ai(-t)| <= C t^{-1/4} and |Ai'(-t)| <= C t^{1/4} (t >= 1).
inline constexpr double kAiryEnvelope = 1.0;

/// int_R e^{xz} Ai(z + a) Ai(z + b) dz by composite Gauss-Legendre against
/// exp(x^3/12 - (a+b)x/2 - (a-b)^2/(4x)) / (2 sqrt(pi x)). Tails are cut where their bound drops
/// below tail_tolerance times the closed form.
LaplaceComparison laplace_product(const Real& x, const Real& a, const Real& b, Precision bits = working_precision(),
                                  double tail_tolerance = 1e-15);

/// int_R e^{xz} K(z, z) dz against exp(x^3/12)/(2 sqrt(pi) x^{3/2}).
LaplaceComparison kernel_laplace_n1(const Real& x, Precision bits = working_precision(),
                                    double tail_tolerance = 1e-15);

}  // namespace npoint
