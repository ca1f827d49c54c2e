#include "npoint/airy.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "npoint/errors.hpp"
#include "npoint/gauss_legendre.hpp"
#include "npoint/parallel.hpp"

namespace npoint {

namespace {

constexpr double kLog2e = 1.4426950408889634;
constexpr int kPanelNodes = 20;

double zeta_of(double t) { return 2.0 / 3.0 * std::pow(std::fabs(t), 1.5); }

long magnitude_exponent(const Real& v) { return v.is_zero() ? -(1L << 40) : v.exponent(); }

// Composite Gauss-Legendre over [lo, hi] with panel widths from width(z). Panels are summed in
// parallel into fixed slots and reduced in order, so the result does not depend on scheduling.
template <class F, class W>
Real integrate_range(double lo, double hi, Precision bits, W width, F f) {
  std::vector<Real> edges;
  for (double z = lo; z < hi;) {
    edges.emplace_back(z, bits);
    z = std::min(hi, z + width(z));
    if (hi - z < 1e-9) z = hi;
  }
  edges.emplace_back(hi, bits);
  auto rule = gauss_legendre(kPanelNodes, bits);
  std::vector<Real> panel(edges.size() - 1, Real(0L, bits));
  PrecisionGuard guard(bits);
  parallel_for(panel.size(), [&](std::size_t k) {
    const MappedRule m = map_rule(*rule, edges[k], edges[k + 1]);
    Real sum(0L, bits);
    for (std::size_t i = 0; i < m.nodes.size(); ++i) sum.add_product(m.weights[i], f(m.nodes[i]));
    panel[k] = std::move(sum);
  });
  Real total(0L, bits);
  for (const Real& p : panel) total += p;
  return total;
}

double oscillation_width(double t) { return std::min(1.0, M_PI / (std::sqrt(std::max(t, 0.0)) + 1.0)); }

}  // namespace

AiryPair airy_series(const Real& x, Precision bits) {
  const double xd = x.to_double();
  if (std::fabs(xd) > kAirySeriesLimit) throw RangeError("Airy series used beyond |x| = 30");
  const double zeta = zeta_of(xd);
  const long guard = static_cast<long>((xd > 0 ? 2.0 : 1.0) * zeta * kLog2e) + 20;
  const Precision wp = bits + guard;
  PrecisionGuard pg(wp);

  const Real xw = at_precision(x, wp);
  const Real x3 = xw * xw * xw;
  const Real three(3L, wp);
  const Real c1 = Real(1L, wp) / (cbrt(three * three) * gamma(Real(2L, wp) / three));
  const Real c2 = Real(1L, wp) / (cbrt(three) * gamma(Real(1L, wp) / three));

  // Ai = c1 f - c2 x g with f = sum alpha_k x^{3k}, g = sum beta_k x^{3k}.
  Real f(1L, wp), fp(0L, wp), g(1L, wp), gp(1L, wp);
  Real alpha(1L, wp), beta(1L, wp), power(1L, wp);
  const double absx = std::fabs(xd);
  const long target = -(bits + 10) - (xd > 0 ? static_cast<long>(zeta * kLog2e) : 0L);
  for (long k = 1; k < 100000; ++k) {
    alpha /= Real((3 * k - 1) * (3 * k), wp);
    beta /= Real((3 * k) * (3 * k + 1), wp);
    const Real fp_term = alpha * power * Real(3 * k, wp);
    power *= x3;
    const Real f_term = alpha * power;
    const Real g_term = beta * power;
    f += f_term;
    fp += fp_term;
    g += g_term;
    gp += g_term * Real(3 * k + 1, wp);
    const bool shrinking = absx * absx * absx < 4.5 * static_cast<double>(k * k);
    if (shrinking) {
      const long largest = std::max({magnitude_exponent(f_term), magnitude_exponent(fp_term) + 2 * std::max(0L, magnitude_exponent(xw)),
                                     magnitude_exponent(g_term) + std::max(0L, magnitude_exponent(xw)),
                                     magnitude_exponent(g_term) + 5 + static_cast<long>(std::log2(3.0 * k + 1))});
      if (largest < target) break;
    }
  }
  AiryPair out{c1 * f - c2 * xw * g, c1 * xw * xw * fp - c2 * gp};
  out.ai.set_precision(bits);
  out.ai_prime.set_precision(bits);
  return out;
}

std::optional<AiryPair> airy_asymptotic(const Real& x, Precision bits) {
  const double xd = x.to_double();
  if (std::fabs(xd) < 1.0) return std::nullopt;
  const Precision wp = bits + 20;
  PrecisionGuard pg(wp);
  const Real t = abs(at_precision(x, wp));
  const Real zeta = Real(2L, wp) * t * sqrt(t) / Real(3L, wp);
  const Real inv_zeta = Real(1L, wp) / zeta;
  const long target = -(bits + 4);

  // u_k, v_k with running powers of 1/zeta; split into even and odd indices for x < 0.
  Real u(1L, wp), v(1L, wp), zpow(1L, wp);
  Real ue(1L, wp), uo(0L, wp), ve(1L, wp), vo(0L, wp);
  Real u_alt(1L, wp), v_alt(1L, wp);
  long previous = magnitude_exponent(Real(1L, wp));
  bool converged = false;
  for (long k = 1; k < 10000; ++k) {
    u *= Real((6 * k - 5) * (6 * k - 3) * (6 * k - 1), wp) / Real((2 * k - 1) * 216 * k, wp);
    v = u * Real(-(6 * k + 1), wp) / Real(6 * k - 1, wp);
    zpow *= inv_zeta;
    const Real ut = u * zpow;
    const Real vt = v * zpow;
    const long size = std::max(magnitude_exponent(ut), magnitude_exponent(vt));
    if (size > previous) break;
    previous = size;
    const bool odd_k = k % 2 == 1;
    if (odd_k) {
      u_alt -= ut;
      v_alt -= vt;
    } else {
      u_alt += ut;
      v_alt += vt;
    }
    if (k % 2 == 0) {
      const bool negative = (k / 2) % 2 == 1;
      if (negative) {
        ue -= ut;
        ve -= vt;
      } else {
        ue += ut;
        ve += vt;
      }
    } else {
      const bool negative = ((k - 1) / 2) % 2 == 1;
      if (negative) {
        uo -= ut;
        vo -= vt;
      } else {
        uo += ut;
        vo += vt;
      }
    }
    if (size < target) {
      converged = true;
      break;
    }
  }
  if (!converged) return std::nullopt;

  const Real root_pi = sqrt(pi(wp));
  const Real quarter = sqrt(sqrt(t));
  AiryPair out;
  if (xd > 0) {
    const Real decay = exp(-zeta) / (Real(2L, wp) * root_pi);
    out.ai = decay / quarter * u_alt;
    out.ai_prime = -(decay * quarter * v_alt);
  } else {
    const Real theta = zeta - pi(wp) / Real(4L, wp);
    const Real c = cos(theta), s = sin(theta);
    out.ai = (c * ue + s * uo) / (root_pi * quarter);
    out.ai_prime = quarter / root_pi * (s * ve - c * vo);
  }
  out.ai.set_precision(bits);
  out.ai_prime.set_precision(bits);
  return out;
}

AiryPair airy(const Real& x, Precision bits) {
  if (!x.is_finite()) throw DomainError("Airy function of a non-finite argument");
  const double ax = std::fabs(x.to_double());
  if (ax >= kAiryAsymptoticCutoff) {
    if (auto r = airy_asymptotic(x, bits)) return std::move(*r);
    if (ax > kAirySeriesLimit) throw RangeError("Airy precision unattainable at this argument");
  }
  return airy_series(x, bits);
}

Real airy_ai(const Real& x, Precision bits) { return airy(x, bits).ai; }

Real airy_ai_prime(const Real& x, Precision bits) { return airy(x, bits).ai_prime; }

Real airy_kernel(const Real& z, const Real& w, Precision bits) {
  const Precision wp = bits + 8;
  PrecisionGuard pg(wp);
  const Real h = at_precision(w, wp) - at_precision(z, wp);
  const Real threshold = ldexp(Real(1L, wp), -bits / 4);
  Real result;
  if (abs(h) < threshold) {
    // K(m - h/2, m + h/2) = K(m, m) + (h^2/4) int_m^inf (Ai Ai'' - Ai'^2) + O(h^4).
    const Real m = (at_precision(z, wp) + at_precision(w, wp)) / Real(2L, wp);
    const AiryPair p = airy(m, wp);
    const Real a2 = p.ai * p.ai, d2 = p.ai_prime * p.ai_prime;
    const Real diagonal = d2 - m * a2;
    const Real curvature = (Real(-2L, wp) * m * m * a2 + Real(2L, wp) * m * d2 + p.ai * p.ai_prime) / Real(3L, wp);
    result = diagonal + h * h / Real(4L, wp) * curvature;
  } else {
    const long lost = std::max(0L, -h.exponent());
    const AiryPair pz = airy(z, wp + lost);
    const AiryPair pw = airy(w, wp + lost);
    result = (pz.ai * pw.ai_prime - pz.ai_prime * pw.ai) / (at_precision(z, wp + lost) - at_precision(w, wp + lost));
  }
  result.set_precision(bits);
  return result;
}

KernelIntegralCheck kernel_integral_check(const Real& z, const Real& w, Precision bits,
                                          std::optional<double> a_max_override) {
  const double zd = z.to_double(), wd = w.to_double();
  if (zd < -5 || wd < -5) throw DomainError("kernel_integral_check needs z, w >= -5");
  double a_max = 0;
  if (a_max_override) {
    a_max = *a_max_override;
    if (!(a_max > 0)) throw DomainError("a_max must be positive");
  } else {
    // Ai(u) <= e^{-zeta(u)} for u > 0, so stop once zeta(z + a) + zeta(w + a) exceeds the target.
    const double need = (bits + 10) * std::log(2.0);
    a_max = std::max(0.0, -std::min(zd, wd)) + 1;
    while (zeta_of(zd + a_max) + zeta_of(wd + a_max) < need) a_max += 0.5;
  }
  const Precision wp = bits + 16;
  KernelIntegralCheck out;
  out.a_max = a_max;
  out.kernel = airy_kernel(z, w, wp);
  const Real zw = at_precision(z, wp), ww = at_precision(w, wp);
  out.integral = integrate_range(
      0.0, a_max, wp, [&](double a) { return std::min(0.5, oscillation_width(-(std::min(zd, wd) + a))); },
      [&](const Real& a) { return airy_ai(zw + a, wp) * airy_ai(ww + a, wp); });
  out.residual = abs(out.kernel - out.integral).to_double();
  out.kernel.set_precision(bits);
  out.integral.set_precision(bits);
  return out;
}

namespace {

struct TailWindow {
  double z_min;
  double z_max;
};

// Right cutoff: e^{xz} times the decay bound e^{-decay(z)} falls below log_eps.
template <class Decay>
double right_cutoff(double x, double start, double log_eps, Decay decay) {
  double z = std::max(start, 1.0);
  while (x * z - decay(z) > log_eps - 5) z += 0.25;
  return z;
}

}  // namespace

LaplaceComparison laplace_product(const Real& x, const Real& a, const Real& b, Precision bits,
                                  double tail_tolerance) {
  if (x.sign() <= 0) throw DomainError("laplace_product needs x > 0");
  const Precision wp = bits + 16;
  PrecisionGuard pg(wp);
  const Real xw = at_precision(x, wp), aw = at_precision(a, wp), bw = at_precision(b, wp);
  LaplaceComparison out;
  out.closed_form = exp(pow(xw, 3L) / Real(12L, wp) - (aw + bw) * xw / Real(2L, wp) -
                        (aw - bw) * (aw - bw) / (Real(4L, wp) * xw)) /
                    (Real(2L, wp) * sqrt(pi(wp) * xw));

  const double xd = x.to_double(), ad = a.to_double(), bd = b.to_double();
  const double log_eps = std::log(tail_tolerance * out.closed_form.to_double());
  const double shift = std::max(std::fabs(ad), std::fabs(bd)) + 1;
  out.z_max = right_cutoff(xd, shift, log_eps, [&](double z) { return zeta_of(z + ad) + zeta_of(z + bd); });
  // Left tail: int_{-inf}^{z} e^{xs} C^2 |s+a|^{-1/4}|s+b|^{-1/4} ds <= C^2 e^{xz} / (x sqrt(|z| - shift)).
  double z = -(shift + 1);
  auto left_bound = [&](double zz) {
    return std::log(kAiryEnvelope * kAiryEnvelope) + xd * zz - std::log(xd) - 0.5 * std::log(-zz - shift);
  };
  while (left_bound(z) > log_eps) z -= 1;
  out.z_min = z;

  const bool same = ad == bd;
  const double lowest = std::min(ad, bd);
  out.numeric = integrate_range(
      out.z_min, out.z_max, wp, [&](double s) { return oscillation_width(-(s + lowest)); },
      [&](const Real& s) {
        const Real ai_a = airy_ai(s + aw, wp);
        const Real ai_b = same ? ai_a : airy_ai(s + bw, wp);
        return exp(xw * s) * ai_a * ai_b;
      });
  out.relative_error = (abs(out.numeric - out.closed_form) / out.closed_form).to_double();
  out.numeric.set_precision(bits);
  out.closed_form.set_precision(bits);
  return out;
}

LaplaceComparison kernel_laplace_n1(const Real& x, Precision bits, double tail_tolerance) {
  if (x.sign() <= 0) throw DomainError("kernel_laplace_n1 needs x > 0");
  const Precision wp = bits + 16;
  PrecisionGuard pg(wp);
  const Real xw = at_precision(x, wp);
  LaplaceComparison out;
  out.closed_form = exp(pow(xw, 3L) / Real(12L, wp)) / (Real(2L, wp) * sqrt(pi(wp)) * xw * sqrt(xw));

  const double xd = x.to_double();
  const double log_eps = std::log(tail_tolerance * out.closed_form.to_double());
  out.z_max = right_cutoff(xd, 1.0, log_eps, [](double s) { return 2 * zeta_of(s); });
  // K(z, z) = Ai'^2 + |z| Ai^2 <= 2 C^2 sqrt|z| on z <= -1; the tail integral is at most twice the
  // leading term once x|z| >= 1.
  double z = -std::max(2.0, 1.0 / xd);
  auto left_bound = [&](double zz) {
    return std::log(4 * kAiryEnvelope * kAiryEnvelope) + 0.5 * std::log(-zz) + xd * zz - std::log(xd);
  };
  while (left_bound(z) > log_eps) z -= 1;
  out.z_min = z;

  out.numeric = integrate_range(
      out.z_min, out.z_max, wp, [&](double s) { return oscillation_width(-s); },
      [&](const Real& s) {
        const AiryPair p = airy(s, wp);
        return exp(xw * s) * (p.ai_prime * p.ai_prime - s * p.ai * p.ai);
      });
  out.relative_error = (abs(out.numeric - out.closed_form) / out.closed_form).to_double();
  out.numeric.set_precision(bits);
  out.closed_form.set_precision(bits);
  return out;
}

}  // namespace npoint
