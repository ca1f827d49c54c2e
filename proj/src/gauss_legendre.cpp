#include "npoint/gauss_legendre.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>

#include "npoint/errors.hpp"

namespace npoint {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
template <class T>
std::pair<T, T> legendre(int n, const T& x) {
  T p0 = T(1), p1 = x;
  for (int k = 2; k <= n; ++k) {
    T p2 = (T(2 * k - 1) * x * p1 - T(k - 1) * p0) / T(k);
    p0 = std::move(p1);
    p1 = std::move(p2);
  }
  T dp = T(n) * (x * p1 - p0) / (x * x - T(1));
  return {p1, dp};
}

std::shared_ptr<const GaussLegendreRule> build_rule(int n, Precision bits) {
  auto rule = std::make_shared<GaussLegendreRule>();
  rule->precision = bits;
  rule->nodes.resize(n);
  rule->weights.resize(n);
  const Precision wp = bits + 32;
  PrecisionGuard guard(wp);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double xd = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      auto [p, dp] = legendre<double>(n, xd);
      const double step = p / dp;
      xd -= step;
      if (std::abs(step) < 1e-15) break;
    }
    Real x(xd, wp);
    // Newton doubles the correct bits per step, starting from ~50.
    for (Precision good = 45; good < 2 * wp; good *= 2) {
      auto [p, dp] = legendre<Real>(n, x);
      x -= p / dp;
    }
    auto [p, dp] = legendre<Real>(n, x);
    Real w = Real(2) / ((Real(1) - x * x) * dp * dp);
    x.set_precision(bits);
    w.set_precision(bits);
    // Descending cosine guesses; store ascending.
    rule->nodes[n - 1 - i] = x;
    rule->weights[n - 1 - i] = w;
    rule->nodes[i] = -x;
    rule->weights[i] = w;
  }
  if (n % 2 == 1) rule->nodes[n / 2] = Real(0L, bits);
  return rule;
}

}  // namespace

std::shared_ptr<const GaussLegendreRule> gauss_legendre(int n, Precision bits) {
  if (n < 1) throw DomainError("Gauss-Legendre rule needs at least one node");
  static std::mutex mutex;
  static std::map<std::pair<int, Precision>, std::shared_ptr<const GaussLegendreRule>> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find({n, bits}); it != cache.end()) return it->second;
  }
  auto rule = build_rule(n, bits);
  std::lock_guard lock(mutex);
  return cache.try_emplace({n, bits}, std::move(rule)).first->second;
}

MappedRule map_rule(const GaussLegendreRule& rule, const Real& a, const Real& b) {
  MappedRule m;
  const Real half = (b - a) / Real(2L, rule.precision);
  const Real mid = (a + b) / Real(2L, rule.precision);
  m.nodes.reserve(rule.nodes.size());
  m.weights.reserve(rule.nodes.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    m.nodes.push_back(mid + half * rule.nodes[i]);
    m.weights.push_back(half * rule.weights[i]);
  }
  return m;
}

}  // namespace npoint
