#pragma once

#include <memory>
#include <vector>

#include "npoint/real.hpp"

namespace npoint {

/// Gauss-Legendre nodes and weights on [-1, 1], ascending nodes.
struct GaussLegendreRule {
  std::vector<Real> nodes;
  std::vector<Real> weights;
  Precision precision = 0;
};

/// Rule with `n` points accurate to `bits`. Rules are cached per (n, bits); the cache is
/// guarded by a mutex and entries are immutable once published.
std::shared_ptr<const GaussLegendreRule> gauss_legendre(int n, Precision bits);

/// Rule mapped to [a, b].
struct MappedRule {
  std::vector<Real> nodes;
  std::vector<Real> weights;
};
MappedRule map_rule(const GaussLegendreRule& rule, const Real& a, const Real& b);

/// Composite Gauss-Legendre sum of f over the panels [edges[k], edges[k+1]].
template <class F>
Real integrate_panels(const std::vector<Real>& edges, const GaussLegendreRule& rule, F&& f) {
  Real total(0L, rule.precision);
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const MappedRule m = map_rule(rule, edges[k], edges[k + 1]);
    for (std::size_t i = 0; i < m.nodes.size(); ++i) total.add_product(m.weights[i], f(m.nodes[i]));
  }
  return total;
}

}  // namespace npoint
