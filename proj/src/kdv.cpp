#include "npoint/kdv.hpp"

#include <algorithm>
#include <numeric>

#include "npoint/errors.hpp"

namespace npoint {

namespace {

Integer pow_integer(long base, int e) {
  Integer r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

// Copies a series into a larger variable set; variable k goes to position targets[k].
TruncatedSeries embed(const TruncatedSeries& s, int variables, const std::vector<int>& targets) {
  TruncatedSeries out(variables, s.order());
  Monomial m(variables, 0);
  for (const auto& [src, c] : s.terms()) {
    std::fill(m.begin(), m.end(), 0);
    for (std::size_t k = 0; k < targets.size(); ++k) m[targets[k]] = src[k];
    out.add_term(m, c);
  }
  return out;
}

TruncatedSeries linear(int variables, int order, const std::vector<std::pair<int, int>>& terms) {
  TruncatedSeries s(variables, order);
  for (auto [index, sign] : terms) {
    Monomial m(variables, 0);
    m[index] = 1;
    s.add_term(m, Rational(sign));
  }
  return s;
}

void collect_partitions(int max_part, int remaining, std::vector<int>& parts, const TruncatedSeries& product,
                        const std::vector<TruncatedSeries>& power_sums, TauCoefficients& tau, TruncatedSeries& out) {
  const IntegerPartition mu(parts);
  const Rational c = tau.coefficient(mu);
  if (c != 0) out += product * (c / Rational(mu.automorphisms()));
  int top = std::min(max_part, remaining);
  if (top % 2 == 0) --top;
  for (int k = top; k >= 1; k -= 2) {
    parts.push_back(k);
    collect_partitions(k, remaining - k, parts, product * power_sums[k], power_sums, tau, out);
    parts.pop_back();
  }
}

}  // namespace

std::vector<AsymptoticCoefficients> asymptotic_coeffs(int k_max) {
  if (k_max < 0) throw DomainError("asymptotic_coeffs: negative k_max");
  if (k_max > 50) throw SizeLimitError("asymptotic_coeffs: k_max cap is 50");
  std::vector<AsymptoticCoefficients> out;
  for (int k = 0; k <= k_max; ++k) {
    AsymptoticCoefficients c;
    c.k = k;
    c.a = k == 0 ? Rational(1)
                 : ratio(double_factorial(6 * k - 1), pow_integer(36, k) * factorial(static_cast<unsigned>(2 * k)));
    c.adot = c.a * ratio(1 + 6 * k, 1 - 6 * k);
    out.push_back(std::move(c));
  }
  return out;
}

TruncatedSeries bilinear_kernel(int order) {
  if (order < 0) throw DomainError("bilinear_kernel: negative order");
  if (order > 40) throw SizeLimitError("bilinear_kernel: order cap is 40");
  const auto coeffs = asymptotic_coeffs(order / 3);
  // Numerator in X = 1/x, Y = 1/y after clearing (x - y) = (Y - X)/(XY):
  //   sum a_i adot_j (X^{3i+1} Y^{3j} - Y^{3i+1} X^{3j}), divided by (X - Y) gives minus the kernel.
  TruncatedSeries numerator(2, order + 1);
  for (int i = 0; 3 * i <= order; ++i)
    for (int j = 0; 3 * (i + j) <= order; ++j) {
      const Rational c = coeffs[i].a * coeffs[j].adot;
      numerator.add_term({3 * i + 1, 3 * j}, c);
      numerator.add_term({3 * j, 3 * i + 1}, -c);
    }
  TruncatedSeries p = numerator.divide_by_binomial(0, 1, -1);
  return p * Rational(-1);
}

std::vector<RescalingRow> rescaling_consistency(int order) {
  if (order < 0 || order > 40) throw SizeLimitError("rescaling_consistency: order must lie in [0, 40]");
  const TruncatedSeries real_kernel = bilinear_kernel(order);
  // Complex coefficients a_k = (-i)^k (6k-1)!!/(72^k (2k)!).
  const GaussianRational minus_i{Rational(0), Rational(-1)};
  std::vector<GaussianRational> a(order / 3 + 1), adot(order / 3 + 1);
  GaussianRational phase{Rational(1), Rational(0)};
  for (int k = 0; k <= order / 3; ++k) {
    const Rational mag = k == 0 ? Rational(1)
                                : ratio(double_factorial(6 * k - 1), pow_integer(72, k) * factorial(static_cast<unsigned>(2 * k)));
    a[k] = phase * GaussianRational{mag, Rational(0)};
    adot[k] = a[k] * GaussianRational{ratio(1 + 6 * k, 1 - 6 * k), Rational(0)};
    phase = phase * minus_i;
  }
  // Numerator as above, real and imaginary parts divided separately.
  TruncatedSeries num_re(2, order + 1), num_im(2, order + 1);
  for (int i = 0; 3 * i <= order; ++i)
    for (int j = 0; 3 * (i + j) <= order; ++j) {
      const GaussianRational c = a[i] * adot[j];
      num_re.add_term({3 * i + 1, 3 * j}, c.re);
      num_re.add_term({3 * j, 3 * i + 1}, -c.re);
      num_im.add_term({3 * i + 1, 3 * j}, c.im);
      num_im.add_term({3 * j, 3 * i + 1}, -c.im);
    }
  const TruncatedSeries k_re = num_re.divide_by_binomial(0, 1, -1) * Rational(-1);
  const TruncatedSeries k_im = num_im.divide_by_binomial(0, 1, -1) * Rational(-1);

  std::vector<RescalingRow> rows;
  for (int d = 0; d <= order; ++d) {
    RescalingRow row;
    row.degree = d;
    const TruncatedSeries re = k_re.homogeneous_part(d), im = k_im.homogeneous_part(d);
    const TruncatedSeries real_part = real_kernel.homogeneous_part(d);
    for (const auto& [m, c] : re.terms()) row.complex_kernel[m].re = c;
    for (const auto& [m, c] : im.terms()) row.complex_kernel[m].im = c;
    if (d % 3 == 0) {
      // i^d 2^{-d/3} = (-i)^{d/3} 2^{-d/3} for d divisible by 3.
      GaussianRational factor{Rational(1), Rational(0)};
      for (int s = 0; s < d / 3; ++s) factor = factor * GaussianRational{Rational(0), Rational(-1, 2)};
      for (const auto& [m, c] : real_part.terms())
        row.transported[m] = GaussianRational{c, Rational(0)} * factor;
    } else if (!real_part.is_zero()) {
      row.transported[{d, 0}] = GaussianRational{Rational(1), Rational(0)};
    }
    row.matches = row.complex_kernel == row.transported;
    rows.push_back(std::move(row));
  }
  return rows;
}

Rational TauCoefficients::coefficient(const IntegerPartition& mu) {
  if (!mu.all_odd()) throw DomainError("tau coefficient: partition " + mu.to_string() + " has an even part");
  if (mu.weight() > 60) throw SizeLimitError("tau coefficient: |mu| cap is 60");
  std::vector<int> exponents;
  Integer weight = 1;
  for (int part : mu.parts()) {
    exponents.push_back((part - 1) / 2);
    weight *= double_factorial(part);
  }
  return Rational(weight) * disconnected(std::move(exponents));
}

Rational TauCoefficients::disconnected(std::vector<int> exponents) {
  std::sort(exponents.begin(), exponents.end(), std::greater<>());
  if (exponents.empty()) return 1;
  if (auto it = memo_.find(exponents); it != memo_.end()) return it->second;

  // Block containing the first element: first + a sub-multiset of the rest, counted with
  // binomial multiplicities, times the disconnected value of the complement.
  const int first = exponents.front();
  std::vector<std::pair<int, int>> groups;  // (exponent, count) of the remaining elements
  for (std::size_t i = 1; i < exponents.size(); ++i) {
    if (!groups.empty() && groups.back().first == exponents[i])
      ++groups.back().second;
    else
      groups.emplace_back(exponents[i], 1);
  }
  std::vector<int> take(groups.size(), 0);
  Rational total = 0;
  while (true) {
    std::vector<int> block{first}, rest;
    Integer mult = 1;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      mult *= binomial(static_cast<unsigned>(groups[g].second), static_cast<unsigned>(take[g]));
      block.insert(block.end(), take[g], groups[g].first);
      rest.insert(rest.end(), groups[g].second - take[g], groups[g].first);
    }
    if (genus_from_dimension(block)) {
      const Rational connected = engine_.correlator_any_genus(block);
      if (connected != 0) total += Rational(mult) * connected * disconnected(rest);
    }
    std::size_t g = 0;
    while (g < groups.size() && take[g] == groups[g].second) take[g++] = 0;
    if (g == groups.size()) break;
    ++take[g];
  }
  memo_.emplace(std::move(exponents), total);
  return total;
}

TruncatedSeries tau_series(TauCoefficients& tau, int variables, int order) {
  if (variables < 1) throw DomainError("tau_series: needs at least one variable");
  if (order < 0) throw DomainError("tau_series: negative order");
  if (order > 60) throw SizeLimitError("tau_series: order cap is 60");
  std::vector<TruncatedSeries> power_sums;
  for (int k = 0; k <= order; ++k) {
    TruncatedSeries t(variables, order);
    if (k > 0)
      for (int v = 0; v < variables; ++v) {
        Monomial m(variables, 0);
        m[v] = k;
        t.add_term(m, Rational(1, k));
      }
    power_sums.push_back(std::move(t));
  }
  TruncatedSeries out(variables, order);
  std::vector<int> parts;
  collect_partitions(order, order, parts, TruncatedSeries::constant(variables, order, 1), power_sums, tau, out);
  return out;
}

TruncatedSeries two_variable_identity_check(TauCoefficients& tau, int order) {
  if (order < 0) throw DomainError("two_variable_identity_check: negative order");
  if (order > 24) throw SizeLimitError("two_variable_identity_check: order cap is 24");
  return tau_series(tau, 2, order) + bilinear_kernel(order);
}

TruncatedSeries fay_identity_check(TauCoefficients& tau, int n, int order) {
  if (n < 1 || n > 2) throw SizeLimitError("fay_identity_check: n must be 1 or 2");
  if (order < 0) throw DomainError("fay_identity_check: negative order");
  if (order > 16) throw SizeLimitError("fay_identity_check: order cap is 16");
  const int vars = 2 * n;
  const TruncatedSeries p = bilinear_kernel(order) * Rational(-1);
  const TruncatedSeries tau_part = tau_series(tau, vars, order);

  // Variables: X_i at i, Y_j at n + j.
  TruncatedSeries lhs = tau_part;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      lhs = lhs * linear(vars, order, {{j, 1}, {i, -1}});
      lhs = lhs * linear(vars, order, {{n + j, 1}, {n + i, -1}});
    }

  std::vector<int> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 0);
  TruncatedSeries rhs(vars, order);
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (sigma[i] > sigma[j]) ++inversions;
    TruncatedSeries term = TruncatedSeries::constant(vars, order, inversions % 2 ? -1 : 1);
    for (int i = 0; i < n; ++i) {
      term = term * embed(p, vars, {i, n + sigma[i]});
      for (int j = 0; j < n; ++j)
        if (j != sigma[i]) term = term * linear(vars, order, {{i, 1}, {n + j, 1}});
    }
    rhs += term;
  } while (std::next_permutation(sigma.begin(), sigma.end()));

  const TruncatedSeries lhs_t = lhs.truncated(order), rhs_t = rhs.truncated(order);
  return lhs_t - rhs_t;
}

bool KdvResidual::all_zero() const {
  return std::all_of(coefficients.begin(), coefficients.end(), [](const auto& e) { return e.second == 0; });
}

std::optional<std::pair<std::vector<int>, Rational>> KdvResidual::first_nonzero() const {
  for (const auto& [s, c] : coefficients)
    if (c != 0) return std::make_pair(s, c);
  return std::nullopt;
}

KdvResidual kdv_residual(const CorrelatorTable& table, int max_degree, std::optional<int> max_genus) {
  if (max_degree < 0) throw DomainError("kdv_residual: negative degree");
  const auto& coverage = table.coverage();
  const int genus = max_genus ? *max_genus : (coverage ? coverage->max_genus : 0);
  if (genus < 0) throw DomainError("kdv_residual: negative genus");
  if (!coverage || coverage->max_points < max_degree || coverage->max_genus < genus)
    throw MissingDataError("kdv_residual: table does not cover genus " + std::to_string(genus) + " with " +
                           std::to_string(max_degree) + " points");

  auto with = [](std::vector<int> base, int zeros, std::optional<int> extra = std::nullopt) {
    base.insert(base.end(), zeros, 0);
    if (extra) base.push_back(*extra);
    return base;
  };

  KdvResidual out;
  out.max_degree = max_degree;
  out.max_genus = genus;
  for (int size = 0; size <= max_degree - 5; ++size) {
    for (int g = 0; g <= genus; ++g) {
      // <tau_0^2 tau_1 S>_g has sum S = 3g - 1 + |S|.
      const int total = 3 * g - 1 + size;
      if (total < 0) continue;
      for (const auto& s : exponent_multisets(size, total)) {
        Rational r = table.value_any_genus(with(s, 2, 1));
        // Sub-multisets A of S with the binomial multiplicity, B = S \ A.
        std::vector<std::pair<int, int>> groups;
        for (int e : s) {
          if (!groups.empty() && groups.back().first == e)
            ++groups.back().second;
          else
            groups.emplace_back(e, 1);
        }
        std::vector<int> take(groups.size(), 0);
        while (true) {
          std::vector<int> a, b;
          Integer mult = 1;
          for (std::size_t k = 0; k < groups.size(); ++k) {
            mult *= binomial(static_cast<unsigned>(groups[k].second), static_cast<unsigned>(take[k]));
            a.insert(a.end(), take[k], groups[k].first);
            b.insert(b.end(), groups[k].second - take[k], groups[k].first);
          }
          // Both factors need a genus; then each is at most the genus of the monomial.
          const std::vector<int> left = with(a, 2), right = with(b, 3);
          if (genus_from_dimension(left) && genus_from_dimension(right))
            r -= Rational(mult) * table.value_any_genus(left) * table.value_any_genus(right);
          std::size_t k = 0;
          while (k < groups.size() && take[k] == groups[k].second) take[k++] = 0;
          if (k == groups.size()) break;
          ++take[k];
        }
        r -= Rational(1, 12) * table.value_any_genus(with(s, 5));
        out.coefficients.emplace(s, r);
      }
    }
  }
  return out;
}

}  // namespace npoint
