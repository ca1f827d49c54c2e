#include "npoint/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <numeric>

#include "npoint/combinatorics.hpp"
#include "npoint/errors.hpp"
#include "npoint/gauss_legendre.hpp"
#include "npoint/parallel.hpp"

namespace npoint {

namespace {

constexpr int kPanelNodes = 16;
constexpr Precision kGuardBits = 16;

struct Grid {
  std::vector<Real> nodes;
  std::vector<Real> weights;
};

// `total` Gauss-Legendre points on [0, length]: uniform panels of 16 points each.
Grid composite_grid(double length, int total, Precision bits) {
  const int per_panel = std::min(total, kPanelNodes);
  const int panels = std::max(1, total / per_panel);
  auto rule = gauss_legendre(per_panel, bits);
  Grid g;
  const Real width = Real(length, bits) / Real(static_cast<long>(panels), bits);
  for (int p = 0; p < panels; ++p) {
    const Real a = width * Real(static_cast<long>(p), bits);
    const MappedRule m = map_rule(*rule, a, a + width);
    g.nodes.insert(g.nodes.end(), m.nodes.begin(), m.nodes.end());
    g.weights.insert(g.weights.end(), m.weights.begin(), m.weights.end());
  }
  return g;
}

// Exponent of the cyclic integrand on link i, in double precision.
double link_exponent(double s, double t, double x) { return -(s - t) * (s - t) / (4 * x) - (s + t) * x / 2; }

// Max-plus sweep: largest integrand exponent on the face s_j = S of [0, S]^n.
double face_max(const std::vector<double>& x, int j, double S) {
  const int n = static_cast<int>(x.size());
  constexpr int M = 48;
  std::vector<double> grid(M);
  for (int k = 0; k < M; ++k) grid[k] = S * k / (M - 1);
  if (n == 1) return link_exponent(S, S, x[0]);
  // best[k] = max over earlier coordinates with the current coordinate at grid[k].
  std::vector<double> best(M);
  for (int k = 0; k < M; ++k) best[k] = link_exponent(S, grid[k], x[j]);
  for (int step = 1; step < n - 1; ++step) {
    const double xi = x[(j + step) % n];
    std::vector<double> next(M, -std::numeric_limits<double>::infinity());
    for (int k = 0; k < M; ++k)
      for (int l = 0; l < M; ++l) next[l] = std::max(next[l], best[k] + link_exponent(grid[k], grid[l], xi));
    best = std::move(next);
  }
  const double last = x[(j + n - 1) % n];
  double out = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < M; ++k) out = std::max(out, best[k] + link_exponent(grid[k], S, last));
  return out;
}

double automatic_radius(const std::vector<double>& x, double target) {
  const double sum = std::accumulate(x.begin(), x.end(), 0.0);
  const double log_eps = std::log(target / 100);
  double S = -log_eps / sum;
  for (int it = 0; it < 60; ++it) {
    double worst = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < static_cast<int>(x.size()); ++j) worst = std::max(worst, face_max(x, j, S));
    if (worst < log_eps) return S;
    S *= 1.5;
  }
  throw ConvergenceError("no truncation radius found for the orthant integral");
}

// Tensor Gauss-Legendre value of the orthant integral (without prefactor) as a transfer-matrix trace.
Real orthant_trace(const std::vector<Real>& x, const Grid& grid, Precision bits) {
  const int n = static_cast<int>(x.size());
  const std::size_t N = grid.nodes.size();
  PrecisionGuard guard(bits);
  std::vector<Real> inv4x, halfx;
  for (const Real& xi : x) {
    inv4x.push_back(Real(1L, bits) / (Real(4L, bits) * xi));
    halfx.push_back(xi / Real(2L, bits));
  }
  auto exponent = [&](std::size_t a, std::size_t b, int i) {
    const Real d = grid.nodes[a] - grid.nodes[b];
    return -(d * d * inv4x[i]) - (grid.nodes[a] + grid.nodes[b]) * halfx[i];
  };

  if (n == 1) {
    Real sum(0L, bits);
    for (std::size_t a = 0; a < N; ++a) sum.add_product(grid.weights[a], exp(exponent(a, a, 0)));
    return sum;
  }
  if (n == 2) {
    std::vector<Real> rows(N, Real(0L, bits));
    parallel_for(N, [&](std::size_t a) {
      Real row(0L, bits);
      for (std::size_t b = 0; b < N; ++b)
        row.add_product(grid.weights[b], exp(exponent(a, b, 0) + exponent(b, a, 1)));
      rows[a] = grid.weights[a] * row;
    });
    Real sum(0L, bits);
    for (const Real& r : rows) sum += r;
    return sum;
  }

  auto build = [&](int i) {
    std::vector<Real> m(N * N);
    parallel_for(N, [&](std::size_t a) {
      for (std::size_t b = 0; b < N; ++b) m[a * N + b] = grid.weights[a] * exp(exponent(a, b, i));
    });
    return m;
  };
  std::vector<Real> product = build(0);
  for (int i = 1; i < n - 1; ++i) {
    const std::vector<Real> next = build(i);
    std::vector<Real> out(N * N);
    parallel_for(N, [&](std::size_t a) {
      for (std::size_t c = 0; c < N; ++c) {
        Real acc(0L, bits);
        for (std::size_t b = 0; b < N; ++b) acc.add_product(product[a * N + b], next[b * N + c]);
        out[a * N + c] = std::move(acc);
      }
    });
    product = std::move(out);
  }
  const std::vector<Real> last = build(n - 1);
  std::vector<Real> diag(N, Real(0L, bits));
  parallel_for(N, [&](std::size_t a) {
    Real acc(0L, bits);
    for (std::size_t b = 0; b < N; ++b) acc.add_product(product[a * N + b], last[b * N + a]);
    diag[a] = std::move(acc);
  });
  Real sum(0L, bits);
  for (const Real& d : diag) sum += d;
  return sum;
}

void check_positive(std::span<const Real> x, const char* what) {
  if (x.empty()) throw DomainError(std::string(what) + ": empty argument");
  for (const Real& xi : x)
    if (!(xi.sign() > 0) || !xi.is_finite()) throw DomainError(std::string(what) + ": arguments must be positive");
}

}  // namespace

void QuadratureSpec::validate() const {
  if (precision < 64) throw DomainError("quadrature precision must be at least 64 bits");
  if (nodes_per_dim < 8) throw DomainError("nodes_per_dim must be at least 8");
  if (truncation_radius < 0) throw DomainError("truncation radius must be positive");
  if (refinement_levels < 1) throw DomainError("refinement_levels must be positive");
  if (!(target_abs_error > 0)) throw DomainError("target_abs_error must be positive");
  if (max_points < 1) throw DomainError("max_points must be positive");
}

Real e_closed_n1(const Real& x) {
  if (x.sign() <= 0) throw DomainError("e_closed_n1: x must be positive");
  return exp(pow(x, 3L) / 12) / (2 * sqrt(pi(x.precision())) * x * sqrt(x));
}

Real e_closed_n2(const Real& x1, const Real& x2) {
  if (x1.sign() <= 0 || x2.sign() <= 0) throw DomainError("e_closed_n2: arguments must be positive");
  const Real s = x1 + x2;
  return exp(pow(s, 3L) / 12) / (2 * sqrt(pi(s.precision())) * s * sqrt(s)) * erfc(sqrt(x1 * x2 * s) / 2);
}

EIntegralResult e_integral(std::span<const Real> x, const QuadratureSpec& spec) {
  spec.validate();
  check_positive(x, "e_integral");
  const int n = static_cast<int>(x.size());
  if (n > spec.max_points) throw SizeLimitError("e_integral: n = " + std::to_string(n) + " exceeds the cap");
  const Precision bits = spec.precision;
  PrecisionGuard guard(bits);

  EIntegralResult out;
  out.n = n;
  for (const Real& xi : x) out.x.push_back(at_precision(xi, bits));

  if (n <= 2 && !spec.force_quadrature) {
    out.value = n == 1 ? e_closed_n1(out.x[0]) : e_closed_n2(out.x[0], out.x[1]);
    out.closed_form = true;
    out.error_estimate = std::ldexp(std::fabs(out.value.to_double()), -static_cast<int>(bits) + 4);
    return out;
  }

  const Precision wp = bits + kGuardBits;
  PrecisionGuard wide(wp);
  std::vector<Real> xw;
  std::vector<double> xd;
  Real cubes(0L, wp), roots(1L, wp);
  for (const Real& xi : x) {
    xw.push_back(at_precision(xi, wp));
    xd.push_back(xi.to_double());
    cubes += pow(xw.back(), 3L);
    roots *= sqrt(xw.back());
  }
  const Real prefactor = exp(cubes / 12) / (ldexp(Real(1L, wp), n) * pow(sqrt(pi(wp)), static_cast<long>(n)) * roots);

  const double S = spec.truncation_radius > 0 ? spec.truncation_radius : automatic_radius(xd, spec.target_abs_error);
  out.truncation_radius = S;

  std::optional<Real> previous;
  int nodes = spec.nodes_per_dim;
  for (int level = 0; level <= spec.refinement_levels; ++level, nodes *= 2) {
    Real value = prefactor * orthant_trace(xw, composite_grid(S, nodes, wp), wp);
    if (previous) {
      const double diff = abs(value - *previous).to_double();
      if (diff < spec.target_abs_error) {
        out.value = at_precision(value, bits);
        out.error_estimate = diff;
        out.nodes_per_dim = nodes;
        return out;
      }
    }
    previous = std::move(value);
  }
  throw ConvergenceError("e_integral: error target not reached within " + std::to_string(spec.refinement_levels) +
                         " node doublings");
}

const Real& cube_root_two(Precision bits) {
  static std::mutex mutex;
  static std::map<Precision, std::unique_ptr<Real>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[bits];
  if (!slot) slot = std::make_unique<Real>(cbrt(Real(2L, bits)));
  return *slot;
}

GResult g_function(std::span<const Real> x, const QuadratureSpec& spec) {
  spec.validate();
  check_positive(x, "g_function");
  const int n = static_cast<int>(x.size());
  if (n > spec.max_points) throw SizeLimitError("g_function: n = " + std::to_string(n) + " exceeds the cap");

  QuadratureSpec local = spec;
  GResult result;
  for (int attempt = 0; attempt < 3; ++attempt) {
    PrecisionGuard guard(local.precision);
    std::vector<Real> xs;
    for (const Real& xi : x) xs.push_back(at_precision(xi, local.precision));

    GResult r;
    r.precision_used = local.precision;
    r.value = Real(0L, local.precision);
    std::map<std::vector<std::string>, std::pair<Real, double>> memo;
    for (const SetPartition& alpha : enumerate_set_partitions(n)) {
      const std::vector<Real> merged = merge_vector<Real>(xs, alpha);
      const int l = alpha.block_count();
      const int sign = l % 2 == 1 ? 1 : -1;
      for (const auto& order : cyclic_coset_reps(l).representatives) {
        std::vector<Real> args;
        std::vector<std::string> key;
        for (int i : order) {
          args.push_back(merged[i]);
          key.push_back(merged[i].to_string());
        }
        auto it = memo.find(key);
        if (it == memo.end()) {
          EIntegralResult e = e_integral(args, local);
          it = memo.emplace(key, std::make_pair(e.value, e.error_estimate)).first;
        }
        GTerm term{alpha.to_string(), order, sign, it->second.first, it->second.second};
        if (sign > 0)
          r.value += term.value;
        else
          r.value -= term.value;
        r.error_estimate += term.error_estimate;
        r.terms.push_back(std::move(term));
      }
    }
    double largest = 0;
    for (const GTerm& t : r.terms) largest = std::max(largest, std::fabs(t.value.to_double()));
    r.cancellation = r.value.is_zero() ? std::numeric_limits<double>::infinity() : largest / std::fabs(r.value.to_double());
    result = std::move(r);
    if (!spec.escalate_precision || result.cancellation <= std::ldexp(1.0, static_cast<int>(local.precision / 4))) break;
    local.precision *= 2;
  }
  return result;
}

FResult f_eval(std::span<const Real> x, const QuadratureSpec& spec) {
  spec.validate();
  check_positive(x, "f_eval");
  const int n = static_cast<int>(x.size());
  const Precision bits = spec.precision;
  PrecisionGuard guard(bits);
  const Real& c = cube_root_two(bits);
  std::vector<Real> scaled;
  Real roots(1L, bits), sum(0L, bits);
  for (const Real& xi : x) {
    const Real xb = at_precision(xi, bits);
    scaled.push_back(xb / c);
    roots *= sqrt(xb);
    sum += xb;
  }
  const Real prefactor = pow(sqrt(2 * pi(bits)), static_cast<long>(n)) / roots;
  FResult out;
  out.g = g_function(scaled, spec);
  out.full = prefactor * out.g.value;
  out.error_estimate = prefactor.to_double() * out.g.error_estimate;
  if (n == 1)
    out.unstable = Real(1L, bits) / (at_precision(x[0], bits) * at_precision(x[0], bits));
  else if (n == 2)
    out.unstable = Real(1L, bits) / sum;
  else
    out.unstable = Real(0L, bits);
  out.stable = out.full - out.unstable;
  return out;
}

std::vector<ErfSeriesRow> erf_series_check(int max_k) {
  if (max_k < 0) throw DomainError("erf_series_check: negative order");
  if (max_k > 40) throw SizeLimitError("erf_series_check: order cap is 40");
  std::vector<ErfSeriesRow> rows;
  for (int k = 0; k <= max_k; ++k) {
    // sqrt(pi) erf(x/2) = sum_n (-1)^n x^{2n+1} / (4^n n! (2n+1)),  e^{x^2/4} = sum_m x^{2m} / (4^m m!).
    Rational sum = 0;
    for (int n = 0; n <= k; ++n) {
      const Integer den = factorial(static_cast<unsigned>(n)) * factorial(static_cast<unsigned>(k - n)) * (2 * n + 1);
      const Rational term = ratio(1, den);
      if (n % 2) sum -= term;
      else sum += term;
    }
    Integer four_k = 1;
    for (int i = 0; i < k; ++i) four_k *= 4;
    sum /= Rational(four_k);
    ErfSeriesRow row;
    row.k = k;
    row.computed = sum;
    row.expected = ratio(factorial(static_cast<unsigned>(k)), factorial(static_cast<unsigned>(2 * k + 1)));
    row.residual = row.computed - row.expected;
    rows.push_back(std::move(row));
  }
  return rows;
}

Real QuadraticForm::coefficient(const Monomial& m) const {
  auto it = coefficients.find(m);
  return it == coefficients.end() ? Real(0L) : it->second;
}

double QuadraticForm::evaluate(std::span<const double> s) const {
  double v = 0;
  for (const auto& [m, a] : coefficients) {
    double t = a.to_double();
    for (int i = 0; i < n; ++i) t *= std::pow(s[i], m[i]);
    v += t;
  }
  return v;
}

QuadraticForm QuadraticForm::scaled(const Real& lambda) const {
  QuadraticForm q = *this;
  for (auto& [m, a] : q.coefficients) a = a * pow(lambda, static_cast<long>(TruncatedSeries::degree(m)));
  return q;
}

namespace {

struct OrthantLayout {
  double radius = 0;
  int nodes = 0;
};

void check_form(const QuadraticForm& q) {
  if (q.n < 1) throw DomainError("quadratic form needs at least one variable");
  if (q.n > 3) throw SizeLimitError("orthant exponential integrals are limited to n <= 3");
  for (const auto& [m, a] : q.coefficients) {
    if (static_cast<int>(m.size()) != q.n) throw DomainError("monomial arity mismatch");
    for (int e : m)
      if (e < 0) throw DomainError("negative exponent in quadratic form");
    if (TruncatedSeries::degree(m) > 2) throw DomainError("quadratic form has a monomial of degree > 2");
  }
}

// Radius outside which e^Q is below 1e-30 of its orthant maximum, from a Cholesky factor of -A.
double decay_radius(const QuadraticForm& q) {
  const int n = q.n;
  std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
  std::vector<double> b(n, 0.0);
  double c = 0;
  for (const auto& [m, a] : q.coefficients) {
    const double v = a.to_double();
    const int deg = TruncatedSeries::degree(m);
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < m[i]; ++k) idx.push_back(i);
    if (deg == 0) c += v;
    else if (deg == 1) b[idx[0]] += v;
    else if (idx[0] == idx[1]) A[idx[0]][idx[0]] -= v;
    else {
      A[idx[0]][idx[1]] -= v / 2;
      A[idx[1]][idx[0]] -= v / 2;
    }
  }
  // Cholesky of the positive definite -Q_2, then the inverse to bound its smallest eigenvalue.
  std::vector<std::vector<double>> L(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      double s = A[i][j];
      for (int k = 0; k < j; ++k) s -= L[i][k] * L[j][k];
      if (i == j) {
        if (s <= 0) throw DomainError("quadratic part of Q must be negative definite");
        L[i][i] = std::sqrt(s);
      } else {
        L[i][j] = s / L[j][j];
      }
    }
  double frob = 0;
  for (int col = 0; col < n; ++col) {
    std::vector<double> y(n), z(n);
    for (int i = 0; i < n; ++i) {
      double s = i == col ? 1.0 : 0.0;
      for (int k = 0; k < i; ++k) s -= L[i][k] * y[k];
      y[i] = s / L[i][i];
    }
    for (int i = n - 1; i >= 0; --i) {
      double s = y[i];
      for (int k = i + 1; k < n; ++k) s -= L[k][i] * z[k];
      z[i] = s / L[i][i];
    }
    for (double v : z) frob += v * v;
  }
  const double lambda = 1 / std::sqrt(frob);
  const double bn = std::sqrt(std::inner_product(b.begin(), b.end(), b.begin(), 0.0));
  const double q_max = c + bn * bn / (4 * lambda);
  const double drop = q_max - c + 69.0;  // e^{-69} ~ 1e-30
  return (bn + std::sqrt(bn * bn + 4 * lambda * drop)) / (2 * lambda);
}

Real orthant_fixed(const QuadraticForm& q, const OrthantLayout& layout, Precision bits) {
  PrecisionGuard guard(bits);
  const Grid grid = composite_grid(layout.radius, layout.nodes, bits);
  const std::size_t N = grid.nodes.size();
  std::vector<std::pair<Monomial, Real>> terms;
  for (const auto& [m, a] : q.coefficients) terms.emplace_back(m, at_precision(a, bits));
  std::size_t total = 1;
  for (int i = 0; i < q.n; ++i) total *= N;
  // One slot per leading index; each worker sweeps the remaining coordinates in order.
  std::vector<Real> slices(N, Real(0L, bits));
  parallel_for(N, [&](std::size_t first) {
    Real acc(0L, bits);
    std::vector<std::size_t> idx(q.n, 0);
    idx[0] = first;
    const std::size_t inner = total / N;
    for (std::size_t flat = 0; flat < inner; ++flat) {
      std::size_t r = flat;
      for (int i = q.n - 1; i >= 1; --i) {
        idx[i] = r % N;
        r /= N;
      }
      Real exponent(0L, bits), weight(1L, bits);
      for (const auto& [m, a] : terms) {
        Real t = a;
        for (int i = 0; i < q.n; ++i)
          for (int k = 0; k < m[i]; ++k) t *= grid.nodes[idx[i]];
        exponent += t;
      }
      for (int i = 0; i < q.n; ++i) weight *= grid.weights[idx[i]];
      acc.add_product(weight, exp(exponent));
    }
    slices[first] = std::move(acc);
  });
  Real sum(0L, bits);
  for (const Real& s : slices) sum += s;
  return sum;
}

std::pair<Real, OrthantLayout> orthant_converged(const QuadraticForm& q, const QuadratureSpec& spec) {
  check_form(q);
  spec.validate();
  OrthantLayout layout;
  layout.radius = spec.truncation_radius > 0 ? spec.truncation_radius : decay_radius(q);
  const Precision wp = spec.precision + kGuardBits;
  const double tolerance = std::ldexp(1.0, -static_cast<int>(spec.precision) * 3 / 4);
  std::optional<Real> previous;
  layout.nodes = spec.nodes_per_dim;
  for (int level = 0; level <= spec.refinement_levels; ++level, layout.nodes *= 2) {
    Real value = orthant_fixed(q, layout, wp);
    if (previous && (abs(value - *previous) / abs(value)).to_double() < tolerance) return {value, layout};
    previous = std::move(value);
  }
  throw ConvergenceError("orthant exponential integral did not converge");
}

}  // namespace

Real orthant_exponential_integral(const QuadraticForm& q, const QuadratureSpec& spec) {
  Real v = orthant_converged(q, spec).first;
  v.set_precision(spec.precision);
  return v;
}

GkzResidual gkz_residual(const QuadraticForm& q, const QuadratureSpec& spec) {
  auto [base, layout] = orthant_converged(q, spec);
  const Precision wp = spec.precision + kGuardBits;
  PrecisionGuard guard(wp);
  const int n = q.n;

  auto with_shift = [&](const std::vector<std::pair<Monomial, Real>>& shifts) {
    QuadraticForm p = q;
    for (const auto& [m, h] : shifts) p.coefficients[m] = at_precision(p.coefficient(m), wp) + h;
    return orthant_fixed(p, layout, wp);
  };
  auto step_for = [&](const Monomial& m, int divisor) {
    const double scale = std::max(1.0, std::fabs(q.coefficient(m).to_double()));
    return ldexp(Real(scale, wp), -static_cast<long>(spec.precision) / divisor);
  };
  auto first_derivative = [&](const Monomial& m) {
    const Real h = step_for(m, 3);
    return (with_shift({{m, h}}) - with_shift({{m, -h}})) / (2 * h);
  };

  GkzResidual out;
  out.value = at_precision(base, spec.precision);

  // All monomials with 1 <= |m| <= 2, so the equations see every coefficient.
  std::vector<Monomial> monomials;
  for (int i = 0; i < n; ++i) {
    Monomial m(n, 0);
    m[i] = 1;
    monomials.push_back(m);
    for (int j = i; j < n; ++j) {
      Monomial m2(n, 0);
      ++m2[i];
      ++m2[j];
      monomials.push_back(m2);
    }
  }
  std::map<Monomial, Real> derivative;
  for (const Monomial& m : monomials) derivative.emplace(m, first_derivative(m));

  for (int i = 0; i < n; ++i) {
    Real sum = base;
    for (const Monomial& m : monomials)
      if (m[i] != 0) sum += Real(static_cast<long>(m[i]), wp) * at_precision(q.coefficient(m), wp) * derivative.at(m);
    out.homogeneity.push_back((abs(sum) / base).to_double());
  }

  if (n == 1) {
    const Monomial m1{1}, m2{2};
    const Real h = step_for(m1, 4);
    const Real second = (with_shift({{m1, h}}) - 2 * base + with_shift({{m1, -h}})) / (h * h);
    out.exchange = (abs(second - derivative.at(m2)) / base).to_double();
    out.exchange_equation = "d2/da_(1)^2 - d/da_(2)";
  } else {
    Monomial e1(n, 0), e2(n, 0), e12(n, 0);
    e1[0] = 1;
    e2[1] = 1;
    e12[0] = e12[1] = 1;
    const Real h1 = step_for(e1, 4), h2 = step_for(e2, 4);
    const Real mixed = (with_shift({{e1, h1}, {e2, h2}}) - with_shift({{e1, h1}, {e2, -h2}}) -
                        with_shift({{e1, -h1}, {e2, h2}}) + with_shift({{e1, -h1}, {e2, -h2}})) /
                       (4 * h1 * h2);
    out.exchange = (abs(mixed - derivative.at(e12)) / base).to_double();
    out.exchange_equation = "d2/da_(e1)da_(e2) - d/da_(e1+e2)";
  }

  const Real lambda = Real(13L, wp) / Real(10L, wp);
  const Real scaled = orthant_converged(q.scaled(lambda), spec).first;
  out.scaling = (abs(pow(lambda, static_cast<long>(n)) * scaled - base) / base).to_double();
  return out;
}

}  // namespace npoint
