#include "npoint/series.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "npoint/errors.hpp"

namespace npoint {

TruncatedSeries::TruncatedSeries(int variables, int order) : variables_(variables), order_(order) {
  if (variables < 1) throw DomainError("series needs at least one variable");
  if (order < 0) throw DomainError("negative truncation order");
}

TruncatedSeries TruncatedSeries::constant(int variables, int order, const Rational& c) {
  TruncatedSeries s(variables, order);
  s.add_term(Monomial(variables, 0), c);
  return s;
}

TruncatedSeries TruncatedSeries::variable(int variables, int order, int index) {
  TruncatedSeries s(variables, order);
  Monomial m(variables, 0);
  m.at(index) = 1;
  s.add_term(m, 1);
  return s;
}

int TruncatedSeries::degree(const Monomial& m) { return std::accumulate(m.begin(), m.end(), 0); }

Rational TruncatedSeries::coefficient(const Monomial& m) const {
  if (static_cast<int>(m.size()) != variables_) throw DomainError("monomial arity mismatch");
  if (degree(m) > order_) throw DomainError("coefficient requested beyond truncation order");
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

void TruncatedSeries::add_term(const Monomial& m, const Rational& c) {
  if (static_cast<int>(m.size()) != variables_) throw DomainError("monomial arity mismatch");
  if (degree(m) > order_ || c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

int TruncatedSeries::lowest_degree() const {
  int best = -1;
  for (const auto& [m, c] : terms_) {
    const int d = degree(m);
    if (best < 0 || d < best) best = d;
  }
  return best;
}

TruncatedSeries TruncatedSeries::homogeneous_part(int d) const {
  TruncatedSeries s(variables_, order_);
  for (const auto& [m, c] : terms_)
    if (degree(m) == d) s.terms_.emplace(m, c);
  return s;
}

TruncatedSeries TruncatedSeries::truncated(int order) const {
  TruncatedSeries s(variables_, std::min(order, order_));
  for (const auto& [m, c] : terms_)
    if (degree(m) <= s.order_) s.terms_.emplace(m, c);
  return s;
}

void TruncatedSeries::check_compatible(const TruncatedSeries& o) const {
  if (o.variables_ != variables_) throw DomainError("series arity mismatch");
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& o) {
  check_compatible(o);
  if (o.order_ < order_) *this = truncated(o.order_);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& o) {
  check_compatible(o);
  if (o.order_ < order_) *this = truncated(o.order_);
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
  a.check_compatible(b);
  TruncatedSeries r(a.variables_, std::min(a.order_, b.order_));
  Monomial m(a.variables_);
  for (const auto& [ma, ca] : a.terms_) {
    const int da = TruncatedSeries::degree(ma);
    if (da > r.order_) continue;
    for (const auto& [mb, cb] : b.terms_) {
      if (da + TruncatedSeries::degree(mb) > r.order_) continue;
      for (int k = 0; k < a.variables_; ++k) m[k] = ma[k] + mb[k];
      r.add_term(m, ca * cb);
    }
  }
  return r;
}

TruncatedSeries TruncatedSeries::derivative(int index) const {
  // d/dx_i lowers the degree by one, so the result is exact to order - 1.
  TruncatedSeries s(variables_, std::max(order_ - 1, 0));
  for (const auto& [m, c] : terms_) {
    if (m.at(index) == 0) continue;
    Monomial d = m;
    --d[index];
    s.add_term(d, c * m[index]);
  }
  return s;
}

TruncatedSeries TruncatedSeries::swapped(int i, int j) const {
  TruncatedSeries s(variables_, order_);
  for (const auto& [m, c] : terms_) {
    Monomial d = m;
    std::swap(d.at(i), d.at(j));
    s.terms_.emplace(std::move(d), c);
  }
  return s;
}

TruncatedSeries TruncatedSeries::divide_by_binomial(int i, int j, int sign) const {
  if (i == j || i < 0 || j < 0 || i >= variables_ || j >= variables_) throw DomainError("bad divisor variables");
  // Long division in x_i: peel the highest power of x_i, quotient term c*x^(m - e_i).
  TruncatedSeries rest = *this;
  TruncatedSeries quotient(variables_, std::max(order_ - 1, 0));
  while (true) {
    auto lead = rest.terms_.end();
    for (auto it = rest.terms_.begin(); it != rest.terms_.end(); ++it)
      if (it->first[i] > 0 && (lead == rest.terms_.end() || it->first[i] > lead->first[i])) lead = it;
    if (lead == rest.terms_.end()) break;
    Monomial q = lead->first;
    const Rational c = lead->second;
    --q[i];
    quotient.add_term(q, c);
    rest.terms_.erase(lead);
    Monomial shifted = q;
    ++shifted[j];
    // Degree of `shifted` equals that of the removed term, so it stays within the order.
    rest.add_term(shifted, -c * sign);
  }
  if (!rest.is_zero()) throw IntegrityError("division by binomial leaves a nonzero remainder");
  return quotient;
}

Real TruncatedSeries::evaluate(std::span<const Real> point) const {
  if (static_cast<int>(point.size()) != variables_) throw DomainError("evaluation point arity mismatch");
  Real sum = 0;
  for (const auto& [m, c] : terms_) {
    Real t(c);
    for (int k = 0; k < variables_; ++k)
      if (m[k] != 0) t *= pow(point[k], static_cast<long>(m[k]));
    sum += t;
  }
  return sum;
}

std::string TruncatedSeries::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << npoint::to_string(c);
    for (int k = 0; k < variables_; ++k)
      if (m[k] != 0) os << "*x" << k << (m[k] > 1 ? "^" + std::to_string(m[k]) : "");
  }
  if (first) os << "0";
  os << " + O(deg " << order_ + 1 << ")";
  return os.str();
}

TruncatedSeries series_exp(const TruncatedSeries& s) {
  if (s.coefficient(Monomial(s.variables(), 0)) != 0) throw DomainError("series_exp needs a zero constant term");
  TruncatedSeries result = TruncatedSeries::constant(s.variables(), s.order(), 1);
  TruncatedSeries power = result;
  for (int k = 1; k <= s.order(); ++k) {
    power = power * s * Rational(1, k);
    if (power.is_zero()) break;
    result += power;
  }
  return result;
}

}  // namespace npoint
