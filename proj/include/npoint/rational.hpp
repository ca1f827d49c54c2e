#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace npoint {

using Rational = mpq_class;
using Integer = mpz_class;

/// Lowest-terms "num/den" with the sign carried by the numerator; integers print without "/1".
std::string to_string(const Rational& q);

/// Parses "p", "-p" or "p/q". Throws npoint::DomainError on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

/// num/den in lowest terms. Throws npoint::DomainError for a zero denominator.
Rational ratio(const Integer& num, const Integer& den);

Integer factorial(unsigned n);

/// m!! = m(m-2)(m-4)...; (-1)!! = 0!! = 1.
Integer double_factorial(int m);

Integer binomial(unsigned n, unsigned k);

}  // namespace npoint
