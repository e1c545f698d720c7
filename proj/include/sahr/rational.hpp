#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sahr {

using Rational = mpq_class;
using Integer = mpz_class;

// A point with exact rational coordinates.
using Point = std::vector<Rational>;

inline int sign(const Rational& q) { return sgn(q); }

// num/den in canonical form. GMP does not canonicalize two-argument constructors.
inline Rational frac(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// Parses "p/q", an integer, or a terminating decimal ("0.1", "-2.5e-3") exactly.
// Throws Error(ParseError) on malformed input.
Rational parse_rational(std::string_view text);

// Always "p/q" with q >= 1.
std::string format_rational(const Rational& q);

Integer ceil(const Rational& q);
Integer floor(const Rational& q);

Rational pow(const Rational& base, unsigned exponent);
Integer binomial(unsigned n, unsigned k);

// Closest double; only for reporting and for filtered predicates.
double to_double(const Rational& q);

// Rational approximation of a double (exact binary value).
Rational from_double(double x);

}  // namespace sahr
