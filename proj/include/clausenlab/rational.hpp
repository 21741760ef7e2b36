#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace clausenlab {

/// Thrown for mathematical domain violations: inverting zero, a constant
/// that has no square root in the coefficient field, an input off the
/// Markov surface, and so on.
class MathError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Arbitrary-precision rational; gmpxx keeps it canonical (gcd 1, den > 0).
using Rational = mpq_class;
using Integer = mpz_class;

Rational make_rational(long num, long den = 1);

/// Parses "p", "p/q" or a finite decimal such as "-0.25".
Rational parse_rational(std::string_view text);

/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

/// Exact square root if q is the square of a rational.
std::optional<Rational> exact_sqrt(const Rational& q);

Integer factorial(unsigned n);
Integer binomial(unsigned n, unsigned k);

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

}  // namespace clausenlab
