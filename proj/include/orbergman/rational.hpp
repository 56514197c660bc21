#pragma once

// Exact integer/rational helpers on top of GMP.

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace orbergman {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses "p/q", an integer, or a decimal literal such as "0.25" or "-1.5e-3"
/// into an exact rational. Decimal literals are read exactly (no binary
/// rounding). Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

/// Canonical text form: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

/// '.'-decimal, locale independent, `digits` significant digits.
std::string format_decimal(double value, int digits = 15);

Integer factorial(long n);
Integer binomial(long n, long k);

Rational power(const Rational& base, unsigned long exponent);

/// Floor division for possibly negative numerators, positive divisor.
long floor_div(long numerator, long divisor);

/// Least nonnegative residue of `value` modulo `modulus` (> 0).
long mod_floor(long value, long modulus);

}  // namespace orbergman
