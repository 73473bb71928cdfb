#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace flagcert {

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
using Rational = mpq_class;
using Integer = mpz_class;

/// num/den in lowest terms. mpq_class(num, den) does not reduce, so use this
/// for any literal that may share a factor. Throws on a zero denominator.
Rational ratio(const Integer& num, const Integer& den);

/// Parses "p/q", an integer, or a finite decimal such as "-0.4446" or "1e-3".
/// Throws std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Renders as "p/q" (integers as "p/1").
std::string to_fraction_string(const Rational& value);

/// Decimal rendering with `significant` significant digits (round-to-nearest).
std::string to_decimal_string(const Rational& value, int significant = 17);

double to_double(const Rational& value);

/// Nearest multiple of 1/denominator (ties away from zero).
Rational round_to_denominator(double value, const Integer& denominator);

/// Smallest p/q >= value with 1 <= q <= max_denominator.
Rational ceil_with_bounded_denominator(const Rational& value, std::uint32_t max_denominator);

Integer binomial(unsigned n, unsigned k);
Integer falling_factorial(unsigned n, unsigned k);
Integer factorial(unsigned n);

}  // namespace flagcert
