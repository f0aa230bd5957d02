#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>

namespace pivotgrowth {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p/q", an integer, or a decimal string such as "-1.25" or "3e-4".
/// Decimal forms are converted exactly. Throws ParseError on malformed input.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form; integers print without a denominator.
std::string to_string(const Rational& value);

/// Decimal rendering for display only.
std::string to_decimal(const Rational& value, int digits = 12);

/// Exact value of a binary double. Throws ParseError for NaN or infinity.
Rational from_double(double value);

inline Rational abs(const Rational& value) {
    Rational out;
    mpq_abs(out.get_mpq_t(), value.get_mpq_t());
    return out;
}

/// 2^exponent as an exact rational (negative exponents allowed).
Rational pow2(long exponent);

/// base^exponent for exponent >= 0.
Integer ipow(const Integer& base, unsigned long exponent);

/// Bit length of the larger of numerator and denominator.
std::size_t bit_length(const Rational& value);

/// Smallest-effort rational r >= sqrt(value) with r^2 - value <= 2^-rel_bits * value.
/// Returns the exact root when value is a perfect square. value must be >= 0.
Rational sqrt_round_up(const Rational& value, unsigned rel_bits = 40);

/// Best rational approximation with denominator <= max_den (continued fractions).
Rational best_rational_approximation(const Rational& value, const Integer& max_den);

} // namespace pivotgrowth
