#pragma once

#include <gmpxx.h>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <string>

namespace covbound {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Floating type used wherever a high-precision decimal is needed
/// (solver objectives, root extraction, bound finalization).
using HighFloat = boost::multiprecision::cpp_bin_float_50;

/// Parses "a", "-a" or "a/b" into a canonicalized rational. Throws
/// std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(const std::string& text);

/// Renders a rational with `digits` significant decimal digits, rounded to
/// nearest (ties away from zero). Integers that fit in `digits` digits are
/// printed exactly without an exponent.
std::string to_decimal(const Rational& value, int digits);

HighFloat to_high_float(const Rational& value);

BigInt ceil(const Rational& value);
BigInt floor(const Rational& value);

BigInt ipow(long base, unsigned long exponent);

}  // namespace covbound
