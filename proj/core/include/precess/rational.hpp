#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace precess {

using Rational = mpq_class;

/// Shortest rational p/q with |x - p/q| <= rel_tol*|x| found by continued
/// fractions, so that decimal inputs such as 0.9 or 0.5625 map to 9/10 and
/// 9/16. Falls back to the exact binary value of x when no fraction with a
/// denominator below 2^53 meets the tolerance.
Rational rationalize(double x, double rel_tol = 1e-15);

/// Correctly rounded (to within one ulp) conversion of an exact rational to
/// the 64-bit-mantissa extended type. mpq_class::get_d() alone would throw
/// away the 11 extra bits that assembly relies on.
long double to_long_double(const Rational& q);

/// Parses an exact decimal or fraction literal: "12", "-3/7", "0.125",
/// "1.5e-3". Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

/// "p" or "p/q" in lowest terms.
std::string to_string(const Rational& q);

}  // namespace precess
