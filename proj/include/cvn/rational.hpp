#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace cvn {

/// Exact rational used for every length, time and stretch factor.
using Rational = mpq_class;

/// Formats as "p/q", always with an explicit denominator ("2/1").
std::string to_string(const Rational& q);

/// Parses "p/q", "p" or a terminating decimal such as "0.25".
/// Throws std::invalid_argument on malformed input or zero denominator.
Rational parse_rational(std::string_view text);

/// Natural log, only ever used for presentation.
double log_of(const Rational& q);

/// 12 significant digits, the presentation format for logarithms.
std::string format_decimal(double x);

/// q^k for k >= 0.
Rational pow(const Rational& q, unsigned k);

}  // namespace cvn
