#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace repvote {

/// Arbitrary-precision exact rational. All exact paths (scoring vectors,
/// condition sums, file-backed metric spaces) go through this type.
using Rational = mpq_class;

/// Parses an integer ("3"), fraction ("-7/4") or decimal ("0.125", "1e-3",
/// "2.5E2") literal into an exact rational. Decimal literals are converted
/// digit by digit, so "0.3" is exactly 3/10. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// num / den in lowest terms; den must be nonzero.
inline Rational ratio(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Canonical text form: "p/q" in lowest terms, or "p" when q == 1.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

/// Exact rational value of a finite double.
Rational exact_from_double(double value);

/// Shortest decimal text that parses back to exactly the same double.
std::string shortest_decimal(double value);

Rational floor_of(const Rational& value);
Rational ceil_of(const Rational& value);

/// floor/ceil of a rational as an unsigned index; the value must be >= 0.
std::size_t floor_index(const Rational& value);
std::size_t ceil_index(const Rational& value);

}  // namespace repvote
