#pragma once

// Exact scalars. The ground field is fixed to Q throughout the library: every
// identity checked here is polynomial with rational coefficients.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace deforma {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p/q", "p" or "-p/q". Throws std::invalid_argument on malformed input
/// or a zero denominator. The result is canonical (reduced, q > 0).
Rational parse_rational(std::string_view text);

/// Always emits "p/q" (integers as "p/1") so the serialized form is uniform.
std::string to_string(const Rational& r);

/// Human-oriented form: integers without denominator.
std::string to_short_string(const Rational& r);

Rational factorial(unsigned n);
Rational binomial(unsigned n, unsigned k);

inline int sign_pow(long long exponent) { return (exponent % 2 == 0) ? 1 : -1; }

}  // namespace deforma
