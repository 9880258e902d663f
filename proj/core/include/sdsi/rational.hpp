#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace sdsi {

using Integer = mpz_class;
using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

// r^e for any integer e (negative exponents give 1/r^-e).
Rational pow_r(int r, long e);
Integer ipow(int r, unsigned long e);

Rational abs(const Rational& q);
Integer floor_rational(const Rational& q);

// floor(log_r q) for q > 0, computed exactly.
long floor_log(const Rational& q, int r);

// Parses "3/8", "-0.125", "2^-8", "1e-3".
Rational parse_rational(std::string_view text);

// Decimal scientific notation with `digits` significant digits (correctly rounded).
std::string to_decimal(const Rational& q, int digits = 40);
std::string sqrt_decimal(const Rational& q, int digits = 40);

// Compact form used in CSVs: "2^-k" for dyadic powers, otherwise "p/q".
std::string to_compact(const Rational& q);

Rational inf_norm(const RationalVector& v);

}  // namespace sdsi
