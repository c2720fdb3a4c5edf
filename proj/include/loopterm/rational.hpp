#pragma once
// Exact integers and rationals (GMP) plus a few conversions used everywhere.

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace loopterm {

using Integer = mpz_class;
using Rational = mpq_class;

// Accepts "3", "-2/5", "+7". Throws std::invalid_argument otherwise.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

Integer floor_div(const Rational& q);
Integer ceil_div(const Rational& q);

// Dyadic outward rounding: result has denominator 2^bits.
Rational round_down(const Rational& q, long bits);
Rational round_up(const Rational& q, long bits);

// Smallest dyadic upper bound on sqrt(q) with denominator 2^bits.
Rational sqrt_upper(const Rational& q, long bits);
Rational sqrt_lower(const Rational& q, long bits);

Rational abs(const Rational& q);
long bit_size(const Rational& q);

Integer lcm_of_denominators(const std::vector<Rational>& v);

}  // namespace loopterm
