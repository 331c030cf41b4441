#ifndef KELVINASYM_RATIONAL_HPP
#define KELVINASYM_RATIONAL_HPP

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace kelvinasym {

// Always kept canonical: positive denominator, reduced.
using Rational = mpq_class;
using Integer = mpz_class;

// Accepts "p", "p/q" and finite decimals such as "-2.5" or "1e-3".
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
double to_double(const Rational& q);
Rational pow(const Rational& base, int exponent);
Rational binomial(int n, int k);

}  // namespace kelvinasym

#endif
