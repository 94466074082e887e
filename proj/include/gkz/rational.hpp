#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace gkz {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

using IntVector = std::vector<long long>;
using RationalVector = std::vector<Rational>;

/// Parses "p", "-p" or "p/q". Throws Error(InvalidArgument) on bad input or q == 0.
Rational parse_rational(std::string_view text);

/// Reduced fraction, "p" when the denominator is 1.
std::string to_string(const Rational& value);

bool is_integer(const Rational& value);

long double to_long_double(const Rational& value);

Integer binomial(long long n, long long k);
Integer factorial(long long n);

}  // namespace gkz
