#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <string_view>

namespace secdist {

// Exact rational probability type. Always stored in canonical form
// (reduced, positive denominator); arithmetic never rounds.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Parses "num/den" or a plain integer string. Decimal notation is rejected:
// probabilities in files must be written as exact rationals.
Rational parse_rational(std::string_view text);

// Canonical text form: "2/3", "0", "1".
std::string format_rational(const Rational& value);

double to_double(const Rational& value);

} // namespace secdist
