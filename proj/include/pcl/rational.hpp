#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace pcl {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational make_rational(long long num, long long den = 1) { return Rational(num, den); }

// Accepts "a/b", integers and finite decimals ("4.75"). Throws InputError.
Rational parse_rational(const std::string& text);

// "7/4", "3", "-1/2".
std::string to_string(const Rational& r);

// num/den with an exact denominator `den` when r * den is an integer,
// otherwise the reduced form. Used to print loads as 14/8.
std::string to_string_with_denominator(const Rational& r, std::uint64_t den);

double to_double(const Rational& r);

}  // namespace pcl
