#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace collatz {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Decimal rendering; rationals come out reduced as "p/q" ("p" when integral).
// No decimal-point output anywhere.
std::string to_string(const BigInt& v);
std::string to_string(const Rational& r);

}  // namespace collatz
