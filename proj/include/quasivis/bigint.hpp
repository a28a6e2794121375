#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace quasivis {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Floor of the square root, n >= 0.
BigInt isqrt(const BigInt& n);
bool is_square(const BigInt& n, BigInt* root = nullptr);

BigInt gcd(const BigInt& a, const BigInt& b);
BigInt lcm(const BigInt& a, const BigInt& b);

// Floor division / non-negative remainder (cpp_int truncates toward zero).
BigInt floor_div(const BigInt& a, const BigInt& b);
BigInt mod_floor(const BigInt& a, const BigInt& b);

std::string to_string(const BigInt& x);
std::string to_string(const Rational& x);

// Accepts "12", "-7", "3/4", "-1.25", "2e-3".
BigInt parse_bigint(std::string_view s);
Rational parse_rational(std::string_view s);

// Exact binary value of a finite double.
Rational rational_from_double(double x);

double to_double(const Rational& x);
long double to_long_double(const BigInt& x);

inline int sign(const BigInt& x) { return x.sign(); }
inline int sign(const Rational& x) { return x.sign(); }

std::int64_t to_int64(const BigInt& x);  // throws std::overflow_error

}  // namespace quasivis
