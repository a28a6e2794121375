#include "quasivis/bigint.hpp"
#include "quasivis/errors.hpp"

#include <boost/multiprecision/integer.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace quasivis {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::AllZero: return "AllZero";
    case ErrorKind::NotPID: return "NotPID";
    case ErrorKind::NotHammarhjelm: return "NotHammarhjelm";
    case ErrorKind::TolTooTight: return "TolTooTight";
    case ErrorKind::RegionUnbounded: return "RegionUnbounded";
    case ErrorKind::HypothesisFailed: return "HypothesisFailed";
    case ErrorKind::InsufficientCover: return "InsufficientCover";
    case ErrorKind::ZeroElement: return "ZeroElement";
    case ErrorKind::NotInResidueClass: return "NotInResidueClass";
    case ErrorKind::DegenerateFit: return "DegenerateFit";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Config: return "Config";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

BigInt isqrt(const BigInt& n) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "isqrt of negative number");
  return boost::multiprecision::sqrt(n);
}

bool is_square(const BigInt& n, BigInt* root) {
  if (n < 0) return false;
  BigInt r = isqrt(n);
  if (r * r != n) return false;
  if (root) *root = r;
  return true;
}

BigInt gcd(const BigInt& a, const BigInt& b) { return boost::multiprecision::gcd(a, b); }

BigInt lcm(const BigInt& a, const BigInt& b) {
  if (a == 0 || b == 0) return 0;
  BigInt g = gcd(a, b);
  BigInt r = (a / g) * b;
  return r < 0 ? BigInt(-r) : r;
}

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  BigInt r = a - q * b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

BigInt mod_floor(const BigInt& a, const BigInt& b) {
  BigInt r = a % b;
  if (r < 0) r += (b < 0 ? BigInt(-b) : b);
  return r;
}

std::string to_string(const BigInt& x) { return x.str(); }

std::string to_string(const Rational& x) {
  if (boost::multiprecision::denominator(x) == 1) return boost::multiprecision::numerator(x).str();
  return boost::multiprecision::numerator(x).str() + "/" + boost::multiprecision::denominator(x).str();
}

BigInt parse_bigint(std::string_view s) {
  Rational r = parse_rational(s);
  if (boost::multiprecision::denominator(r) != 1)
    throw Error(ErrorKind::InvalidArgument, "not an integer: " + std::string(s));
  return boost::multiprecision::numerator(r);
}

namespace {

BigInt parse_digits(std::string_view s, const std::string& whole) {
  if (s.empty()) throw Error(ErrorKind::InvalidArgument, "malformed number: " + whole);
  BigInt v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw Error(ErrorKind::InvalidArgument, "malformed number: " + whole);
    v = v * 10 + (c - '0');
  }
  return v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string whole(text);
  std::string_view s = text;
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s.empty()) throw Error(ErrorKind::InvalidArgument, "empty number");

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Rational num = parse_rational(s.substr(0, slash));
    Rational den = parse_rational(s.substr(slash + 1));
    if (den == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator: " + whole);
    return num / den;
  }

  bool negative = false;
  if (s.front() == '-' || s.front() == '+') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = s.substr(e + 1);
    bool exp_negative = false;
    if (!exp_part.empty() && (exp_part.front() == '-' || exp_part.front() == '+')) {
      exp_negative = exp_part.front() == '-';
      exp_part.remove_prefix(1);
    }
    exponent = static_cast<long>(parse_digits(exp_part, whole));
    if (exp_negative) exponent = -exponent;
    s = s.substr(0, e);
  }
  BigInt mantissa;
  long frac_digits = 0;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string digits(s.substr(0, dot));
    std::string_view frac = s.substr(dot + 1);
    digits += frac;
    frac_digits = static_cast<long>(frac.size());
    mantissa = parse_digits(digits, whole);
  } else {
    mantissa = parse_digits(s, whole);
  }
  exponent -= frac_digits;
  Rational r(mantissa);
  BigInt ten_pow = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(exponent < 0 ? -exponent : exponent));
  if (exponent < 0)
    r /= ten_pow;
  else
    r *= ten_pow;
  return negative ? Rational(-r) : r;
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw Error(ErrorKind::InvalidArgument, "non-finite double");
  int exp = 0;
  double m = std::frexp(x, &exp);
  // m in [0.5, 1): scale to a 53-bit integer.
  auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
  exp -= 53;
  Rational r(mant);
  BigInt p = BigInt(1) << static_cast<unsigned>(exp < 0 ? -exp : exp);
  if (exp < 0)
    r /= p;
  else
    r *= p;
  return r;
}

double to_double(const Rational& x) { return x.convert_to<double>(); }

long double to_long_double(const BigInt& x) { return x.convert_to<long double>(); }

std::int64_t to_int64(const BigInt& x) {
  if (x > std::numeric_limits<std::int64_t>::max() || x < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("integer does not fit in 64 bits: " + x.str());
  return x.convert_to<std::int64_t>();
}

}  // namespace quasivis
