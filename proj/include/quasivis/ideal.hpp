#pragma once

#include "quasivis/quadfield.hpp"

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace quasivis {

/// Integral ideal Z*a + Z*(b + c*omega) in Hermite normal form:
/// columns of [[a, b], [0, c]], with c | a, c | b and 0 <= b < a.
class IdealHNF {
 public:
  IdealHNF() = default;
  // Validates the HNF shape and closure under omega.
  IdealHNF(BigInt a, BigInt b, BigInt c, std::int64_t d);

  static IdealHNF unit(std::int64_t d) { return unchecked(1, 0, 1, d); }
  // Skips validation; the caller guarantees a reduced HNF of an ideal.
  static IdealHNF unchecked(BigInt a, BigInt b, BigInt c, std::int64_t d);
  static IdealHNF principal(const QuadInt& x);

  const BigInt& a() const { return a_; }
  const BigInt& b() const { return b_; }
  const BigInt& c() const { return c_; }
  std::int64_t d() const { return d_; }

  BigInt norm() const { return a_ * c_; }
  bool is_unit() const { return a_ == 1 && c_ == 1; }

  bool contains(const QuadInt& x) const;
  // True when other is a subset of this ideal (this divides other).
  bool contains(const IdealHNF& other) const;

  IdealHNF conj() const;

  friend bool operator==(const IdealHNF& x, const IdealHNF& y) {
    return x.a_ == y.a_ && x.b_ == y.b_ && x.c_ == y.c_ && x.d_ == y.d_;
  }
  friend bool operator!=(const IdealHNF& x, const IdealHNF& y) { return !(x == y); }
  friend bool operator<(const IdealHNF& x, const IdealHNF& y) {
    if (x.norm() != y.norm()) return x.norm() < y.norm();
    if (x.a_ != y.a_) return x.a_ < y.a_;
    return x.b_ < y.b_;
  }

  std::string to_string() const;

 private:
  BigInt a_ = 1, b_ = 0, c_ = 1;
  std::int64_t d_ = 0;
};

// HNF of the module generated by {x_i, omega*x_i}. Throws AllZero.
IdealHNF ideal_from_generators(std::span<const QuadInt> xs);
inline IdealHNF ideal_from_generators(std::initializer_list<QuadInt> xs) {
  return ideal_from_generators(std::span<const QuadInt>(xs.begin(), xs.size()));
}

// Norm of the ideal generated by xs is 1. Throws AllZero.
bool gcd_is_one(std::span<const QuadInt> xs);
inline bool gcd_is_one(std::initializer_list<QuadInt> xs) {
  return gcd_is_one(std::span<const QuadInt>(xs.begin(), xs.size()));
}

// Same test for small coordinates: xs holds (a_i, b_i) pairs of x_i = a_i + b_i omega.
// Returns nullopt when a coordinate exceeds 2^30 in absolute value. Throws AllZero.
std::optional<bool> gcd_is_one_small(const std::int64_t* ab, int count, std::int64_t d);

IdealHNF ideal_sum(const IdealHNF& x, const IdealHNF& y);
IdealHNF ideal_product(const IdealHNF& x, const IdealHNF& y);
inline IdealHNF operator*(const IdealHNF& x, const IdealHNF& y) { return ideal_product(x, y); }
IdealHNF ideal_power(const IdealHNF& x, unsigned k);

// x / p for a prime ideal p dividing x. Throws InvalidArgument otherwise.
IdealHNF divide_by_prime(const IdealHNF& x, const IdealHNF& p);

enum class SplitType { Split, Inert, Ramified };
const char* to_string(SplitType s);

SplitType split_type(const QuadField& field, std::int64_t p);

// Prime ideals above the rational prime p (one or two of them).
std::vector<IdealHNF> primes_above(const QuadField& field, std::int64_t p);

// Rational prime factorization by trial division; n >= 1 and small enough to factor.
std::vector<std::pair<std::int64_t, int>> factor_integer(std::int64_t n);

struct IdealFactorization {
  std::vector<std::pair<IdealHNF, int>> factors;

  IdealHNF product(std::int64_t d) const;
};

IdealFactorization factor_ideal(const QuadField& field, const IdealHNF& ideal);
int moebius(const QuadField& field, const IdealHNF& ideal);
// All ideals dividing the given one.
std::vector<IdealHNF> ideal_divisors(const QuadField& field, const IdealHNF& ideal);

std::int64_t count_ideals_of_norm(const QuadField& field, std::int64_t n);

}  // namespace quasivis
