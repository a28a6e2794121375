#pragma once

#include "quasivis/bigint.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace quasivis {

// Sign of u + v*sqrt(d), d > 0 squarefree. Exact.
int sign_quadratic(const BigInt& u, const BigInt& v, std::int64_t d);

/// Element a + b*omega of the ring of integers of Q(sqrt(d)), where omega is
/// sqrt(d) or (1 + sqrt(d))/2 (the latter when d = 1 mod 4).
///
/// Ordering and sign refer to the real embedding in which sqrt(d) > 0; the
/// other embedding is reached through conj().
class QuadInt {
 public:
  QuadInt() = default;
  QuadInt(BigInt a, BigInt b, std::int64_t d) : a_(std::move(a)), b_(std::move(b)), d_(d) {}

  static QuadInt integer(BigInt a, std::int64_t d) { return QuadInt(std::move(a), 0, d); }

  const BigInt& a() const { return a_; }
  const BigInt& b() const { return b_; }
  std::int64_t d() const { return d_; }

  bool is_zero() const { return a_ == 0 && b_ == 0; }

  QuadInt conj() const;
  BigInt norm() const;
  BigInt trace() const;

  // Exact sign of the real embedding.
  int sign() const;
  // Exact sign of (this - r) in the real embedding.
  int compare(const Rational& r) const;
  int compare(const QuadInt& other) const;

  long double real() const;
  long double conj_real() const;

  // Exact division by a rational integer; throws if the quotient is not integral.
  QuadInt div_exact(const BigInt& k) const;
  bool divisible_by(const BigInt& k) const;

  QuadInt pow(unsigned k) const;

  QuadInt operator-() const { return QuadInt(-a_, -b_, d_); }
  QuadInt& operator+=(const QuadInt& o);
  QuadInt& operator-=(const QuadInt& o);
  QuadInt& operator*=(const QuadInt& o);
  QuadInt& operator*=(const BigInt& k);

  friend QuadInt operator+(QuadInt x, const QuadInt& y) { return x += y; }
  friend QuadInt operator-(QuadInt x, const QuadInt& y) { return x -= y; }
  friend QuadInt operator*(QuadInt x, const QuadInt& y) { return x *= y; }
  friend QuadInt operator*(QuadInt x, const BigInt& k) { return x *= k; }
  friend QuadInt operator*(const BigInt& k, QuadInt x) { return x *= k; }

  friend bool operator==(const QuadInt& x, const QuadInt& y) {
    return x.a_ == y.a_ && x.b_ == y.b_ && x.d_ == y.d_;
  }
  friend bool operator!=(const QuadInt& x, const QuadInt& y) { return !(x == y); }
  // Lexicographic on (a, b); a canonical order, not the real ordering.
  friend bool operator<(const QuadInt& x, const QuadInt& y) {
    return x.a_ < y.a_ || (x.a_ == y.a_ && x.b_ < y.b_);
  }

  std::string to_string() const;

 private:
  BigInt a_ = 0;
  BigInt b_ = 0;
  std::int64_t d_ = 0;
};

int exact_compare(const QuadInt& x, const Rational& r);

/// Smallest unit > 1, with a certified floating enclosure.
struct FundamentalUnit {
  QuadInt value;
  long double approx = 0;
  long double error_bound = 0;  // |approx - value| <= error_bound
  bool certified = false;       // exhaustive minimality scan was run
};

bool is_squarefree(std::int64_t d);
// Membership in the table of PID real quadratic fields for 2 <= d <= 100.
bool is_pid_table(std::int64_t d);
const std::vector<std::int64_t>& pid_table();

// Kronecker symbol (a | n), n >= 1.
int kronecker(std::int64_t a, std::int64_t n);

// Exhaustive minimality scans above this coefficient bound are skipped.
inline constexpr std::int64_t kUnitCertificationLimit = 100'000'000;

FundamentalUnit fundamental_unit(std::int64_t d);

/// A real quadratic field Q(sqrt(d)) with its ring of integers.
class QuadField {
 public:
  explicit QuadField(std::int64_t d);

  std::int64_t d() const { return d_; }
  std::int64_t disc() const { return trace_ == 1 ? d_ : 4 * d_; }
  // omega^2 = trace * omega + n0
  int trace() const { return trace_; }
  std::int64_t n0() const { return trace_ == 1 ? (d_ - 1) / 4 : d_; }
  bool is_pid() const { return is_pid_; }

  QuadInt make(BigInt a, BigInt b) const { return QuadInt(std::move(a), std::move(b), d_); }
  QuadInt integer(BigInt a) const { return QuadInt(std::move(a), 0, d_); }
  QuadInt zero() const { return integer(0); }
  QuadInt one() const { return integer(1); }
  QuadInt omega() const { return make(0, 1); }

  const FundamentalUnit& unit() const { return *unit_; }
  const QuadInt& lambda() const { return unit_->value; }
  int unit_norm() const;  // N(lambda), +1 or -1
  // lambda^k for any integer k (negative powers are units too).
  QuadInt lambda_power(int k) const;

  long double omega_real() const;
  long double omega_conj_real() const;
  long double sqrt_d() const;

  // Kronecker symbol (disc | p): 1 split, -1 inert, 0 ramified.
  int kronecker_disc(std::int64_t p) const { return kronecker(disc(), p); }

  friend bool operator==(const QuadField& x, const QuadField& y) { return x.d_ == y.d_; }

 private:
  std::int64_t d_;
  int trace_;
  bool is_pid_;
  std::shared_ptr<const FundamentalUnit> unit_;
};

/// A bound for enumerate_ring_box: a rational or an element of the field.
struct RingBound {
  std::optional<Rational> rational;
  std::optional<QuadInt> quad;
  bool open = false;

  static RingBound closed(Rational r) { return {std::move(r), std::nullopt, false}; }
  static RingBound open_at(Rational r) { return {std::move(r), std::nullopt, true}; }
  static RingBound closed(QuadInt q) { return {std::nullopt, std::move(q), false}; }
  static RingBound open_at(QuadInt q) { return {std::nullopt, std::move(q), true}; }

  // Sign of (x - bound).
  int compare(const QuadInt& x) const;
  long double approx() const;
};

/// Box in the Minkowski plane: x in [x_lo, x_hi], sigma(x) in [y_lo, y_hi].
struct RingBox {
  RingBound x_lo, x_hi, y_lo, y_hi;
  bool contains(const QuadInt& x) const;
};

// All ring elements whose embeddings (x, sigma(x)) lie in the box, sorted by
// the real value of x.
std::vector<QuadInt> enumerate_ring_box(const QuadField& field, const RingBox& box);

// The box (1, lambda) x [-1, 1].
RingBox hammarhjelm_box(const QuadField& field);

// Throws NotPID when the field is not a PID.
bool check_hammarhjelm(const QuadField& field);

}  // namespace quasivis
