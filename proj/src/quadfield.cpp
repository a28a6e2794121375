#include "quasivis/quadfield.hpp"
#include "quasivis/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace quasivis {

namespace {

int field_trace(std::int64_t d) { return ((d % 4) + 4) % 4 == 1 ? 1 : 0; }
std::int64_t field_n0(std::int64_t d) { return field_trace(d) == 1 ? (d - 1) / 4 : d; }

void require_same_field(std::int64_t d1, std::int64_t d2) {
  if (d1 != d2)
    throw Error(ErrorKind::InvalidArgument,
                "mixing elements of Q(sqrt(" + std::to_string(d1) + ")) and Q(sqrt(" + std::to_string(d2) + "))");
}

// x = (P + Q sqrt(d)) / 2
void half_coords(const BigInt& a, const BigInt& b, std::int64_t d, BigInt& p, BigInt& q) {
  if (field_trace(d) == 1) {
    p = 2 * a + b;
    q = b;
  } else {
    p = 2 * a;
    q = 2 * b;
  }
}

}  // namespace

int sign_quadratic(const BigInt& u, const BigInt& v, std::int64_t d) {
  int su = u.sign();
  int sv = v.sign();
  if (su >= 0 && sv >= 0) return (su == 0 && sv == 0) ? 0 : 1;
  if (su <= 0 && sv <= 0) return -1;
  BigInt u2 = u * u;
  BigInt v2d = v * v * d;
  // Exactly one of u, v is negative; the other dominates iff its square is larger.
  if (su > 0) return u2 > v2d ? 1 : (u2 == v2d ? 0 : -1);
  return v2d > u2 ? 1 : (u2 == v2d ? 0 : -1);
}

// ---------------------------------------------------------------- QuadInt

QuadInt QuadInt::conj() const {
  if (field_trace(d_) == 1) return QuadInt(a_ + b_, -b_, d_);
  return QuadInt(a_, -b_, d_);
}

BigInt QuadInt::norm() const {
  BigInt n = a_ * a_ - field_n0(d_) * b_ * b_;
  if (field_trace(d_) == 1) n += a_ * b_;
  return n;
}

BigInt QuadInt::trace() const { return 2 * a_ + field_trace(d_) * b_; }

int QuadInt::sign() const {
  BigInt p, q;
  half_coords(a_, b_, d_, p, q);
  return sign_quadratic(p, q, d_);
}

int QuadInt::compare(const Rational& r) const {
  const BigInt& num = boost::multiprecision::numerator(r);
  const BigInt& den = boost::multiprecision::denominator(r);
  BigInt p, q;
  half_coords(a_, b_, d_, p, q);
  // sign(x - num/den) = sign(den*P - 2*num + den*Q*sqrt(d))
  return sign_quadratic(den * p - 2 * num, den * q, d_);
}

int QuadInt::compare(const QuadInt& other) const {
  require_same_field(d_, other.d_);
  return (*this - other).sign();
}

long double QuadInt::real() const {
  BigInt p, q;
  half_coords(a_, b_, d_, p, q);
  long double pl = to_long_double(p);
  long double ql = to_long_double(q);
  long double s = std::sqrt(static_cast<long double>(d_));
  if (p.sign() * q.sign() >= 0) return (pl + ql * s) / 2;
  // Cancellation: go through the conjugate, which has no cancellation.
  return to_long_double(norm()) * 2 / (pl - ql * s);
}

long double QuadInt::conj_real() const { return conj().real(); }

bool QuadInt::divisible_by(const BigInt& k) const {
  if (k == 0) return false;
  return a_ % k == 0 && b_ % k == 0;
}

QuadInt QuadInt::div_exact(const BigInt& k) const {
  if (!divisible_by(k)) throw Error(ErrorKind::InvalidArgument, "inexact division of " + to_string() + " by " + k.str());
  return QuadInt(a_ / k, b_ / k, d_);
}

QuadInt QuadInt::pow(unsigned k) const {
  QuadInt result(1, 0, d_);
  QuadInt base = *this;
  while (k) {
    if (k & 1u) result *= base;
    k >>= 1;
    if (k) base *= base;
  }
  return result;
}

QuadInt& QuadInt::operator+=(const QuadInt& o) {
  require_same_field(d_, o.d_);
  a_ += o.a_;
  b_ += o.b_;
  return *this;
}

QuadInt& QuadInt::operator-=(const QuadInt& o) {
  require_same_field(d_, o.d_);
  a_ -= o.a_;
  b_ -= o.b_;
  return *this;
}

QuadInt& QuadInt::operator*=(const QuadInt& o) {
  require_same_field(d_, o.d_);
  // omega^2 = t*omega + n0
  BigInt bb = b_ * o.b_;
  BigInt na = a_ * o.a_ + field_n0(d_) * bb;
  BigInt nb = a_ * o.b_ + b_ * o.a_;
  if (field_trace(d_) == 1) nb += bb;
  a_ = std::move(na);
  b_ = std::move(nb);
  return *this;
}

QuadInt& QuadInt::operator*=(const BigInt& k) {
  a_ *= k;
  b_ *= k;
  return *this;
}

std::string QuadInt::to_string() const {
  BigInt p, q;
  half_coords(a_, b_, d_, p, q);
  std::string root = "sqrt(" + std::to_string(d_) + ")";
  auto join = [&](const BigInt& u, const BigInt& v) {
    if (v == 0) return u.str();
    std::string coeff = (v == 1) ? "" : (v == -1 ? "-" : v.str() + "*");
    if (u == 0) return coeff + root;
    std::string s = u.str();
    if (v > 0) s += "+";
    else if (v == -1) coeff = "-";
    return s + coeff + root;
  };
  if (field_trace(d_) == 1 && (p % 2 != 0)) return "(" + join(p, q) + ")/2";
  return join(p / 2, q / 2);
}

int exact_compare(const QuadInt& x, const Rational& r) { return x.compare(r); }

// ---------------------------------------------------------------- tables

bool is_squarefree(std::int64_t d) {
  if (d == 0) return false;
  if (d < 0) d = -d;
  for (std::int64_t p = 2; p * p <= d; ++p) {
    if (d % (p * p) == 0) return false;
  }
  return true;
}

const std::vector<std::int64_t>& pid_table() {
  static const std::vector<std::int64_t> table = {2,  3,  5,  6,  7,  11, 13, 14, 17, 19, 21, 22, 23,
                                                  29, 31, 33, 37, 38, 41, 43, 46, 47, 53, 57, 59, 61,
                                                  62, 67, 69, 71, 73, 77, 83, 86, 89, 93, 94, 97};
  return table;
}

bool is_pid_table(std::int64_t d) {
  const auto& t = pid_table();
  return std::binary_search(t.begin(), t.end(), d);
}

int kronecker(std::int64_t a, std::int64_t n) {
  if (n <= 0) throw Error(ErrorKind::InvalidArgument, "kronecker: modulus must be positive");
  int result = 1;
  while (n % 2 == 0) {
    n /= 2;
    if (a % 2 == 0) return 0;
    std::int64_t r = ((a % 8) + 8) % 8;
    if (r == 3 || r == 5) result = -result;
  }
  // Jacobi symbol (a | n), n odd.
  a %= n;
  if (a < 0) a += n;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      std::int64_t r = n % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

// ---------------------------------------------------------------- units

namespace {

// Integer square root of a nonnegative 128-bit value.
unsigned __int128 isqrt128(unsigned __int128 n) {
  if (n == 0) return 0;
  auto r = static_cast<unsigned __int128>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Units a + b*omega with the given b > 0 and value > 1.
void units_with_b(std::int64_t d, std::int64_t b, std::vector<QuadInt>& out) {
  const std::int64_t t = field_trace(d);
  const std::int64_t disc = t == 1 ? d : 4 * d;
  // a^2 + t*b*a - (n0 b^2 +- 1) = 0 has discriminant disc*b^2 +- 4.
  const unsigned __int128 base = static_cast<unsigned __int128>(disc) * static_cast<unsigned __int128>(b) *
                                 static_cast<unsigned __int128>(b);
  for (int eps : {-1, 1}) {
    unsigned __int128 m = eps > 0 ? base + 4 : base - 4;
    unsigned __int128 s = isqrt128(m);
    if (s * s != m) continue;
    for (int sgn : {-1, 1}) {
      BigInt num = BigInt(-t * b) + (sgn > 0 ? BigInt(1) : BigInt(-1)) * BigInt(s);
      if (num % 2 != 0) continue;
      QuadInt x(num / 2, b, d);
      if (x.compare(Rational(1)) > 0) out.push_back(x);
    }
  }
}

// Continued fraction of -sigma(omega) = (P0 + sqrt(d)) / Q0; units show up as convergents.
std::optional<QuadInt> unit_from_continued_fraction(std::int64_t d) {
  const std::int64_t t = field_trace(d);
  std::int64_t P = t == 1 ? -1 : 0;
  std::int64_t Q = t == 1 ? 2 : 1;
  const std::int64_t s = static_cast<std::int64_t>(isqrt(BigInt(d)));
  BigInt p_prev = 0, p = 1, q_prev = 1, q = 0;
  for (int iter = 0; iter < 1'000'000; ++iter) {
    std::int64_t num = Q > 0 ? P + s : P + s + 1;
    std::int64_t a = static_cast<std::int64_t>(floor_div(BigInt(num), BigInt(Q)));
    BigInt p_next = a * p + p_prev;
    BigInt q_next = a * q + q_prev;
    p_prev = std::move(p);
    p = std::move(p_next);
    q_prev = std::move(q);
    q = std::move(q_next);
    QuadInt x(p, q, d);
    BigInt n = x.norm();
    if ((n == 1 || n == -1) && q > 0 && x.compare(Rational(1)) > 0) return x;
    P = a * Q - P;
    Q = (d - P * P) / Q;
  }
  return std::nullopt;
}

FundamentalUnit certify(std::int64_t d, QuadInt candidate) {
  FundamentalUnit fu;
  const BigInt& bfound = candidate.b();
  if (bfound <= kUnitCertificationLimit) {
    const auto blimit = static_cast<std::int64_t>(bfound);
    std::vector<QuadInt> hits;
    for (std::int64_t b = 1; b <= blimit; ++b) units_with_b(d, b, hits);
    for (const auto& h : hits) {
      if (h.compare(candidate) < 0) candidate = h;
    }
    fu.certified = true;
  }
  fu.value = candidate;
  fu.approx = candidate.real();
  // Certified enclosure by exact comparison against rational brackets.
  double rel = 1e-15;
  for (int attempt = 0; attempt < 12; ++attempt, rel *= 10) {
    double lo = static_cast<double>(fu.approx) * (1 - rel);
    double hi = static_cast<double>(fu.approx) * (1 + rel);
    if (candidate.compare(rational_from_double(lo)) > 0 && candidate.compare(rational_from_double(hi)) < 0) {
      fu.error_bound = std::max(fu.approx - lo, hi - fu.approx);
      break;
    }
  }
  return fu;
}

}  // namespace

FundamentalUnit fundamental_unit(std::int64_t d) {
  if (d < 2 || !is_squarefree(d))
    throw Error(ErrorKind::InvalidArgument, "d must be a squarefree integer > 1, got " + std::to_string(d));
  if (auto x = unit_from_continued_fraction(d)) return certify(d, *x);
  // Fallback: direct search on b.
  for (std::int64_t b = 1; b <= kUnitCertificationLimit; ++b) {
    std::vector<QuadInt> hits;
    units_with_b(d, b, hits);
    if (!hits.empty()) return certify(d, *std::min_element(hits.begin(), hits.end(), [](const QuadInt& x, const QuadInt& y) {
      return x.compare(y) < 0;
    }));
  }
  throw Error(ErrorKind::InvalidArgument, "fundamental unit search exhausted for d=" + std::to_string(d));
}

// ---------------------------------------------------------------- QuadField

namespace {

std::shared_ptr<const FundamentalUnit> cached_unit(std::int64_t d) {
  static std::mutex mu;
  static std::map<std::int64_t, std::shared_ptr<const FundamentalUnit>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(d); it != cache.end()) return it->second;
  }
  auto unit = std::make_shared<const FundamentalUnit>(fundamental_unit(d));
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(d, unit).first->second;
}

}  // namespace

QuadField::QuadField(std::int64_t d) : d_(d), trace_(field_trace(d)), is_pid_(is_pid_table(d)) {
  if (d < 2 || !is_squarefree(d))
    throw Error(ErrorKind::InvalidArgument, "d must be a squarefree integer > 1, got " + std::to_string(d));
  unit_ = cached_unit(d);
}

int QuadField::unit_norm() const { return lambda().norm() > 0 ? 1 : -1; }

QuadInt QuadField::lambda_power(int k) const {
  if (k >= 0) return lambda().pow(static_cast<unsigned>(k));
  QuadInt inv = lambda().conj() * BigInt(unit_norm());
  return inv.pow(static_cast<unsigned>(-k));
}

long double QuadField::sqrt_d() const { return std::sqrt(static_cast<long double>(d_)); }
long double QuadField::omega_real() const { return trace_ == 1 ? (1 + sqrt_d()) / 2 : sqrt_d(); }
long double QuadField::omega_conj_real() const { return trace_ == 1 ? (1 - sqrt_d()) / 2 : -sqrt_d(); }

// ---------------------------------------------------------------- ring box

int RingBound::compare(const QuadInt& x) const {
  if (quad) return x.compare(*quad);
  return x.compare(*rational);
}

long double RingBound::approx() const {
  if (quad) return quad->real();
  return static_cast<long double>(rational->convert_to<double>());
}

namespace {

bool within(const QuadInt& v, const RingBound& lo, const RingBound& hi) {
  int c_lo = lo.compare(v);
  if (c_lo < 0 || (c_lo == 0 && lo.open)) return false;
  int c_hi = hi.compare(v);
  return !(c_hi > 0 || (c_hi == 0 && hi.open));
}

// Bounds on the conjugate side are compared against sigma(x).
bool within_conj(const QuadInt& x, const RingBound& lo, const RingBound& hi) {
  return within(x.conj(), lo, hi);
}

}  // namespace

bool RingBox::contains(const QuadInt& x) const { return within(x, x_lo, x_hi) && within_conj(x, y_lo, y_hi); }

std::vector<QuadInt> enumerate_ring_box(const QuadField& field, const RingBox& box) {
  const long double xl = box.x_lo.approx(), xh = box.x_hi.approx();
  const long double yl = box.y_lo.approx(), yh = box.y_hi.approx();
  std::vector<QuadInt> out;
  if (xl > xh || yl > yh) return out;
  const long double s = field.sqrt_d();
  const long double w = field.omega_real(), wc = field.omega_conj_real();
  auto slack = [](long double v) { return 1 + std::fabs(v) * 1e-12L; };
  // x - sigma(x) = b*sqrt(d)
  const long double b_lo = (xl - yh) / s, b_hi = (xh - yl) / s;
  const auto bmin = static_cast<std::int64_t>(std::floor(b_lo - slack(b_lo)));
  const auto bmax = static_cast<std::int64_t>(std::ceil(b_hi + slack(b_hi)));
  for (std::int64_t b = bmin; b <= bmax; ++b) {
    const long double lo = std::max(xl - b * w, yl - b * wc);
    const long double hi = std::min(xh - b * w, yh - b * wc);
    if (lo > hi + 2) continue;
    const auto amin = static_cast<std::int64_t>(std::floor(lo - slack(lo)));
    const auto amax = static_cast<std::int64_t>(std::ceil(hi + slack(hi)));
    for (std::int64_t a = amin; a <= amax; ++a) {
      QuadInt x = field.make(a, b);
      if (box.contains(x)) out.push_back(std::move(x));
    }
  }
  std::sort(out.begin(), out.end(), [](const QuadInt& x, const QuadInt& y) { return x.compare(y) < 0; });
  return out;
}

RingBox hammarhjelm_box(const QuadField& field) {
  return RingBox{RingBound::open_at(Rational(1)), RingBound::open_at(field.lambda()), RingBound::closed(Rational(-1)),
                 RingBound::closed(Rational(1))};
}

bool check_hammarhjelm(const QuadField& field) {
  if (!field.is_pid())
    throw Error(ErrorKind::NotPID, "Q(sqrt(" + std::to_string(field.d()) + ")) is not in the PID table");
  return enumerate_ring_box(field, hammarhjelm_box(field)).empty();
}

}  // namespace quasivis
