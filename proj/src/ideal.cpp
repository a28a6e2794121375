#include "quasivis/ideal.hpp"
#include "quasivis/errors.hpp"

#include <algorithm>

namespace quasivis {

namespace {

int trace_of(std::int64_t d) { return ((d % 4) + 4) % 4 == 1 ? 1 : 0; }
std::int64_t n0_of(std::int64_t d) { return trace_of(d) == 1 ? (d - 1) / 4 : d; }

// g = s*x + t*y, g >= 0
BigInt ext_gcd(const BigInt& x, const BigInt& y, BigInt& s, BigInt& t) {
  BigInt r0 = x, r1 = y, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (r1 != 0) {
    BigInt q = r0 / r1;
    BigInt tmp = r0 - q * r1;
    r0 = std::move(r1);
    r1 = std::move(tmp);
    tmp = s0 - q * s1;
    s0 = std::move(s1);
    s1 = std::move(tmp);
    tmp = t0 - q * t1;
    t0 = std::move(t1);
    t1 = std::move(tmp);
  }
  if (r0 < 0) {
    r0 = -r0;
    s0 = -s0;
    t0 = -t0;
  }
  s = std::move(s0);
  t = std::move(t0);
  return r0;
}

// Incremental HNF of a rank-2 Z-module in coordinates (u, w) <-> u + w*omega.
class ModuleBuilder {
 public:
  void add(const BigInt& u, const BigInt& w) {
    if (w == 0) {
      zero_w_ = gcd(zero_w_, u);
      return;
    }
    if (pw_ == 0) {
      pu_ = u;
      pw_ = w;
      return;
    }
    BigInt s, t;
    BigInt g = ext_gcd(pw_, w, s, t);
    // The combination (w/g)*pivot - (pw/g)*v has zero omega-part.
    BigInt killed = (w / g) * pu_ - (pw_ / g) * u;
    zero_w_ = gcd(zero_w_, killed);
    pu_ = s * pu_ + t * u;
    pw_ = g;
  }

  void add_with_omega(const QuadInt& x) {
    add(x.a(), x.b());
    // omega*(u + w*omega) = w*n0 + (u + t*w)*omega
    add(x.b() * n0_of(x.d()), x.a() + trace_of(x.d()) * x.b());
  }

  IdealHNF finish(std::int64_t d) const {
    BigInt c = pw_, u = pu_;
    if (c < 0) {
      c = -c;
      u = -u;
    }
    BigInt a = zero_w_ < 0 ? BigInt(-zero_w_) : zero_w_;
    return IdealHNF::unchecked(a, mod_floor(u, a), c, d);
  }

  // Norm a*c, without building the reduced form.
  BigInt norm() const {
    BigInt n = zero_w_ * pw_;
    return n < 0 ? BigInt(-n) : n;
  }

 private:
  BigInt pu_ = 0, pw_ = 0, zero_w_ = 0;
};

std::int64_t field_d_of(std::span<const QuadInt> xs) {
  if (xs.empty()) throw Error(ErrorKind::AllZero, "no generators");
  return xs.front().d();
}

ModuleBuilder module_of(std::span<const QuadInt> xs) {
  ModuleBuilder mb;
  bool any = false;
  for (const auto& x : xs) {
    if (x.is_zero()) continue;
    any = true;
    mb.add_with_omega(x);
  }
  if (!any) throw Error(ErrorKind::AllZero, "all generators are zero");
  return mb;
}

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>(static_cast<__int128>(a) * b % m);
}

std::int64_t powmod(std::int64_t base, std::int64_t e, std::int64_t m) {
  std::int64_t r = 1 % m;
  base %= m;
  if (base < 0) base += m;
  while (e > 0) {
    if (e & 1) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    e >>= 1;
  }
  return r;
}

// Square root of a quadratic residue n modulo an odd prime p (Tonelli-Shanks).
std::int64_t sqrt_mod(std::int64_t n, std::int64_t p) {
  n %= p;
  if (n < 0) n += p;
  if (n == 0) return 0;
  std::int64_t q = p - 1;
  int s = 0;
  while (q % 2 == 0) {
    q /= 2;
    ++s;
  }
  std::int64_t z = 2;
  while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
  std::int64_t m = s;
  std::int64_t c = powmod(z, q, p);
  std::int64_t t = powmod(n, q, p);
  std::int64_t r = powmod(n, (q + 1) / 2, p);
  while (t != 1) {
    std::int64_t i = 0, tt = t;
    while (tt != 1) {
      tt = mulmod(tt, tt, p);
      ++i;
    }
    std::int64_t b = c;
    for (std::int64_t j = 0; j < m - i - 1; ++j) b = mulmod(b, b, p);
    m = i;
    c = mulmod(b, b, p);
    t = mulmod(t, c, p);
    r = mulmod(r, b, p);
  }
  return r;
}

// Roots of X^2 - t X - n0 modulo p.
std::vector<std::int64_t> min_poly_roots(std::int64_t d, std::int64_t p) {
  const std::int64_t t = trace_of(d), n0 = n0_of(d);
  std::vector<std::int64_t> roots;
  if (p == 2) {
    for (std::int64_t x = 0; x < 2; ++x) {
      if (((x * x - t * x - n0) % 2 + 2) % 2 == 0) roots.push_back(x);
    }
    return roots;
  }
  // Discriminant t^2 + 4 n0.
  std::int64_t disc = ((t * t + 4 * (n0 % p)) % p + p) % p;
  std::int64_t s = sqrt_mod(disc, p);
  std::int64_t inv2 = (p + 1) / 2;
  std::int64_t r1 = mulmod(((t + s) % p + p) % p, inv2, p);
  std::int64_t r2 = mulmod(((t - s) % p + p) % p, inv2, p);
  roots.push_back(r1);
  if (r2 != r1) roots.push_back(r2);
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace

// ---------------------------------------------------------------- IdealHNF

IdealHNF::IdealHNF(BigInt a, BigInt b, BigInt c, std::int64_t d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(d) {
  if (a_ <= 0 || c_ <= 0 || b_ < 0 || b_ >= a_ || a_ % c_ != 0 || b_ % c_ != 0)
    throw Error(ErrorKind::InvalidArgument, "not a reduced HNF: " + to_string());
  // omega*(b + c*omega) = c*n0 + (b + c*t)*omega must lie in the module.
  BigInt k = (b_ + c_ * trace_of(d_)) / c_;
  if ((c_ * n0_of(d_) - k * b_) % a_ != 0)
    throw Error(ErrorKind::InvalidArgument, "module is not closed under omega: " + to_string());
}

IdealHNF IdealHNF::unchecked(BigInt a, BigInt b, BigInt c, std::int64_t d) {
  IdealHNF r;
  r.a_ = std::move(a);
  r.b_ = std::move(b);
  r.c_ = std::move(c);
  r.d_ = d;
  return r;
}

IdealHNF IdealHNF::principal(const QuadInt& x) {
  const QuadInt xs[] = {x};
  return ideal_from_generators(xs);
}

bool IdealHNF::contains(const QuadInt& x) const {
  if (x.b() % c_ != 0) return false;
  return (x.a() - (x.b() / c_) * b_) % a_ == 0;
}

bool IdealHNF::contains(const IdealHNF& other) const {
  return contains(QuadInt(other.a_, 0, d_)) && contains(QuadInt(other.b_, other.c_, d_));
}

IdealHNF IdealHNF::conj() const {
  return ideal_from_generators({QuadInt(a_, 0, d_), QuadInt(b_, c_, d_).conj()});
}

std::string IdealHNF::to_string() const {
  return "[[" + a_.str() + ", " + b_.str() + "], [0, " + c_.str() + "]]";
}

IdealHNF ideal_from_generators(std::span<const QuadInt> xs) {
  const std::int64_t d = field_d_of(xs);
  return module_of(xs).finish(d);
}

bool gcd_is_one(std::span<const QuadInt> xs) {
  // The ideal norm divides every element norm.
  BigInt g = 0;
  bool any = false;
  for (const auto& x : xs) {
    if (x.is_zero()) continue;
    any = true;
    g = gcd(g, x.norm());
    if (g == 1) return true;
  }
  if (!any) throw Error(ErrorKind::AllZero, "all generators are zero");
  return module_of(xs).norm() == 1;
}

namespace {

using i128 = __int128;

i128 abs128(i128 x) { return x < 0 ? -x : x; }

i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

i128 ext_gcd128(i128 x, i128 y, i128& s, i128& t) {
  i128 r0 = x, r1 = y, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (r1 != 0) {
    const i128 q = r0 / r1;
    i128 tmp = r0 - q * r1;
    r0 = r1;
    r1 = tmp;
    tmp = s0 - q * s1;
    s0 = s1;
    s1 = tmp;
    tmp = t0 - q * t1;
    t0 = t1;
    t1 = tmp;
  }
  if (r0 < 0) {
    r0 = -r0;
    s0 = -s0;
    t0 = -t0;
  }
  s = s0;
  t = t0;
  return r0;
}

}  // namespace

std::optional<bool> gcd_is_one_small(const std::int64_t* ab, int count, std::int64_t d) {
  constexpr std::int64_t kLimit = std::int64_t(1) << 30;
  const i128 t = trace_of(d), n0 = n0_of(d);
  i128 g = 0;
  bool any = false;
  for (int i = 0; i < count; ++i) {
    const i128 a = ab[2 * i], b = ab[2 * i + 1];
    if (abs128(a) > kLimit || abs128(b) > kLimit) return std::nullopt;
    if (a == 0 && b == 0) continue;
    any = true;
    g = gcd128(g, a * a + t * a * b - n0 * b * b);
    if (g == 1) return true;
  }
  if (!any) throw Error(ErrorKind::AllZero, "all generators are zero");
  // Incremental HNF as in ModuleBuilder; pu is kept reduced modulo zero_w.
  i128 pu = 0, pw = 0, zero_w = 0;
  auto add = [&](i128 u, i128 w) {
    if (w == 0) {
      zero_w = gcd128(zero_w, u);
    } else if (pw == 0) {
      pu = u;
      pw = w;
    } else {
      i128 s, r;
      const i128 h = ext_gcd128(pw, w, s, r);
      zero_w = gcd128(zero_w, (w / h) * pu - (pw / h) * u);
      pu = s * pu + r * u;
      pw = h;
    }
    if (zero_w != 0) pu %= zero_w;
  };
  for (int i = 0; i < count; ++i) {
    const i128 a = ab[2 * i], b = ab[2 * i + 1];
    if (a == 0 && b == 0) continue;
    add(a, b);
    add(b * n0, a + t * b);
  }
  return abs128(zero_w * pw) == 1;
}

IdealHNF ideal_sum(const IdealHNF& x, const IdealHNF& y) {
  const std::int64_t d = x.d();
  return ideal_from_generators({QuadInt(x.a(), 0, d), QuadInt(x.b(), x.c(), d), QuadInt(y.a(), 0, d),
                                QuadInt(y.b(), y.c(), d)});
}

IdealHNF ideal_product(const IdealHNF& x, const IdealHNF& y) {
  const std::int64_t d = x.d();
  const QuadInt x1(x.a(), 0, d), x2(x.b(), x.c(), d);
  const QuadInt y1(y.a(), 0, d), y2(y.b(), y.c(), d);
  return ideal_from_generators({x1 * y1, x1 * y2, x2 * y1, x2 * y2});
}

IdealHNF ideal_power(const IdealHNF& x, unsigned k) {
  IdealHNF r = IdealHNF::unit(x.d());
  for (unsigned i = 0; i < k; ++i) r = r * x;
  return r;
}

IdealHNF divide_by_prime(const IdealHNF& x, const IdealHNF& p) {
  if (!p.contains(x)) throw Error(ErrorKind::InvalidArgument, p.to_string() + " does not divide " + x.to_string());
  // x * conj(p) = N(p) * (x / p)
  IdealHNF k = x * p.conj();
  const BigInt n = p.norm();
  if (k.a() % n != 0 || k.b() % n != 0 || k.c() % n != 0)
    throw Error(ErrorKind::InvalidArgument, "inexact ideal division by " + p.to_string());
  return IdealHNF::unchecked(k.a() / n, k.b() / n, k.c() / n, x.d());
}

const char* to_string(SplitType s) {
  switch (s) {
    case SplitType::Split: return "split";
    case SplitType::Inert: return "inert";
    case SplitType::Ramified: return "ramified";
  }
  return "unknown";
}

SplitType split_type(const QuadField& field, std::int64_t p) {
  int k = field.kronecker_disc(p);
  if (k == 0) return SplitType::Ramified;
  return k > 0 ? SplitType::Split : SplitType::Inert;
}

std::vector<IdealHNF> primes_above(const QuadField& field, std::int64_t p) {
  const std::int64_t d = field.d();
  if (split_type(field, p) == SplitType::Inert) return {IdealHNF::unchecked(p, 0, p, d)};
  std::vector<IdealHNF> out;
  // (p, omega - r) = Z p + Z (-r + omega)
  for (std::int64_t r : min_poly_roots(d, p)) out.push_back(IdealHNF::unchecked(p, (p - r) % p, 1, d));
  return out;
}

std::vector<std::pair<std::int64_t, int>> factor_integer(std::int64_t n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "factor_integer needs n >= 1");
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t p = 2; p <= n / p; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

IdealHNF IdealFactorization::product(std::int64_t d) const {
  IdealHNF r = IdealHNF::unit(d);
  for (const auto& [p, e] : factors) r = r * ideal_power(p, static_cast<unsigned>(e));
  return r;
}

IdealFactorization factor_ideal(const QuadField& field, const IdealHNF& ideal) {
  IdealFactorization out;
  IdealHNF rest = ideal;
  for (const auto& [p, e] : factor_integer(to_int64(ideal.norm()))) {
    for (const auto& prime : primes_above(field, p)) {
      int k = 0;
      while (prime.contains(rest)) {
        rest = divide_by_prime(rest, prime);
        ++k;
      }
      if (k > 0) out.factors.emplace_back(prime, k);
    }
  }
  if (!rest.is_unit()) throw Error(ErrorKind::InvalidArgument, "factorization did not terminate at the unit ideal");
  return out;
}

int moebius(const QuadField& field, const IdealHNF& ideal) {
  int mu = 1;
  for (const auto& [p, e] : factor_ideal(field, ideal).factors) {
    if (e > 1) return 0;
    mu = -mu;
  }
  return mu;
}

std::vector<IdealHNF> ideal_divisors(const QuadField& field, const IdealHNF& ideal) {
  std::vector<IdealHNF> out = {IdealHNF::unit(field.d())};
  for (const auto& [p, e] : factor_ideal(field, ideal).factors) {
    std::vector<IdealHNF> next;
    for (const auto& q : out) {
      IdealHNF cur = q;
      next.push_back(cur);
      for (int k = 1; k <= e; ++k) {
        cur = cur * p;
        next.push_back(cur);
      }
    }
    out = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::int64_t count_ideals_of_norm(const QuadField& field, std::int64_t n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "ideal norm must be >= 1");
  std::int64_t count = 1;
  for (const auto& [p, e] : factor_integer(n)) {
    // The factorization of (p) determines the local count.
    auto fac = factor_ideal(field, IdealHNF::unchecked(p, 0, p, field.d())).factors;
    if (fac.size() == 2)
      count *= e + 1;
    else if (fac.front().second == 1 && e % 2 == 1)
      return 0;
  }
  return count;
}

}  // namespace quasivis
