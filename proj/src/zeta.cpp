#include "quasivis/zeta.hpp"
#include "quasivis/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace quasivis {

namespace {

// chi(m) = (disc | m), periodic modulo disc.
std::vector<int> character_table(const QuadField& field) {
  const std::int64_t D = field.disc();
  std::vector<int> chi(static_cast<std::size_t>(D));
  for (std::int64_t r = 0; r < D; ++r) chi[static_cast<std::size_t>(r)] = r == 0 ? 0 : kronecker(D, r);
  return chi;
}

void check_s(int s) {
  if (s < 2) throw Error(ErrorKind::InvalidArgument, "zeta needs s >= 2");
}

long double ipow(long double x, int s) {
  long double r = 1;
  for (int i = 0; i < s; ++i) r *= x;
  return r;
}

// Upper bound for sum_{p > P} log of the local factor (Rosser-Schoenfeld pi(x) < 1.25506 x / log x).
long double euler_log_tail(int s, long double P) {
  return 2 * (1 + 2 * std::pow(P, -s)) * 1.25506L * s * std::pow(P, 1 - s) / ((s - 1) * std::log(P));
}

// Explicit tail bound of the direct sum beyond n_max.
long double direct_tail_bound(int s, long double c_e, long double n_max) {
  return s * c_e * std::pow(n_max, 0.5L - s) / (s - 0.5L);
}

class PrimeSegments {
 public:
  explicit PrimeSegments(std::uint64_t limit) : limit_(limit) {
    std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(limit))) + 1;
    std::vector<char> small(root + 1, 1);
    for (std::uint64_t i = 2; i <= root; ++i) {
      if (!small[i]) continue;
      base_.push_back(i);
      for (std::uint64_t j = i * i; j <= root; j += i) small[j] = 0;
    }
  }

  // Calls f(p) for every prime in [lo, hi], hi <= limit.
  template <class F>
  void each_prime(std::uint64_t lo, std::uint64_t hi, F&& f) const {
    constexpr std::uint64_t kSegment = 1 << 20;
    std::vector<char> seg;
    for (std::uint64_t start = std::max<std::uint64_t>(lo, 2); start <= hi; start += kSegment) {
      const std::uint64_t end = std::min(hi, start + kSegment - 1);
      seg.assign(end - start + 1, 1);
      for (std::uint64_t p : base_) {
        if (p * p > end) break;
        std::uint64_t first = std::max(p * p, (start + p - 1) / p * p);
        for (std::uint64_t j = first; j <= end; j += p) seg[j - start] = 0;
      }
      for (std::uint64_t i = 0; i < seg.size(); ++i) {
        if (seg[i]) f(start + i);
      }
    }
  }

  std::uint64_t limit() const { return limit_; }

 private:
  std::uint64_t limit_;
  std::vector<std::uint64_t> base_;
};

long double local_log(int chi, long double x) {
  // x = p^-s
  if (chi > 0) return -2 * std::log1p(-x);
  if (chi < 0) return -std::log1p(-x * x);
  return -std::log1p(-x);
}

}  // namespace

std::vector<std::int16_t> ideal_counts(const QuadField& field, std::uint64_t n_max) {
  const auto chi = character_table(field);
  const std::uint64_t D = chi.size();
  std::vector<std::int16_t> h(n_max + 1, 0);
  for (std::uint64_t m = 1; m <= n_max; ++m) {
    const int c = chi[m % D];
    if (c == 0) continue;
    for (std::uint64_t k = m; k <= n_max; k += m) h[k] = static_cast<std::int16_t>(h[k] + c);
  }
  return h;
}

double fitted_ideal_constant(const QuadField& field, std::uint64_t n_max) {
  const auto h = ideal_counts(field, n_max);
  double best = 0;
  for (std::uint64_t n = 1; n <= n_max; ++n) best = std::max(best, h[n] / std::sqrt(static_cast<double>(n)));
  return best;
}

double zeta_residue(const QuadField& field) {
  const auto chi = character_table(field);
  const long double D = static_cast<long double>(chi.size());
  long double sum = 0;
  for (std::size_t a = 1; a < chi.size(); ++a) {
    if (chi[a] != 0) sum += chi[a] * std::log(std::sin(std::numbers::pi_v<long double> * a / D));
  }
  return static_cast<double>(-sum / std::sqrt(D));
}

int character_sum_bound(const QuadField& field) {
  const auto chi = character_table(field);
  int partial = 0, best = 0;
  for (std::size_t m = 1; m <= chi.size(); ++m) {
    partial += chi[m % chi.size()];
    best = std::max(best, std::abs(partial));
  }
  return best;
}

Truncated dedekind_zeta_direct(const QuadField& field, int s, std::uint64_t n_max) {
  check_s(s);
  const auto h = ideal_counts(field, n_max);
  long double sum = 0;
  std::int64_t total = 0;
  for (std::uint64_t n = 1; n <= n_max; ++n) total += h[n];
  for (std::uint64_t n = n_max; n >= 1; --n) {
    if (h[n] != 0) sum += h[n] / ipow(static_cast<long double>(n), s);
  }
  // sum_{n > N} H_n n^-s = -A(N) N^-s + s c N^{1-s}/(s-1) + R with |A(x) - c x| <= 4 sqrt(M x).
  const long double N = static_cast<long double>(n_max);
  const long double c = zeta_residue(field);
  sum += -total / ipow(N, s) + s * c * std::pow(N, 1 - s) / (s - 1);
  const long double c_e = 4 * std::sqrt(static_cast<long double>(character_sum_bound(field)));
  const long double rounding = 1e-15L * sum + n_max * 1e-19L;
  return {static_cast<double>(sum), static_cast<double>(direct_tail_bound(s, c_e, N) + rounding)};
}

Truncated dedekind_zeta_euler(const QuadField& field, int s, std::uint64_t p_max) {
  check_s(s);
  const auto chi = character_table(field);
  const std::uint64_t D = chi.size();
  PrimeSegments primes(p_max);
  long double log_sum = 0;
  primes.each_prime(2, p_max, [&](std::uint64_t p) {
    log_sum += local_log(chi[p % D], 1 / ipow(static_cast<long double>(p), s));
  });
  // The omitted log-tail lies in [0, L]; centre the estimate.
  const long double L = euler_log_tail(s, static_cast<long double>(p_max));
  const long double value = std::exp(log_sum + L / 2);
  const long double bound = value * std::expm1(L / 2) + 1e-15L * value;
  return {static_cast<double>(value), static_cast<double>(bound)};
}

ZetaResult dedekind_zeta(const QuadField& field, int s, double tol, const ZetaBudget& budget) {
  check_s(s);
  if (!(tol > 0)) throw Error(ErrorKind::InvalidArgument, "tol must be positive");
  ZetaResult r;
  r.s = s;
  r.tol = tol;

  // Direct: smallest N whose explicit tail bound (plus rounding allowance) meets tol.
  const long double c_e = 4 * std::sqrt(static_cast<long double>(character_sum_bound(field)));
  const long double target = tol * 0.9L;
  long double n_est = std::pow(s * c_e / ((s - 0.5L) * target), 1 / (s - 0.5L));
  n_est = std::max<long double>({n_est * 1.01L, 1000.0L, 4.0L * field.disc()});
  if (n_est > static_cast<long double>(budget.max_terms))
    throw Error(ErrorKind::TolTooTight, "direct sum needs " + std::to_string(static_cast<double>(n_est)) +
                                            " terms, budget is " + std::to_string(budget.max_terms));
  r.n_max = static_cast<std::uint64_t>(std::ceil(n_est));
  r.direct = dedekind_zeta_direct(field, s, r.n_max);
  if (r.direct.bound > tol) throw Error(ErrorKind::TolTooTight, "direct sum bound above tolerance");
  r.value = r.direct.value;

  // Euler: bound is about value * L / 2 with value known from the direct sum.
  const long double l_target = 2 * tol * 0.9L / (r.direct.value + r.direct.bound);
  long double lo = std::log(100.0L), hi = std::log(static_cast<long double>(budget.max_prime));
  if (euler_log_tail(s, std::exp(hi)) > l_target)
    throw Error(ErrorKind::TolTooTight, "Euler product needs primes beyond " + std::to_string(budget.max_prime));
  for (int i = 0; i < 80; ++i) {
    long double mid = (lo + hi) / 2;
    (euler_log_tail(s, std::exp(mid)) > l_target ? lo : hi) = mid;
  }
  r.p_max = static_cast<std::uint64_t>(std::ceil(std::exp(hi)));
  r.euler = dedekind_zeta_euler(field, s, r.p_max);
  if (r.euler.bound > tol) throw Error(ErrorKind::TolTooTight, "Euler product bound above tolerance");
  r.agree = std::fabs(r.direct.value - r.euler.value) <= 2 * tol;
  return r;
}

Truncated riemann_zeta(int s, double tol) {
  check_s(s);
  if (!(tol > 0)) throw Error(ErrorKind::InvalidArgument, "tol must be positive");
  // Tail lies between the integrals from N+1 and from N; half-width <= N^-s / 2.
  const auto n = static_cast<std::uint64_t>(std::ceil(std::pow(1 / (1.8 * tol), 1.0 / s))) + 1;
  long double sum = 0;
  for (std::uint64_t k = n; k >= 1; --k) sum += 1 / ipow(static_cast<long double>(k), s);
  const long double N = static_cast<long double>(n);
  const long double hi = std::pow(N, 1 - s) / (s - 1);
  const long double lo = std::pow(N + 1, 1 - s) / (s - 1);
  return {static_cast<double>(sum + (hi + lo) / 2), static_cast<double>((hi - lo) / 2 + 1e-16L * sum)};
}

}  // namespace quasivis
