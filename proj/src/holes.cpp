#include "quasivis/holes.hpp"
#include "quasivis/errors.hpp"
#include "quasivis/ideal.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace quasivis {

using HighFloat = boost::multiprecision::cpp_bin_float_50;

namespace {

// All tuples of [-A, A]^n in lexicographic order.
std::vector<std::vector<int>> box_tuples(int n, int A) {
  std::vector<std::vector<int>> out;
  std::vector<int> t(static_cast<std::size_t>(n), -A);
  for (;;) {
    out.push_back(t);
    int j = n - 1;
    while (j >= 0 && t[static_cast<std::size_t>(j)] == A) t[static_cast<std::size_t>(j--)] = -A;
    if (j < 0) return out;
    ++t[static_cast<std::size_t>(j)];
  }
}

// Orthonormal basis of span(basis) by Gram-Schmidt.
template <class F>
std::vector<std::vector<F>> orthonormal(const std::vector<std::vector<double>>& basis, std::size_t n) {
  std::vector<std::vector<F>> q;
  for (const auto& b : basis) {
    if (b.size() != n) throw Error(ErrorKind::InvalidArgument, "subspace basis has the wrong dimension");
    std::vector<F> v(b.begin(), b.end());
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : q) {
        F dot = 0;
        for (std::size_t i = 0; i < n; ++i) dot += u[i] * v[i];
        for (std::size_t i = 0; i < n; ++i) v[i] -= dot * u[i];
      }
    }
    F len = 0;
    for (const auto& c : v) len += c * c;
    len = sqrt(len);
    if (!(len > F(1e-12))) throw Error(ErrorKind::InvalidArgument, "subspace basis is linearly dependent");
    for (auto& c : v) c /= len;
    q.push_back(std::move(v));
  }
  return q;
}

template <class F>
std::vector<F> reject(const std::vector<std::vector<F>>& q, std::vector<F> v) {
  for (const auto& u : q) {
    F dot = 0;
    for (std::size_t i = 0; i < v.size(); ++i) dot += u[i] * v[i];
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= dot * u[i];
  }
  return v;
}

constexpr std::size_t kMaxSearchDim = 8;
using SearchVec = std::array<std::int64_t, kMaxSearchDim>;

// Calls f(k) for every k in Z^m with max |k_i| = r.
template <class Fn>
bool for_each_in_shell(int m, std::int64_t r, Fn&& f) {
  SearchVec k{};
  if (r == 0) return f(k);
  // The first coordinate with |k_p| = r is p.
  for (int p = 0; p < m; ++p) {
    for (std::int64_t sp : {-r, r}) {
      SearchVec lo{}, hi{};
      for (int i = 0; i < m; ++i) {
        if (i < p) lo[i] = -(r - 1), hi[i] = r - 1;
        else if (i == p) lo[i] = hi[i] = sp;
        else lo[i] = -r, hi[i] = r;
      }
      k = lo;
      for (;;) {
        if (!f(k)) return false;
        int j = m - 1;
        while (j >= 0 && k[j] == hi[j]) {
          k[j] = lo[j];
          --j;
        }
        if (j < 0) break;
        ++k[j];
      }
    }
  }
  return true;
}

long double accurate_real(const QuadInt& x) {
  const HighFloat s = sqrt(HighFloat(x.d()));
  const HighFloat a(x.a()), b(x.b());
  const bool half = x.d() % 4 == 1;
  const HighFloat omega = half ? (1 + s) / 2 : s;
  return static_cast<long double>(a + b * omega);
}

}  // namespace

std::int64_t CRTHole::prime_for(const std::vector<int>& tuple) const {
  const auto it = std::lower_bound(tuples.begin(), tuples.end(), tuple);
  if (it == tuples.end() || *it != tuple) throw Error(ErrorKind::InvalidArgument, "tuple outside [-A, A]^n");
  return primes[static_cast<std::size_t>(it - tuples.begin())];
}

std::vector<std::int64_t> first_primes(std::size_t count) {
  std::vector<std::int64_t> out;
  std::size_t limit = 64;
  while (out.size() < count) {
    limit *= 2;
    std::vector<bool> composite(limit + 1, false);
    out.clear();
    for (std::size_t p = 2; p <= limit && out.size() < count; ++p) {
      if (composite[p]) continue;
      out.push_back(static_cast<std::int64_t>(p));
      for (std::size_t q = p * p; q <= limit; q += p) composite[q] = true;
    }
  }
  return out;
}

CRTHole build_crt_hole(int n, int A) {
  if (n < 2 || A < 0) throw Error(ErrorKind::InvalidArgument, "need n >= 2 and A >= 0");
  CRTHole h;
  h.n = n;
  h.A = A;
  h.tuples = box_tuples(n, A);
  h.primes = first_primes(h.tuples.size());
  h.N = 1;
  h.x0.assign(static_cast<std::size_t>(n), BigInt(0));
  // Incremental CRT: keep x_j mod N, extend by one prime at a time.
  for (std::size_t t = 0; t < h.tuples.size(); ++t) {
    const BigInt p = h.primes[t];
    const BigInt inv = [&] {
      BigInt m = mod_floor(h.N, p), r = 1;
      for (BigInt e = p - 2; e > 0; e >>= 1, m = m * m % p)
        if ((e & 1) != 0) r = r * m % p;
      return r;
    }();
    for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j) {
      const BigInt want = mod_floor(BigInt(-h.tuples[t][j]), p);
      const BigInt s = mod_floor((want - h.x0[j]) * inv, p);
      h.x0[j] += h.N * s;
    }
    h.N *= p;
  }
  return h;
}

void check_residue_class(const CRTHole& hole, const std::vector<BigInt>& x) {
  if (x.size() != static_cast<std::size_t>(hole.n)) throw Error(ErrorKind::InvalidArgument, "x has the wrong dimension");
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (mod_floor(x[j] - hole.x0[j], hole.N) != 0)
      throw Error(ErrorKind::NotInResidueClass, "coordinate " + std::to_string(j) + " is not x0 mod N");
  }
}

bool verify_hole(const CRTHole& hole, const std::vector<BigInt>& x) {
  check_residue_class(hole, x);
  for (const auto& t : hole.tuples) {
    BigInt g = 0;
    for (std::size_t j = 0; j < x.size(); ++j) g = gcd(g, x[j] + t[j]);
    if (g == 1) return false;
  }
  return true;
}

bool divisor_witness_holds(const CRTHole& hole, const std::vector<BigInt>& x) {
  check_residue_class(hole, x);
  for (std::size_t k = 0; k < hole.tuples.size(); ++k) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (mod_floor(x[j] + hole.tuples[k][j], BigInt(hole.primes[k])) != 0) return false;
    }
  }
  return true;
}

std::vector<BigInt> hole_translate(const CRTHole& hole, const std::vector<BigInt>& k) {
  if (k.size() != static_cast<std::size_t>(hole.n)) throw Error(ErrorKind::InvalidArgument, "k has the wrong dimension");
  std::vector<BigInt> x(k.size());
  for (std::size_t j = 0; j < k.size(); ++j) x[j] = hole.x0[j] + hole.N * k[j];
  return x;
}

double distance_to_subspace(const std::vector<BigInt>& x, const std::vector<std::vector<double>>& basis) {
  const auto q = orthonormal<HighFloat>(basis, x.size());
  std::vector<HighFloat> v;
  for (const auto& c : x) v.emplace_back(c);
  HighFloat s = 0;
  for (const auto& c : reject(q, v)) s += c * c;
  return static_cast<double>(sqrt(s));
}

std::optional<HoleHit> hole_near_subspace(const CRTHole& hole, const std::vector<std::vector<double>>& basis,
                                          double R, std::uint64_t budget) {
  const auto n = static_cast<std::size_t>(hole.n);
  if (basis.empty() || basis.size() >= n) throw Error(ErrorKind::InvalidArgument, "need 0 < dim V < n");
  if (n > kMaxSearchDim) throw Error(ErrorKind::InvalidArgument, "hole search supports n <= 8");
  const auto q = orthonormal<long double>(basis, n);
  const long double N = to_long_double(hole.N);
  std::vector<long double> x0(n);
  for (std::size_t j = 0; j < n; ++j) x0[j] = to_long_double(hole.x0[j]);
  const auto u = reject(q, x0);
  // Nw[j] = N times the component of e_j orthogonal to V.
  std::array<std::array<long double, kMaxSearchDim>, kMaxSearchDim> Nw{};
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<long double> e(n, 0);
    e[j] = 1;
    const auto w = reject(q, e);
    for (std::size_t i = 0; i < n; ++i) Nw[j][i] = N * w[i];
  }
  const auto& last = Nw[n - 1];
  long double last2 = 0;
  for (std::size_t i = 0; i < n; ++i) last2 += last[i] * last[i];
  const long double inv_last2 = last2 > 0 ? 1 / last2 : 0;
  const long double reach = std::pow(R * (1 + 1e-6L) + 1e-3L, 2);

  std::uint64_t tried = 0;
  std::optional<HoleHit> hit;
  auto test = [&](const SearchVec& k) {
    if (tried >= budget) return false;
    ++tried;
    std::array<long double, kMaxSearchDim> c{};
    for (std::size_t i = 0; i < n; ++i) c[i] = u[i];
    for (std::size_t j = 0; j + 1 < n; ++j) {
      if (k[j] == 0) continue;
      const auto kj = static_cast<long double>(k[j]);
      for (std::size_t i = 0; i < n; ++i) c[i] += kj * Nw[j][i];
    }
    long double t0 = 0;
    int options = 1;
    if (last2 > 1e-24L * N * N) {
      long double dot = 0;
      for (std::size_t i = 0; i < n; ++i) dot += c[i] * last[i];
      t0 = std::floor(-dot * inv_last2);
      options = 2;
    }
    for (int o = 0; o < options; ++o) {
      const long double t = t0 + o;
      long double d2 = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const long double e = c[i] + t * last[i];
        d2 += e * e;
      }
      if (d2 > reach) continue;
      std::vector<BigInt> kk(n);
      for (std::size_t j = 0; j + 1 < n; ++j) kk[j] = k[j];
      kk[n - 1] = BigInt(static_cast<std::int64_t>(t));
      auto x = hole_translate(hole, kk);
      const double dist = distance_to_subspace(x, basis);
      if (dist <= R) {
        hit = HoleHit{std::move(kk), std::move(x), dist, tried};
        return false;
      }
    }
    return true;
  };
  for (std::int64_t r = 0; tried < budget && !hit; ++r) {
    if (!for_each_in_shell(static_cast<int>(n) - 1, r, test)) break;
  }
  return hit;
}

EmptyBall scan_empty_ball(const std::vector<std::vector<double>>& points, const std::vector<double>& lo,
                          const std::vector<double>& hi, double h) {
  const std::size_t d = lo.size();
  if (d == 0 || d > 3 || hi.size() != d) throw Error(ErrorKind::InvalidArgument, "scan_empty_ball needs a box in 1..3 dims");
  if (!(h > 0)) throw Error(ErrorKind::InvalidArgument, "grid spacing must be positive");
  double vol = 1;
  for (std::size_t j = 0; j < d; ++j) {
    if (!(hi[j] > lo[j])) throw Error(ErrorKind::InvalidArgument, "empty box");
    vol *= hi[j] - lo[j];
  }

  // Points bucketed in cubes of side s.
  const double s = std::max(h, points.empty() ? h : std::pow(vol / static_cast<double>(points.size()), 1.0 / d));
  auto cell_of = [&](const double* p, std::int64_t* c) {
    for (std::size_t j = 0; j < d; ++j) c[j] = static_cast<std::int64_t>(std::floor((p[j] - lo[j]) / s));
  };
  auto key = [&](const std::int64_t* c) {
    std::uint64_t k = 0;
    for (std::size_t j = 0; j < d; ++j) k = k * 2097152u + static_cast<std::uint64_t>(c[j] + 1048576);
    return k;
  };
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() < d) throw Error(ErrorKind::InvalidArgument, "point of the wrong dimension");
    std::int64_t c[3];
    cell_of(points[i].data(), c);
    buckets[key(c)].push_back(i);
  }

  EmptyBall best;
  best.radius = -1;
  auto radius_at = [&](const std::vector<double>& c, double floor_r) {
    double r = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < d; ++j) r = std::min({r, c[j] - lo[j], hi[j] - c[j]});
    if (r <= floor_r) return r;
    std::int64_t cc[3];
    cell_of(c.data(), cc);
    for (std::int64_t ring = 0; static_cast<double>(ring - 1) * s < r; ++ring) {
      // Cells at Chebyshev distance `ring` from cc.
      std::int64_t off[3] = {-ring, -ring, -ring};
      for (;;) {
        std::int64_t m = 0;
        for (std::size_t j = 0; j < d; ++j) m = std::max(m, std::abs(off[j]));
        if (m == ring) {
          std::int64_t cell[3];
          for (std::size_t j = 0; j < d; ++j) cell[j] = cc[j] + off[j];
          auto it = buckets.find(key(cell));
          if (it != buckets.end()) {
            for (std::size_t i : it->second) {
              double d2 = 0;
              for (std::size_t j = 0; j < d; ++j) d2 += (points[i][j] - c[j]) * (points[i][j] - c[j]);
              r = std::min(r, std::sqrt(d2));
            }
            if (r <= floor_r) return r;
          }
        }
        std::size_t j = d;
        while (j > 0 && off[j - 1] == ring) off[--j] = -ring;
        if (j == 0) break;
        ++off[j - 1];
      }
    }
    return r;
  };
  auto consider = [&](const std::vector<double>& c) {
    ++best.centers_tried;
    const double r = radius_at(c, best.radius);
    if (r > best.radius) {
      best.radius = r;
      best.center = c;
    }
  };

  std::vector<double> mid(d);
  for (std::size_t j = 0; j < d; ++j) mid[j] = (lo[j] + hi[j]) / 2;
  consider(mid);
  std::vector<std::int64_t> steps(d);
  for (std::size_t j = 0; j < d; ++j) steps[j] = static_cast<std::int64_t>(std::floor((hi[j] - lo[j]) / h));
  std::vector<std::int64_t> t(d, 1);
  std::vector<double> c(d);
  bool any = std::all_of(steps.begin(), steps.end(), [](std::int64_t v) { return v >= 2; });
  while (any) {
    for (std::size_t j = 0; j < d; ++j) c[j] = lo[j] + h * static_cast<double>(t[j]);
    consider(c);
    std::size_t j = d;
    while (j > 0 && t[j - 1] == steps[j - 1] - 1) t[--j] = 1;
    if (j == 0) break;
    ++t[j - 1];
  }
  return best;
}

EmptyBall scan_empty_ball(const std::vector<CPPoint>& points, const std::vector<double>& lo,
                          const std::vector<double>& hi, double h) {
  std::vector<std::vector<double>> phys;
  phys.reserve(points.size());
  for (const auto& p : points) phys.push_back(p.phys);
  return scan_empty_ball(phys, lo, hi, h);
}

LiftReport lift_hole(const CPSetDesc& desc, const CRTHole& hole, const std::vector<BigInt>& x) {
  if (!desc.is_exact() || desc.n() != hole.n)
    throw Error(ErrorKind::InvalidArgument, "lift_hole needs a field lattice of rank n");
  check_residue_class(hole, x);
  const VisibilityTester visible(desc);
  const FieldLattice& L = *desc.field_lattice;
  const auto W = desc.effective_window();
  LiftReport rep;
  std::vector<std::int64_t> z(x.size());
  for (const auto& t : hole.tuples) {
    ++rep.box_points;
    for (std::size_t j = 0; j < x.size(); ++j) z[j] = to_int64(x[j] + t[j]);
    std::vector<QuadInt> sig;
    std::vector<double> internal;
    for (const auto& v : L.coords(z.data())) {
      sig.push_back(v.conj());
      internal.push_back(static_cast<double>(accurate_real(sig.back())));
    }
    if (!W.contains(sig)) continue;
    ++rep.set_points;
    if (visible(z.data(), internal.data())) ++rep.visible;
  }
  return rep;
}

}  // namespace quasivis
