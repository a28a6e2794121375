#include "quasivis/lattice.hpp"
#include "quasivis/errors.hpp"
#include "quasivis/scanner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace quasivis {

GridDesc GridDesc::identity(int n) {
  GridDesc g;
  g.n = n;
  g.basis.assign(static_cast<std::size_t>(n * n), 0.0);
  for (int i = 0; i < n; ++i) g.basis[static_cast<std::size_t>(i * n + i)] = 1;
  return g;
}

GridDesc GridDesc::from_columns(const std::vector<std::vector<double>>& columns, int d) {
  GridDesc g;
  g.n = static_cast<int>(columns.size());
  g.d = d;
  const auto n = static_cast<std::size_t>(g.n);
  g.basis.assign(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (columns[j].size() != n) throw Error(ErrorKind::InvalidArgument, "basis must be square");
    for (std::size_t i = 0; i < n; ++i) g.basis[i * n + j] = columns[j][i];
  }
  return g;
}

double GridDesc::covolume() const {
  const auto N = static_cast<std::size_t>(n);
  std::vector<long double> a(basis.begin(), basis.end());
  long double det = 1;
  for (std::size_t c = 0; c < N; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < N; ++r)
      if (std::fabs(a[r * N + c]) > std::fabs(a[p * N + c])) p = r;
    if (a[p * N + c] == 0) return 0;
    if (p != c) {
      for (std::size_t k = 0; k < N; ++k) std::swap(a[c * N + k], a[p * N + k]);
      det = -det;
    }
    det *= a[c * N + c];
    for (std::size_t r = c + 1; r < N; ++r) {
      const long double f = a[r * N + c] / a[c * N + c];
      for (std::size_t k = c; k < N; ++k) a[r * N + k] -= f * a[c * N + k];
    }
  }
  return static_cast<double>(std::fabs(det));
}

void GridDesc::apply(const std::int64_t* z, double* y) const {
  const auto N = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i < N; ++i) {
    double s = translation.empty() ? 0.0 : translation[i];
    for (std::size_t j = 0; j < N; ++j) s += basis[i * N + j] * static_cast<double>(z[j]);
    y[i] = s;
  }
}

FieldLattice::FieldLattice(const QuadField& field, int d) : FieldLattice(field, d, field.one()) {}

FieldLattice::FieldLattice(const QuadField& field, int d, QuadInt multiplier)
    : field_(field), d_(d), g_(std::move(multiplier)) {
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "dimension must be positive");
  if (g_.is_zero()) throw Error(ErrorKind::ZeroElement, "sublattice multiplier is zero");
  const QuadInt gw = g_ * field.omega();
  col_[0] = static_cast<double>(g_.real());
  col_[1] = static_cast<double>(g_.conj_real());
  col_[2] = static_cast<double>(gw.real());
  col_[3] = static_cast<double>(gw.conj_real());
}

std::vector<QuadInt> FieldLattice::coords(const std::int64_t* z) const {
  std::vector<QuadInt> out;
  for (int i = 0; i < d_; ++i) out.push_back(field_.make(z[2 * i], z[2 * i + 1]) * g_);
  return out;
}

std::vector<QuadInt> FieldLattice::embedding(const std::int64_t* z) const {
  std::vector<QuadInt> out = coords(z);
  for (int i = 0; i < d_; ++i) out.push_back(out[static_cast<std::size_t>(i)].conj());
  return out;
}

void FieldLattice::embed(const std::int64_t* z, double* y) const {
  for (int i = 0; i < d_; ++i) {
    const auto a = static_cast<double>(z[2 * i]), b = static_cast<double>(z[2 * i + 1]);
    y[i] = a * col_[0] + b * col_[2];
    y[d_ + i] = a * col_[1] + b * col_[3];
  }
}

GridDesc FieldLattice::grid() const {
  GridDesc g;
  g.n = n();
  g.d = d_;
  const auto N = static_cast<std::size_t>(n());
  g.basis.assign(N * N, 0.0);
  for (std::size_t i = 0; i < static_cast<std::size_t>(d_); ++i) {
    g.basis[i * N + 2 * i] = col_[0];
    g.basis[i * N + 2 * i + 1] = col_[2];
    g.basis[(d_ + i) * N + 2 * i] = col_[1];
    g.basis[(d_ + i) * N + 2 * i + 1] = col_[3];
  }
  return g;
}

double FieldLattice::covolume() const {
  const double n = std::fabs(static_cast<double>(to_long_double(g_.norm())));
  return std::pow(std::sqrt(static_cast<double>(field_.disc())) * n, d_);
}

BigInt FieldLattice::covolume_squared() const {
  const BigInt n = g_.norm();
  BigInt r = 1;
  for (int i = 0; i < d_; ++i) r *= BigInt(field_.disc()) * n * n;
  return r;
}

std::optional<std::vector<std::int64_t>> FieldLattice::preimage(const std::vector<QuadInt>& xs) const {
  const BigInt n = g_.norm();
  std::vector<std::int64_t> z;
  for (const auto& x : xs) {
    const QuadInt y = x * g_.conj();
    if (!y.divisible_by(n)) return std::nullopt;
    const QuadInt q = y.div_exact(n);
    z.push_back(to_int64(q.a()));
    z.push_back(to_int64(q.b()));
  }
  return z;
}

namespace {

struct Buffer {
  std::vector<std::int64_t> z;
  std::vector<double> y;
  EnumStats stats;
};

// Shared driver: scans candidates, `accept(z, y, stats)` decides membership.
template <class Accept>
void drive(int n, const std::vector<double>& basis, const std::vector<double>& shift, const ConvexRegion& region,
           const PointVisitor& visit, const EnumOptions& opts, EnumStats* stats, Accept&& accept) {
  if (region.dim() != n) throw Error(ErrorKind::InvalidArgument, "region dimension does not match lattice");
  std::vector<FloatHalfSpace> rows;
  region.outer_halfspaces(rows, 0, n);
  auto box = region.bounding_box();
  if (!shift.empty()) {
    for (auto& r : rows) {
      for (int i = 0; i < n; ++i) r.b -= r.a[static_cast<std::size_t>(i)] * shift[static_cast<std::size_t>(i)];
    }
    for (int i = 0; i < n; ++i) {
      box[static_cast<std::size_t>(i)].first -= shift[static_cast<std::size_t>(i)];
      box[static_cast<std::size_t>(i)].second -= shift[static_cast<std::size_t>(i)];
    }
  }
  const IntegerScanner scanner(n, basis, rows, box);
  if (scanner.empty()) return;
  const auto [lo, hi] = scanner.outer_range();
  const int threads = std::max(1, opts.threads);
  const auto N = static_cast<std::size_t>(n);

  if (threads == 1 || hi - lo < 8) {
    EnumStats local;
    std::vector<double> y(N);
    scanner.scan([&](const std::int64_t* z) {
      ++local.candidates;
      if (accept(z, y.data(), local)) {
        ++local.accepted;
        visit(z, y.data());
      }
    });
    if (stats) {
      stats->candidates += local.candidates;
      stats->accepted += local.accepted;
      stats->exact_tests += local.exact_tests;
      stats->boundary_ambiguous += local.boundary_ambiguous;
    }
    return;
  }

  // Slabs of the outer coordinate are filled in parallel and replayed in order.
  const std::int64_t slabs = std::min<std::int64_t>(hi - lo + 1, threads * 8);
  std::vector<Buffer> buffers(static_cast<std::size_t>(slabs));
  std::atomic<std::int64_t> next{0};
  auto worker = [&]() {
    std::vector<double> y(N);
    for (std::int64_t s; (s = next.fetch_add(1)) < slabs;) {
      const std::int64_t a = lo + (hi - lo + 1) * s / slabs;
      const std::int64_t b = lo + (hi - lo + 1) * (s + 1) / slabs - 1;
      auto& buf = buffers[static_cast<std::size_t>(s)];
      scanner.scan(a, b, [&](const std::int64_t* z) {
        ++buf.stats.candidates;
        if (accept(z, y.data(), buf.stats)) {
          ++buf.stats.accepted;
          buf.z.insert(buf.z.end(), z, z + n);
          buf.y.insert(buf.y.end(), y.begin(), y.end());
        }
      });
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (const auto& buf : buffers) {
    for (std::size_t k = 0; k * N < buf.z.size(); ++k) visit(buf.z.data() + k * N, buf.y.data() + k * N);
    if (stats) {
      stats->candidates += buf.stats.candidates;
      stats->accepted += buf.stats.accepted;
      stats->exact_tests += buf.stats.exact_tests;
      stats->boundary_ambiguous += buf.stats.boundary_ambiguous;
    }
  }
}

}  // namespace

void for_each_point(const FieldLattice& lat, const ConvexRegion& region, const PointVisitor& visit,
                    const EnumOptions& opts, EnumStats* stats) {
  const GridDesc g = lat.grid();
  const auto n = static_cast<std::size_t>(lat.n());
  drive(lat.n(), g.basis, {}, region, visit, opts, stats, [&](const std::int64_t* z, double* y, EnumStats& st) {
    lat.embed(z, y);
    switch (region.classify(std::span<const double>(y, n), opts.guard)) {
      case FloatMembership::Outside:
        return false;
      case FloatMembership::Inside:
        return true;
      case FloatMembership::Boundary:
        break;
    }
    ++st.exact_tests;
    return region.contains(lat.embedding(z));
  });
}

void for_each_point(const GridDesc& grid, const ConvexRegion& region, const PointVisitor& visit,
                    const EnumOptions& opts, EnumStats* stats) {
  const auto n = static_cast<std::size_t>(grid.n);
  drive(grid.n, grid.basis, grid.translation, region, visit, opts, stats,
        [&](const std::int64_t* z, double* y, EnumStats& st) {
          grid.apply(z, y);
          switch (region.classify(std::span<const double>(y, n), opts.tol)) {
            case FloatMembership::Outside:
              return false;
            case FloatMembership::Inside:
              return true;
            case FloatMembership::Boundary:
              break;
          }
          ++st.boundary_ambiguous;
          return true;
        });
}

std::vector<LatticePoint> enumerate_points(const FieldLattice& lat, const ConvexRegion& region,
                                           const EnumOptions& opts, EnumStats* stats) {
  std::vector<LatticePoint> out;
  const auto n = static_cast<std::size_t>(lat.n());
  for_each_point(
      lat, region,
      [&](const std::int64_t* z, const double* y) {
        out.push_back({std::vector<std::int64_t>(z, z + n), std::vector<double>(y, y + n), lat.embedding(z)});
      },
      opts, stats);
  return out;
}

std::vector<LatticePoint> enumerate_points(const GridDesc& grid, const ConvexRegion& region, const EnumOptions& opts,
                                           EnumStats* stats) {
  std::vector<LatticePoint> out;
  const auto n = static_cast<std::size_t>(grid.n);
  for_each_point(
      grid, region,
      [&](const std::int64_t* z, const double* y) {
        out.push_back({std::vector<std::int64_t>(z, z + n), std::vector<double>(y, y + n), {}});
      },
      opts, stats);
  return out;
}

std::uint64_t count_points(const FieldLattice& lat, const ConvexRegion& region, const EnumOptions& opts) {
  std::uint64_t c = 0;
  for_each_point(lat, region, [&](const std::int64_t*, const double*) { ++c; }, opts);
  return c;
}

std::uint64_t count_points(const GridDesc& grid, const ConvexRegion& region, const EnumOptions& opts,
                           EnumStats* stats) {
  std::uint64_t c = 0;
  for_each_point(grid, region, [&](const std::int64_t*, const double*) { ++c; }, opts, stats);
  return c;
}

std::vector<std::int64_t> UnitRescaler::apply(const std::int64_t* z, int power) const {
  const QuadInt u = power >= 0 ? g0.pow(static_cast<unsigned>(power)) : g0.conj().pow(static_cast<unsigned>(-power));
  const std::size_t n = static_cast<std::size_t>(std::sqrt(static_cast<double>(matrix.size())) + 0.5);
  std::vector<std::int64_t> out(n);
  for (std::size_t i = 0; i + 1 < n; i += 2) {
    const QuadInt x = QuadInt(z[i], z[i + 1], g0.d()) * u;
    out[i] = to_int64(x.a());
    out[i + 1] = to_int64(x.b());
  }
  return out;
}

UnitRescaler unit_rescalers(const FieldLattice& lat) {
  const QuadField& k = lat.field();
  UnitRescaler r;
  r.exponent = k.unit_norm() == 1 ? 1 : 2;
  r.g0 = k.lambda_power(r.exponent);
  const std::int64_t p = to_int64(r.g0.a()), q = to_int64(r.g0.b());
  const auto n = static_cast<std::size_t>(lat.n());
  r.matrix.assign(n * n, 0);
  // (p + q w)(a + b w) = (p a + q n0 b) + (q a + (p + t q) b) w
  for (std::size_t i = 0; i < n; i += 2) {
    r.matrix[i * n + i] = p;
    r.matrix[i * n + i + 1] = q * k.n0();
    r.matrix[(i + 1) * n + i] = q;
    r.matrix[(i + 1) * n + i + 1] = p + k.trace() * q;
  }
  return r;
}

BalancedRescale balanced_rescale(const FieldLattice& lat, const ConvexRegion& D, const Rational& T,
                                 const ConvexRegion& W, const Scale& beta) {
  const UnitRescaler a = unit_rescalers(lat);
  const double log_g0 = a.exponent * std::log(static_cast<double>(lat.field().unit().approx));
  const double dD = D.diameter() * to_double(T);
  const double dW = W.diameter() * static_cast<double>(beta.value());
  BalancedRescale r;
  r.k = (dD > 0 && dW > 0) ? static_cast<int>(std::lround(std::log(dW / dD) / (2 * log_g0))) : 0;
  r.phys = Scale(lat.field(), a.exponent * r.k, T);
  r.internal = beta * Scale(lat.field(), -a.exponent * r.k);
  r.region = ConvexRegion::product(D.scaled(r.phys), W.scaled(r.internal));
  r.diam_phys = r.region.first().diameter();
  r.diam_internal = r.region.second().diameter();
  return r;
}

std::vector<double> successive_minima(const GridDesc& grid) {
  const auto N = static_cast<std::size_t>(grid.n);
  double R = 0;
  for (std::size_t j = 0; j < N; ++j) {
    double s = 0;
    for (std::size_t i = 0; i < N; ++i) s += grid.basis[i * N + j] * grid.basis[i * N + j];
    R = std::max(R, std::sqrt(s));
  }
  GridDesc lattice = grid;
  lattice.translation.clear();
  const auto ball =
      ConvexRegion::ball(std::vector<Rational>(N, Rational(0)), rational_from_double(R * R * (1 + 1e-9)));
  auto pts = enumerate_points(lattice, ball);
  std::vector<std::pair<double, std::vector<double>>> vs;
  for (auto& p : pts) {
    double l = 0;
    for (double c : p.y) l += c * c;
    if (l > 0) vs.emplace_back(std::sqrt(l), std::move(p.y));
  }
  std::sort(vs.begin(), vs.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<std::vector<double>> ortho;
  std::vector<double> minima;
  for (const auto& [len, v] : vs) {
    std::vector<double> r = v;
    for (const auto& o : ortho) {
      double dot = 0, oo = 0;
      for (std::size_t i = 0; i < N; ++i) {
        dot += r[i] * o[i];
        oo += o[i] * o[i];
      }
      for (std::size_t i = 0; i < N; ++i) r[i] -= dot / oo * o[i];
    }
    double rl = 0;
    for (double c : r) rl += c * c;
    if (std::sqrt(rl) > 1e-9 * len) {
      ortho.push_back(std::move(r));
      minima.push_back(len);
      if (minima.size() == N) break;
    }
  }
  return minima;
}

SchmidtReport schmidt_count_check(const GridDesc& grid, const ConvexRegion& region, double c, double T0,
                                  double fitted_C) {
  if (!(T0 >= 1)) throw Error(ErrorKind::HypothesisFailed, "T0 >= 1 violated");
  if (!(c > 0)) throw Error(ErrorKind::HypothesisFailed, "c > 0 violated");
  const double diam = region.diameter();
  if (diam > T0) throw Error(ErrorKind::HypothesisFailed, "(1) diameter " + std::to_string(diam) + " > T0");
  const auto mins = successive_minima(grid);
  const std::size_t n = static_cast<std::size_t>(grid.n);
  if (mins.size() < n || mins[n - 1] > T0)
    throw Error(ErrorKind::HypothesisFailed, "(2) no n independent vectors of length <= T0");
  if (n >= 2 && mins[n - 2] > c)
    throw Error(ErrorKind::HypothesisFailed, "(2) no n-1 independent vectors of length <= c");
  SchmidtReport r;
  r.count = count_points(grid, region);
  r.expected = region.volume() / grid.covolume();
  r.error = std::fabs(static_cast<double>(r.count) - r.expected);
  r.bound_side = c * std::pow(T0, static_cast<double>(n) - 1);
  r.ratio = r.error / r.bound_side;
  r.violated = r.ratio > fitted_C;
  return r;
}

}  // namespace quasivis
