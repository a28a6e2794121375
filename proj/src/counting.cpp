#include "quasivis/counting.hpp"
#include "quasivis/errors.hpp"
#include "quasivis/ideal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>
#include <tuple>

namespace quasivis {

const char* to_string(CountMethod m) {
  switch (m) {
    case CountMethod::Direct:
      return "direct";
    case CountMethod::Moebius:
      return "moebius";
    case CountMethod::Both:
      return "both";
  }
  return "?";
}

CountMethod parse_count_method(const std::string& s) {
  if (s == "direct") return CountMethod::Direct;
  if (s == "moebius") return CountMethod::Moebius;
  if (s == "both") return CountMethod::Both;
  throw Error(ErrorKind::InvalidArgument, "unknown method '" + s + "'");
}

const ZetaResult& cached_dedekind_zeta(const QuadField& field, int s, double tol) {
  static std::mutex mu;
  static std::map<std::tuple<std::int64_t, int, double>, ZetaResult> cache;
  std::lock_guard<std::mutex> lock(mu);
  const auto key = std::make_tuple(field.d(), s, tol);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, dedekind_zeta(field, s, tol)).first;
  return it->second;
}

double hammarhjelm_factor(const QuadField& field, int d) {
  return static_cast<double>(1 - std::pow(field.lambda().real(), -static_cast<long double>(d)));
}

double predicted_density_hammarhjelm(const CPSetDesc& desc) {
  if (!is_hammarhjelm_example(desc))
    throw Error(ErrorKind::NotHammarhjelm, "prediction needs an exact Hammarhjelm example");
  const QuadField& k = desc.field_lattice->field();
  const int d = desc.d();
  return hammarhjelm_factor(k, d) * desc.density() / cached_dedekind_zeta(k, d).value;
}

namespace {

bool all_zero(const std::int64_t* z, int n) {
  return std::all_of(z, z + n, [](std::int64_t v) { return v == 0; });
}

ConvexRegion count_region(const CPSetDesc& desc, const ConvexRegion& D, const Rational& T) {
  if (D.dim() != desc.d()) throw Error(ErrorKind::InvalidArgument, "D dimension must equal d");
  return ConvexRegion::product(D.scaled(T), desc.effective_window());
}

void require_exact_hammarhjelm(const CPSetDesc& desc, const char* what) {
  if (!is_hammarhjelm_example(desc))
    throw Error(ErrorKind::NotHammarhjelm, std::string(what) + " needs an exact Hammarhjelm example");
}

}  // namespace

MoebiusResult moebius_count(const CPSetDesc& desc, const ConvexRegion& D, const Rational& T,
                            const EnumOptions& opts) {
  require_exact_hammarhjelm(desc, "moebius_count_primitive");
  const FieldLattice& L = *desc.field_lattice;
  const QuadField& k = L.field();
  const auto region = count_region(desc, D, T);
  const auto TD = D.scaled(T);
  const auto W = desc.effective_window();

  // A nonzero point g y has some y_i != 0, and |N(g)| <= |N(g y_i)| = |x_i sigma(x_i)|.
  Rational bound = 0;
  for (int i = 0; i < desc.d(); ++i) bound = std::max(bound, Rational(TD.sup_abs(i) * W.sup_abs(i)));
  MoebiusResult res;
  res.cutoff = static_cast<std::int64_t>(BigInt(numerator(bound) / denominator(bound)));
  std::ostringstream why;
  why << "|N(g)| <= max_i sup|x_i| * sup|sigma(x_i)| = " << to_string(bound)
      << " for any g dividing a nonzero point of T D x beta W";
  res.justification = why.str();

  RingBox box{RingBound::closed(Rational(1)), RingBound::open_at(k.lambda()),
              RingBound::closed(Rational(-res.cutoff)), RingBound::closed(Rational(res.cutoff))};
  for (const auto& g : enumerate_ring_box(k, box)) {
    const BigInt nrm = abs(g.norm());
    if (nrm > res.cutoff) continue;
    ++res.terms;
    const int mu = moebius(k, IdealHNF::principal(g));
    if (mu == 0) continue;
    const auto c = static_cast<std::int64_t>(count_points(FieldLattice(k, desc.d(), g), region, opts)) -
                   (region.contains_origin() ? 1 : 0);
    if (c != 0) ++res.nonzero_terms;
    res.count += mu * c;
  }
  return res;
}

std::int64_t moebius_count_primitive(const CPSetDesc& desc, const ConvexRegion& D, const Rational& T,
                                     const EnumOptions& opts) {
  return moebius_count(desc, D, T, opts).count;
}

std::uint64_t direct_count_primitive(const CPSetDesc& desc, const ConvexRegion& D, const Rational& T,
                                     const EnumOptions& opts) {
  if (!desc.is_exact()) throw Error(ErrorKind::InvalidArgument, "primitive counts need the exact path");
  const int n = desc.n();
  std::uint64_t count = 0;
  for_each_point(
      *desc.field_lattice, count_region(desc, D, T),
      [&](const std::int64_t* z, const double*) {
        if (!all_zero(z, n) && is_primitive(desc, z)) ++count;
      },
      opts);
  return count;
}

CPSetDesc inner_window_set(const CPSetDesc& desc) {
  if (!desc.is_exact()) throw Error(ErrorKind::InvalidArgument, "the inner window needs a field lattice");
  CPSetDesc s = desc;
  s.beta = desc.beta * Scale(desc.field_lattice->field(), -1);
  return s;
}

CountReport visible_count(const CPSetDesc& desc, const ConvexRegion& D, const Rational& T, CountMethod method,
                          const EnumOptions& opts) {
  const VisibilityTester visible(desc);
  CountReport r;
  r.T = static_cast<double>(T);
  r.method = method;

  // One pass over the set: all points, primitive points and visible points.
  const int n = desc.n(), d = desc.d();
  std::uint64_t pr_direct = 0;
  for_each_point(
      *desc.field_lattice, count_region(desc, D, T),
      [&](const std::int64_t* z, const double* y) {
        if (all_zero(z, n)) return;
        ++r.count_all;
        if (is_primitive(desc, z)) ++pr_direct;
        if (visible(z, y + d)) ++r.count_vis;
      },
      opts);

  const CPSetDesc inner = inner_window_set(desc);
  if (method == CountMethod::Moebius) {
    r.count_pr = static_cast<std::uint64_t>(moebius_count_primitive(desc, D, T, opts));
    r.count_pr_inner = static_cast<std::uint64_t>(moebius_count_primitive(inner, D, T, opts));
  } else {
    r.count_pr = pr_direct;
    r.count_pr_inner = direct_count_primitive(inner, D, T, opts);
  }
  if (method == CountMethod::Both) {
    r.methods_agree = moebius_count_primitive(desc, D, T, opts) == static_cast<std::int64_t>(r.count_pr) &&
                      moebius_count_primitive(inner, D, T, opts) == static_cast<std::int64_t>(r.count_pr_inner);
  } else if (method == CountMethod::Moebius) {
    r.methods_agree = r.count_pr == pr_direct;
  }
  r.identity_holds = r.count_pr >= r.count_pr_inner && r.count_vis == r.count_pr - r.count_pr_inner;

  r.vol_TD = D.scaled(T).volume();
  r.M_T = desc.density() * r.vol_TD;
  r.predicted = predicted_density_hammarhjelm(desc);
  r.rel_error = std::fabs(static_cast<double>(r.count_vis) / r.vol_TD - r.predicted) / r.predicted;
  return r;
}

RateFit rate_fit(const std::vector<CountReport>& reports, bool jitter_guard) {
  if (reports.size() < 6) throw Error(ErrorKind::InvalidArgument, "rate_fit needs at least 6 reports");
  for (std::size_t i = 1; i < reports.size(); ++i) {
    if (!(reports[i].T > reports[i - 1].T)) throw Error(ErrorKind::InvalidArgument, "T must increase");
  }
  RateFit fit;
  std::vector<double> lt;
  for (const auto& r : reports) {
    if (!(r.vol_TD > 0) || !(r.predicted > 0) || !(r.T > 0))
      throw Error(ErrorKind::DegenerateFit, "volumes, T and predictions must be positive");
    double e = r.rel_error;
    if (e == 0) {
      if (!jitter_guard) throw Error(ErrorKind::DegenerateFit, "zero error at T = " + std::to_string(r.T));
      e = 0.5 / r.vol_TD / r.predicted;
      ++fit.jittered;
    }
    fit.points.emplace_back(std::log(r.vol_TD), std::log(e));
    lt.push_back(std::log(r.T));
  }
  auto lsq = [](const std::vector<double>& x, const std::vector<std::pair<double, double>>& pts, double& slope,
                double& intercept) {
    const double k = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      mx += x[i];
      my += pts[i].second;
    }
    mx /= k;
    my /= k;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sxx += (x[i] - mx) * (x[i] - mx);
      sxy += (x[i] - mx) * (pts[i].second - my);
    }
    if (!(sxx > 0)) throw Error(ErrorKind::DegenerateFit, "all volumes coincide");
    slope = sxy / sxx;
    intercept = my - slope * mx;
  };
  std::vector<double> lv;
  for (const auto& p : fit.points) lv.push_back(p.first);
  lsq(lv, fit.points, fit.slope, fit.intercept);
  double unused = 0;
  lsq(lt, fit.points, fit.slope_T, unused);
  double ss = 0;
  for (const auto& [x, y] : fit.points) ss += std::pow(y - fit.intercept - fit.slope * x, 2);
  fit.residual = std::sqrt(ss / static_cast<double>(fit.points.size()));
  if (!std::isfinite(fit.slope)) throw Error(ErrorKind::DegenerateFit, "slope is not finite");
  return fit;
}

GridDesc random_unimodular_grid(int n, int d, std::uint64_t seed) {
  if (n < 2 || d < 1 || d >= n) throw Error(ErrorKind::InvalidArgument, "need 0 < d < n");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0, 1);
  GridDesc g = GridDesc::identity(n);
  g.d = d;
  for (;;) {
    for (auto& v : g.basis) v = normal(rng);
    const double det = g.covolume();
    if (det > 1e-6) {
      const double s = std::pow(det, -1.0 / n);
      for (auto& v : g.basis) v *= s;
      return g;
    }
  }
}

RandomLatticeSummary random_lattice_experiment(const RandomLatticeParams& p) {
  if (p.n < 3) throw Error(ErrorKind::InvalidArgument, "random lattice experiment needs n >= 3");
  if (p.window.dim() != p.n - p.d || p.omega.dim() != p.d)
    throw Error(ErrorKind::InvalidArgument, "window and Omega dimensions must be n - d and d");
  if (p.samples < 1 || p.T.empty()) throw Error(ErrorKind::InvalidArgument, "need samples and a T list");

  RandomLatticeSummary out;
  out.n = p.n;
  out.d = p.d;
  out.samples = p.samples;
  out.seed = p.seed;
  const auto z = riemann_zeta(p.n, 1e-12);
  out.zeta_n = z.value;
  out.zeta_bound = z.bound;
  out.target = 1 / z.value;

  const std::size_t nt = p.T.size(), ns = static_cast<std::size_t>(p.samples);
  std::vector<std::uint64_t> counts(ns * nt), ambiguous(ns * nt);
  const double vol_w = p.window.volume();

  auto run_sample = [&](std::size_t s) {
    std::seed_seq seq{static_cast<std::uint32_t>(p.seed), static_cast<std::uint32_t>(p.seed >> 32),
                      static_cast<std::uint32_t>(s)};
    std::array<std::uint32_t, 2> words{};
    seq.generate(words.begin(), words.end());
    const std::uint64_t sub = (static_cast<std::uint64_t>(words[1]) << 32) | words[0];
    const GridDesc g = random_unimodular_grid(p.n, p.d, sub);
    EnumOptions opts;
    opts.tol = p.tol;
    for (std::size_t t = 0; t < nt; ++t) {
      EnumStats stats;
      std::uint64_t c = 0;
      const int n = p.n;
      for_each_point(
          g, ConvexRegion::product(p.omega.scaled(p.T[t]), p.window),
          [&](const std::int64_t* u, const double*) {
            std::int64_t h = 0;
            for (int i = 0; i < n; ++i) h = std::gcd(h, u[i]);
            if (h == 1) ++c;
          },
          opts, &stats);
      counts[s * nt + t] = c;
      ambiguous[s * nt + t] = stats.boundary_ambiguous;
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(p.threads, 1)), 1, ns);
  if (workers == 1) {
    for (std::size_t s = 0; s < ns; ++s) run_sample(s);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t s = w; s < ns; s += workers) run_sample(s);
      });
    for (auto& th : pool) th.join();
  }

  for (std::size_t t = 0; t < nt; ++t) {
    RandomLatticeRow row;
    row.T = static_cast<double>(p.T[t]);
    row.vol_omega = p.omega.scaled(p.T[t]).volume();
    const double norm = vol_w * row.vol_omega;
    double sum = 0, sum_abs = 0;
    for (std::size_t s = 0; s < ns; ++s) {
      const double dens = static_cast<double>(counts[s * nt + t]) / norm;
      sum += dens;
      sum_abs += std::fabs(dens - out.target) / out.target;
      row.count += counts[s * nt + t];
      row.boundary_ambiguous += ambiguous[s * nt + t];
    }
    row.mean = sum / static_cast<double>(ns);
    double var = 0;
    for (std::size_t s = 0; s < ns; ++s) var += std::pow(static_cast<double>(counts[s * nt + t]) / norm - row.mean, 2);
    row.stdev = ns > 1 ? std::sqrt(var / static_cast<double>(ns - 1)) : 0;
    row.rel_dev = std::fabs(row.mean - out.target) / out.target;
    row.mean_abs_error = sum_abs / static_cast<double>(ns);
    out.total_count += row.count;
    out.total_ambiguous += row.boundary_ambiguous;
    out.rows.push_back(row);
  }
  out.monotone_error = true;
  for (std::size_t t = 1; t < nt; ++t) {
    if (out.rows[t].mean_abs_error > out.rows[t - 1].mean_abs_error) out.monotone_error = false;
  }
  return out;
}

}  // namespace quasivis
