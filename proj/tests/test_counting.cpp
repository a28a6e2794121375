#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "quasivis/counting.hpp"
#include "quasivis/errors.hpp"

#include <cmath>
#include <numbers>

using namespace quasivis;

namespace {

CPSetDesc square_set(std::int64_t d, const Scale& beta = Scale(1)) {
  return CPSetDesc::exact(FieldLattice(QuadField(d), 2), ConvexRegion::cube(2), beta);
}

CPSetDesc octagon_set(std::int64_t d) {
  return CPSetDesc::exact(FieldLattice(QuadField(d), 2), ConvexRegion::octagon(Rational(41, 99)));
}

// zeta(2) * L(2, chi) with chi the character mod 8 or mod 5, summed directly.
double zeta_k2_oracle(std::int64_t d) {
  auto chi = [d](std::int64_t n) {
    const std::int64_t r = d == 2 ? n % 8 : n % 5;
    if (d == 2) return (r == 1 || r == 7) ? 1 : (r == 3 || r == 5) ? -1 : 0;
    return (r == 1 || r == 4) ? 1 : (r == 2 || r == 3) ? -1 : 0;
  };
  long double l = 0;
  for (std::int64_t n = 20'000'000; n >= 1; --n) l += chi(n) / (static_cast<long double>(n) * n);
  return static_cast<double>(l * std::numbers::pi_v<long double> * std::numbers::pi_v<long double> / 6);
}

CountReport synthetic(double T, double vol, double err) {
  CountReport r;
  r.T = T;
  r.vol_TD = vol;
  r.predicted = 0.5;
  r.rel_error = err;
  return r;
}

}  // namespace

TEST_CASE("Hammarhjelm factor 1 - lambda^-2") {
  CHECK(hammarhjelm_factor(QuadField(2), 2) == doctest::Approx(2 * std::sqrt(2.0) - 2).epsilon(1e-14));
  CHECK(hammarhjelm_factor(QuadField(5), 2) == doctest::Approx(1 - (3 - std::sqrt(5.0)) / 2).epsilon(1e-14));
}

TEST_CASE("predicted density for the square window") {
  for (std::int64_t d : {2, 5}) {
    const auto s = square_set(d);
    const double disc = d == 2 ? 8 : 5;
    const double theta = 4 / disc;  // vol(W) / covol, covol = sqrt(disc)^2
    const double zk = zeta_k2_oracle(d);
    CHECK(cached_dedekind_zeta(QuadField(d), 2).value == doctest::Approx(zk).epsilon(1e-9));
    CHECK(predicted_density_hammarhjelm(s) ==
          doctest::Approx(hammarhjelm_factor(QuadField(d), 2) * theta / zk).epsilon(1e-9));
  }
  CHECK_THROWS_AS(predicted_density_hammarhjelm(square_set(3)), Error);
}

TEST_CASE("Moebius count equals the direct primitive count") {
  for (std::int64_t d : {2, 5}) {
    const QuadField k(d);
    for (const auto& s : {square_set(d), square_set(d, Scale(k, -1)), octagon_set(d)}) {
      for (int T : {5, 10, 20, 50}) {
        const auto m = moebius_count(s, ConvexRegion::cube(2), T);
        CHECK(m.count == static_cast<std::int64_t>(direct_count_primitive(s, ConvexRegion::cube(2), T)));
        CHECK(m.count == static_cast<std::int64_t>(primitive_points(s, ConvexRegion::cube(2), T).size()));
        CHECK(m.terms >= m.nonzero_terms);
      }
    }
  }
}

TEST_CASE("Moebius count: small T and errors") {
  const auto s = square_set(2);
  const auto D = ConvexRegion::cube(2);
  CHECK(moebius_count_primitive(s, D, Rational(1, 2)) == 0);
  // Cutoff 1: only g = 1, so every nonzero point counts.
  const auto m = moebius_count(s, D, 1);
  CHECK(m.cutoff == 1);
  CHECK(m.terms == 1);
  CHECK(m.count == static_cast<std::int64_t>(generate(s, D, 1).size()) - 1);
  CHECK_FALSE(m.justification.empty());
  CHECK_THROWS_AS(moebius_count_primitive(square_set(3), D, 5), Error);
}

TEST_CASE("visible_count: identity, oracle and monotonicity") {
  const auto D = ConvexRegion::cube(2);
  for (const auto& s : {square_set(2), square_set(5), octagon_set(2)}) {
    std::uint64_t prev = 0;
    for (int T : {1, 3, 7, 15, 30, 60}) {
      const auto r = visible_count(s, D, T, CountMethod::Both);
      CHECK(r.identity_holds);
      CHECK(r.methods_agree);
      CHECK(r.count_vis <= r.count_pr);
      CHECK(r.count_pr <= r.count_all);
      CHECK(r.count_vis >= prev);
      prev = r.count_vis;
      CHECK(r.vol_TD == doctest::Approx(4.0 * T * T));
      CHECK(r.M_T == doctest::Approx(s.density() * r.vol_TD));
      if (r.count_vis > 0) {
        const double dens = static_cast<double>(r.count_vis) / r.vol_TD;
        CHECK(dens <= static_cast<double>(r.count_all) / r.vol_TD);
      }
    }
    // Independent check of the visible count by the brute-force oracle.
    const auto pts = generate(s, D, 20);
    const auto vis = visible_oracle_all(s, pts, D, 20);
    CHECK(visible_count(s, D, 20).count_vis == static_cast<std::uint64_t>(std::count(vis.begin(), vis.end(), true)));
  }
}

TEST_CASE("visible_count: tiny T and guard independence") {
  const auto s = square_set(2);
  const auto D = ConvexRegion::cube(2);
  const auto r0 = visible_count(s, D, Rational(1, 3));
  CHECK(r0.count_all == 0);
  CHECK(r0.count_vis == 0);
  CHECK(r0.count_pr == 0);
  EnumOptions a, b;
  a.guard = 1e-3;
  b.guard = 1e-9;
  const auto ra = visible_count(s, D, 40, CountMethod::Direct, a);
  const auto rb = visible_count(s, D, 40, CountMethod::Direct, b);
  CHECK(ra.count_vis == rb.count_vis);
  CHECK(ra.count_pr == rb.count_pr);
  CHECK(ra.count_pr_inner == rb.count_pr_inner);
  CHECK(ra.count_all == rb.count_all);
}

TEST_CASE("visible_count: relative error at T = 500") {
  const auto r = visible_count(square_set(2), ConvexRegion::cube(2), 500);
  CHECK(r.identity_holds);
  CHECK(r.rel_error < 0.05);
}

TEST_CASE("rate_fit on synthetic errors") {
  std::vector<CountReport> half, flat;
  for (int i = 0; i < 8; ++i) {
    const double T = 10.0 * (i + 1), vol = 4 * T * T;
    half.push_back(synthetic(T, vol, 3 / std::sqrt(vol)));
    flat.push_back(synthetic(T, vol, 0.02));
  }
  const auto f = rate_fit(half);
  CHECK(f.slope == doctest::Approx(-0.5).epsilon(1e-9));
  CHECK(f.slope_T == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(f.residual < 1e-9);
  CHECK(std::fabs(rate_fit(flat).slope) < 1e-9);
  CHECK(f.points.size() == 8);

  auto zero = half;
  zero[3].rel_error = 0;
  CHECK_THROWS_AS(rate_fit(zero, false), Error);
  CHECK(rate_fit(zero).jittered == 1);
  CHECK_THROWS_AS(rate_fit({half.begin(), half.begin() + 5}), Error);
  auto unordered = half;
  std::swap(unordered[0], unordered[1]);
  CHECK_THROWS_AS(rate_fit(unordered), Error);
}

TEST_CASE("random unimodular grids") {
  const auto g = random_unimodular_grid(3, 2, 5);
  CHECK(g.covolume() == doctest::Approx(1).epsilon(1e-12));
  CHECK(g.basis == random_unimodular_grid(3, 2, 5).basis);
  CHECK(g.basis != random_unimodular_grid(3, 2, 6).basis);
  CHECK_THROWS_AS(random_unimodular_grid(3, 3, 1), Error);
}

TEST_CASE("random lattice experiment") {
  RandomLatticeParams p;
  p.window = ConvexRegion::box({Rational(-1, 2)}, {Rational(1, 2)});
  p.omega = ConvexRegion::ball({0, 0}, 1);
  p.T = {10, 20, 40};
  p.samples = 6;
  p.seed = 42;
  const auto a = random_lattice_experiment(p);
  REQUIRE(a.rows.size() == 3);
  CHECK(a.target == doctest::Approx(1 / 1.2020569031595942).epsilon(1e-12));
  for (const auto& r : a.rows) {
    CHECK(r.vol_omega == doctest::Approx(std::numbers::pi * r.T * r.T).epsilon(1e-9));
    CHECK(r.rel_dev < 0.1);
  }
  CHECK(a.rows[2].count > a.rows[0].count);
  CHECK(a.rows[0].stdev > 0);  // samples use different lattices

  // Seeded determinism, also across thread counts.
  auto q = p;
  q.threads = 3;
  const auto b = random_lattice_experiment(q);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].count == b.rows[i].count);
    CHECK(a.rows[i].mean == b.rows[i].mean);
    CHECK(a.rows[i].stdev == b.rows[i].stdev);
  }

  // Omega scaled by 2 with T halved: the same regions and the same estimate.
  auto s = p;
  s.omega = ConvexRegion::ball({0, 0}, 4);
  s.T = {5, 10, 20};
  const auto c = random_lattice_experiment(s);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].count == c.rows[i].count);
    CHECK(a.rows[i].mean == doctest::Approx(c.rows[i].mean).epsilon(1e-12));
  }

  auto bad = p;
  bad.n = 2;
  bad.d = 1;
  CHECK_THROWS_AS(random_lattice_experiment(bad), Error);
}
