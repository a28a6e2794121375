#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "quasivis/cutproject.hpp"
#include "quasivis/errors.hpp"
#include "quasivis/ideal.hpp"

#include <numeric>
#include <random>
#include <set>

using namespace quasivis;

namespace {

using Z = std::vector<std::int64_t>;

CPSetDesc square_set(std::int64_t d, const Scale& beta = Scale(1)) {
  QuadField k(d);
  return CPSetDesc::exact(FieldLattice(k, 2), ConvexRegion::cube(2), beta);
}

CPSetDesc octagon_set(std::int64_t d) {
  QuadField k(d);
  return CPSetDesc::exact(FieldLattice(k, 2), ConvexRegion::octagon(Rational(41, 99)));
}

std::set<Z> zs(const std::vector<CPPoint>& pts) {
  std::set<Z> s;
  for (const auto& p : pts) s.insert(p.z);
  return s;
}

CPPoint point_of(const CPSetDesc& desc, const Z& z) {
  for (auto& p : generate(desc, ConvexRegion::cube(2), 100)) {
    if (p.z == z) return p;
  }
  FAIL("point not generated");
  return {};
}

}  // namespace

TEST_CASE("generate: tiny T yields the origin only") {
  const auto s = square_set(2);
  const auto pts = generate(s, ConvexRegion::cube(2), Rational(1, 2));
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].z == Z{0, 0, 0, 0});
}

TEST_CASE("generate: Q(sqrt2) square window at T=5 matches a slow scan") {
  const auto s = square_set(2);
  QuadField k(2);
  std::set<Z> want;
  const int r = 8;
  for (std::int64_t a1 = -r; a1 <= r; ++a1)
    for (std::int64_t b1 = -r; b1 <= r; ++b1)
      for (std::int64_t a2 = -r; a2 <= r; ++a2)
        for (std::int64_t b2 = -r; b2 <= r; ++b2) {
          const QuadInt x1 = k.make(a1, b1), x2 = k.make(a2, b2);
          auto in = [](const QuadInt& v, int lim) { return v.compare(Rational(-lim)) >= 0 && v.compare(Rational(lim)) <= 0; };
          if (in(x1, 5) && in(x2, 5) && in(x1.conj(), 1) && in(x2.conj(), 1)) want.insert({a1, b1, a2, b2});
        }
  const auto pts = generate(s, ConvexRegion::cube(2), 5);
  CHECK(zs(pts) == want);
  for (const auto& p : pts) {
    CHECK(p.quad.size() == 2);
    CHECK(std::fabs(static_cast<double>(p.quad[0].conj_real()) - p.internal[0]) < 1e-9);
  }
}

TEST_CASE("generate: empirical density approaches vol(W)/covol(L)") {
  for (std::int64_t d : {2, 5}) {
    const auto s = square_set(d);
    const auto pts = generate(s, ConvexRegion::cube(2), 80);
    const double dens = static_cast<double>(pts.size()) / (160.0 * 160.0);
    CHECK(dens == doctest::Approx(s.density()).epsilon(0.02));
  }
}

TEST_CASE("visible_fast: examples") {
  const auto s = square_set(2);
  // x = (2 + sqrt2, 2 + sqrt2) = sqrt2 * lambda * (1, 1): gcd ideal has norm 2.
  const CPPoint r2 = point_of(s, {2, 1, 2, 1});
  CHECK_FALSE(visible_fast(s, r2));
  // x = (1, 0): gcd 1, sigma(x) = (1, 0) lies outside (1/lambda) W.
  CHECK(visible_fast(s, point_of(s, {1, 0, 0, 0})));
  // x = (lambda, 0) has sigma(x) = (1 - sqrt2, 0) on the boundary of (1/lambda) W: hidden by (1, 0).
  CHECK_FALSE(visible_fast(s, point_of(s, {1, 1, 0, 0})));
  CHECK_THROWS_AS(visible_fast(square_set(3), point_of(square_set(3), {1, 0, 0, 0})), Error);
}

TEST_CASE("visible_oracle: unit multiples and the shortest point on a ray") {
  const auto s = square_set(2);
  const auto D = ConvexRegion::cube(2);
  const auto pts = generate(s, D, 10);
  // x = lambda * (1, 1) has lambda^-1 x = (1, 1) present.
  const CPPoint x = point_of(s, {1, 1, 1, 1});
  CHECK_FALSE(visible_oracle(s, x, pts, D, 10));
  CHECK(visible_oracle(s, point_of(s, {1, 0, 1, 0}), pts, D, 10));
  CHECK_THROWS_AS(visible_oracle(s, point_of(s, {7, 5, 0, 0}), pts, D, 10), Error);
  CHECK_THROWS_AS(visible_oracle(s, x, pts, ConvexRegion::box({1, 1}, {2, 2}), 10), Error);
}

TEST_CASE("visible_fast agrees with the oracle on every point") {
  for (const auto& s : {square_set(2), square_set(5), octagon_set(2), octagon_set(5)}) {
    const auto D = ConvexRegion::cube(2);
    const Rational T = 20;
    const auto pts = generate(s, D, T);
    const auto oracle = visible_oracle_all(s, pts, D, T);
    std::size_t mismatches = 0, visible = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const bool fast = visible_fast(s, pts[i]);
      mismatches += fast != oracle[i];
      visible += fast;
    }
    CHECK(mismatches == 0);
    CHECK(visible > 0);
    // Single-point oracle agrees with the bulk one on a sample.
    for (std::size_t i = 0; i < pts.size(); i += 97) CHECK(visible_oracle(s, pts[i], pts, D, T) == oracle[i]);
  }
}

TEST_CASE("visible points of the set come from visible lattice points") {
  for (std::int64_t d : {2, 5}) {
    const auto s = square_set(d);
    const auto D = ConvexRegion::cube(2);
    const auto pts = generate(s, D, 20);
    const auto vis = visible_oracle_all(s, pts, D, 20);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (!vis[i]) continue;
      std::int64_t g = 0;
      for (auto v : pts[i].z) g = std::gcd(g, v);
      CHECK(g == 1);
    }
  }
}

TEST_CASE("visibility is invariant under the unit rescaling") {
  QuadField k(2);
  const auto s = square_set(2);
  const auto a = unit_rescalers(*s.field_lattice);
  // a_{g0} maps Lambda(W) onto Lambda(g0^-1 W) and scales physical space by g0.
  const auto t = CPSetDesc::exact(FieldLattice(k, 2), ConvexRegion::cube(2), Scale(k, -a.exponent));
  const auto D = ConvexRegion::cube(2);
  const auto pts = generate(s, D, 10);
  const auto img = generate(t, D, Rational(10) * 6);  // g0 = 3 + 2 sqrt2 < 6
  std::map<Z, bool> vis_img;
  for (const auto& p : img) vis_img[p.z] = visible_fast(t, p);
  for (const auto& p : pts) {
    const auto w = a.apply(p.z.data());
    REQUIRE(vis_img.count(w) == 1);
    CHECK(vis_img[w] == visible_fast(s, p));
  }
}

TEST_CASE("beta = 1/lambda selects the points with internal part in W/lambda") {
  QuadField k(5);
  const auto s1 = square_set(5), sb = square_set(5, Scale(k, -1));
  const auto D = ConvexRegion::cube(2);
  const auto all = generate(s1, D, 15), small = generate(sb, D, 15);
  const auto inner = ConvexRegion::cube(2).scaled(Scale(k, -1));
  std::set<Z> want;
  for (const auto& p : all) {
    std::vector<QuadInt> sig;
    for (const auto& q : p.quad) sig.push_back(q.conj());
    if (inner.contains(sig)) want.insert(p.z);
  }
  CHECK(zs(small) == want);
}

TEST_CASE("primitive points") {
  const auto s = square_set(2);
  const auto prim = zs(primitive_points(s, ConvexRegion::cube(2), 10));
  CHECK(prim.count({1, 0, 0, 0}) == 1);
  CHECK(prim.count({0, 0, 1, 0}) == 1);
  CHECK(prim.count({2, 1, 2, 1}) == 0);  // sqrt2 * lambda divides both coordinates
  CHECK(prim.count({0, 0, 0, 0}) == 0);
  for (const auto& z : prim) CHECK(gcd_is_one({QuadField(2).make(z[0], z[1]), QuadField(2).make(z[2], z[3])}));
}

TEST_CASE("sublattice L_g") {
  QuadField k(2);
  const auto s = square_set(2);
  const auto Lg = sublattice_Lg(s, k.make(0, 1));
  CHECK(Lg.covolume() == doctest::Approx(4 * s.covolume()));
  CHECK_THROWS_AS(sublattice_Lg(s, k.zero()), Error);
  // A unit g gives the same lattice: same points in a region.
  const auto Lu = sublattice_Lg(s, k.lambda_power(3));
  const auto R = ConvexRegion::product(ConvexRegion::cube(2, 12), ConvexRegion::cube(2));
  std::set<std::vector<QuadInt>> a, b;
  for (const auto& p : enumerate_points(*s.field_lattice, R)) a.insert(p.exact);
  for (const auto& p : enumerate_points(Lu, R)) b.insert(p.exact);
  CHECK(a == b);
  // L_g is inside L: every point has an integral preimage in L.
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> c(-50, 50);
  const QuadInt g = k.make(3, 1);
  const auto L3 = sublattice_Lg(s, g);
  for (int i = 0; i < 200; ++i) {
    const Z z = {c(rng), c(rng), c(rng), c(rng)};
    const auto x = L3.coords(z.data());
    CHECK(s.field_lattice->preimage(x).has_value());
    CHECK(L3.preimage(x) == std::optional<Z>(z));
  }
  CHECK_FALSE(L3.preimage({k.one(), k.zero()}).has_value());
}

TEST_CASE("strict inclusion: Q(sqrt2) has witnesses, tiny T has none") {
  const auto s = square_set(2);
  const auto D = ConvexRegion::cube(2);
  const auto w = zs(strict_inclusion_witness(s, D, 5));
  CHECK(w.count({2, 1, 0, 0}) == 1);  // 2 + sqrt2 is hidden by 1 + sqrt2
  CHECK(strict_inclusion_witness(s, D, 1).empty());
}

TEST_CASE("strict inclusion: generic random lattices have no witnesses") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g(0, 1);
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<std::vector<double>> cols(3, std::vector<double>(3));
    for (auto& c : cols)
      for (auto& x : c) x = g(rng);
    GridDesc G = GridDesc::from_columns(cols, 2);
    const auto s = CPSetDesc::floating(G, ConvexRegion::cube(1));
    CHECK(strict_inclusion_witness(s, ConvexRegion::cube(2), 8).empty());
  }
}
