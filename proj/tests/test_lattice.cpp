#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "quasivis/errors.hpp"
#include "quasivis/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

using namespace quasivis;

namespace {

using Z = std::vector<std::int64_t>;

std::set<Z> preimages(const std::vector<LatticePoint>& pts) {
  std::set<Z> s;
  for (const auto& p : pts) s.insert(p.z);
  return s;
}

// Slow scan of a + b*omega per coordinate over a wide coefficient box, exact box test.
std::set<Z> field_box_oracle(const QuadField& k, const std::vector<Rational>& lo, const std::vector<Rational>& hi,
                             int reach) {
  std::set<Z> out;
  Z z(4);
  for (z[0] = -reach; z[0] <= reach; ++z[0])
    for (z[1] = -reach; z[1] <= reach; ++z[1])
      for (z[2] = -reach; z[2] <= reach; ++z[2])
        for (z[3] = -reach; z[3] <= reach; ++z[3]) {
          const QuadInt x1 = k.make(z[0], z[1]), x2 = k.make(z[2], z[3]);
          const QuadInt v[4] = {x1, x2, x1.conj(), x2.conj()};
          bool in = true;
          for (int i = 0; i < 4 && in; ++i) in = v[i].compare(lo[i]) >= 0 && v[i].compare(hi[i]) <= 0;
          if (in) out.insert(z);
        }
  return out;
}

}  // namespace

TEST_CASE("region: exact membership of boxes, balls and polygons") {
  QuadField k(2);
  const auto sq = ConvexRegion::cube(2);
  const QuadInt r2 = k.make(0, 1);  // sqrt 2
  CHECK(sq.contains(std::vector<QuadInt>{k.one(), -k.one()}));
  CHECK_FALSE(sq.contains(std::vector<QuadInt>{r2, k.zero()}));
  const auto disc = ConvexRegion::ball({0, 0}, 2);
  CHECK(disc.contains(std::vector<QuadInt>{k.one(), k.one()}));
  CHECK_FALSE(disc.contains(std::vector<QuadInt>{r2, k.one()}));
  const auto oct = ConvexRegion::octagon(Rational(41, 99));
  CHECK(oct.contains(std::vector<QuadInt>{k.one(), k.integer(0)}));
  CHECK_FALSE(oct.contains(std::vector<QuadInt>{k.one(), k.one()}));
  CHECK(oct.centrally_symmetric());
  CHECK(oct.polygon_vertices().size() == 8);
  // Area of |x|,|y| <= 1 minus four corner triangles of leg 1 - a.
  const double a = 41.0 / 99;
  CHECK(oct.volume() == doctest::Approx(4 - 2 * (1 - a) * (1 - a)).epsilon(1e-12));
  const auto tri = ConvexRegion::polygon({{0, 0}, {2, 0}, {0, 2}});
  CHECK(tri.volume() == doctest::Approx(2.0));
  CHECK_FALSE(tri.centrally_symmetric());
  CHECK_THROWS_AS(ConvexRegion::polygon({{0, 0}, {2, 0}, {1, 1}, {1, 3}, {0, 2}, {1, 0}}), Error);
}

TEST_CASE("region: unit scales are exact") {
  QuadField k(2);
  const auto W = ConvexRegion::cube(1).scaled(Scale(k, -1));  // [-1/lambda, 1/lambda]
  const QuadInt inv = k.lambda_power(-1);                     // sqrt2 - 1
  CHECK(W.contains(std::vector<QuadInt>{inv}));
  CHECK(W.contains(std::vector<QuadInt>{-inv}));
  CHECK_FALSE(W.contains(std::vector<QuadInt>{inv + k.lambda_power(-30)}));
  CHECK(W.classify(std::vector<double>{static_cast<double>(inv.real())}, 1e-9) == FloatMembership::Boundary);
  CHECK(W.sup_abs(0) >= Rational(41, 99));
  const Scale s = Scale(k, 2, Rational(3)) * Scale(k, -2);
  CHECK_FALSE(s.has_unit());
  CHECK(s.factor() == 3);
}

TEST_CASE("enumerate_points: small examples") {
  const auto disc = ConvexRegion::ball({0, 0}, 1);
  CHECK(enumerate_points(GridDesc::identity(2), disc).size() == 5);
  const auto empty = ConvexRegion::box({Rational(1, 3), Rational(1, 3)}, {Rational(2, 3), Rational(2, 3)});
  CHECK(enumerate_points(GridDesc::identity(2), empty).empty());

  QuadField k(2);
  FieldLattice L(k, 1);
  const auto box = ConvexRegion::box({0, -1}, {2, 1});
  std::set<Z> got = preimages(enumerate_points(L, box));
  std::set<Z> want;
  for (std::int64_t a = -20; a <= 20; ++a)
    for (std::int64_t b = -20; b <= 20; ++b) {
      const QuadInt x = k.make(a, b);
      if (x.compare(Rational(0)) >= 0 && x.compare(Rational(2)) <= 0 && x.conj().compare(Rational(-1)) >= 0 &&
          x.conj().compare(Rational(1)) <= 0)
        want.insert({a, b});
    }
  CHECK(got == want);
  CHECK(got.count({1, 0}) == 1);
  CHECK(got.count({1, 1}) == 0);  // sigma(1 + sqrt2) = 1 - sqrt2 is inside, but 1 + sqrt2 > 2
}

TEST_CASE("enumerate_points: output is in lexicographic preimage order for any thread count") {
  QuadField k(5);
  FieldLattice L(k, 2);
  const auto R = ConvexRegion::product(ConvexRegion::cube(2, 6), ConvexRegion::octagon(Rational(41, 99)));
  EnumOptions one, four;
  four.threads = 4;
  const auto a = enumerate_points(L, R, one), b = enumerate_points(L, R, four);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].z == b[i].z);
  CHECK(std::is_sorted(a.begin(), a.end(), [](const auto& x, const auto& y) { return x.z < y.z; }));
}

TEST_CASE("enumerate_points: completeness against a slow scan on random rational boxes") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> num(-40, 40);
  for (std::int64_t d : {2, 5}) {
    QuadField k(d);
    FieldLattice L(k, 2);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<Rational> lo, hi;
      for (int i = 0; i < 4; ++i) {
        Rational a(num(rng), 10), b(num(rng), 10);
        if (a > b) std::swap(a, b);
        lo.push_back(a);
        hi.push_back(b);
      }
      const auto box = ConvexRegion::box(lo, hi);
      // |a|,|b| <= 12 covers |x|,|sigma x| <= 4 for these fields.
      CHECK(preimages(enumerate_points(L, box)) == field_box_oracle(k, lo, hi, 12));
    }
  }
}

TEST_CASE("enumerate_points: counts do not depend on the float guard") {
  QuadField k(2);
  FieldLattice L(k, 2);
  const Scale inv(k, -1);
  const auto R = ConvexRegion::product(ConvexRegion::cube(2, 15), ConvexRegion::cube(2).scaled(inv));
  EnumOptions tight, loose;
  tight.guard = 1e-6;
  loose.guard = 1e-2;
  EnumStats st_t, st_l;
  const auto a = enumerate_points(L, R, tight, &st_t), b = enumerate_points(L, R, loose, &st_l);
  CHECK(preimages(a) == preimages(b));
  CHECK(st_l.exact_tests >= st_t.exact_tests);
  CHECK(st_l.exact_tests > 0);
}

TEST_CASE("enumerate_points: linear-map equivariance on the float path") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0, 1);
  const auto R = ConvexRegion::cube(3, 3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<double>> cols(3, std::vector<double>(3));
    for (auto& c : cols)
      for (auto& x : c) x = g(rng);
    const GridDesc G = GridDesc::from_columns(cols);
    if (G.covolume() < 0.2) continue;
    // g^-1 R = {u : |(g u)_i| <= 3}, a polytope whose rows are the rows of g.
    std::vector<ConvexRegion::HalfSpace> hs;
    for (int i = 0; i < 3; ++i) {
      std::vector<Rational> row;
      for (int j = 0; j < 3; ++j) row.push_back(rational_from_double(G.basis[static_cast<std::size_t>(3 * i + j)]));
      std::vector<Rational> neg;
      for (const auto& c : row) neg.push_back(-c);
      hs.push_back({row, 3, false});
      hs.push_back({neg, 3, false});
    }
    const auto pre = enumerate_points(GridDesc::identity(3), ConvexRegion::polytope(3, hs));
    const auto img = enumerate_points(G, R);
    CHECK(preimages(pre) == preimages(img));
    for (const auto& p : img) {
      double y[3];
      G.apply(p.z.data(), y);
      for (int i = 0; i < 3; ++i) CHECK(std::fabs(y[i] - p.y[static_cast<std::size_t>(i)]) <= 1e-9);
    }
  }
}

TEST_CASE("covolume") {
  CHECK(GridDesc::identity(3).covolume() == doctest::Approx(1.0));
  CHECK(GridDesc::from_columns({{2, 0}, {0, 3}}).covolume() == doctest::Approx(6.0));
  QuadField k(2);
  FieldLattice L(k, 2), Lg(k, 2, k.make(0, 1));
  CHECK(L.covolume() == doctest::Approx(8.0));
  CHECK(Lg.covolume() == doctest::Approx(4 * L.covolume()));
  CHECK(Lg.covolume_squared() == 16 * L.covolume_squared());
  CHECK(L.grid().covolume() == doctest::Approx(L.covolume()).epsilon(1e-12));
  CHECK_THROWS_AS(FieldLattice(k, 2, k.zero()), Error);
}

TEST_CASE("unit rescalers fix the lattice") {
  for (std::int64_t d : {2, 5, 13}) {
    QuadField k(d);
    FieldLattice L(k, 2);
    const auto a = unit_rescalers(L);
    CHECK(a.g0.norm() == 1);
    CHECK(a.exponent == (k.unit_norm() == 1 ? 1 : 2));
    // 2x2 block determinant is N(g0) = 1, so the 4x4 map is unimodular.
    const auto& M = a.matrix;
    CHECK(M[0] * M[5] - M[1] * M[4] == 1);
    // Applying then inverting returns the start point.
    const Z z = {3, -2, 7, 1};
    const auto w = a.apply(z.data(), 1);
    CHECK(a.apply(w.data(), -1) == z);
    const std::vector<QuadInt> img = {k.make(w[0], w[1]), k.make(w[2], w[3])};
    CHECK(img[0] == a.g0 * k.make(3, -2));
  }
  CHECK(unit_rescalers(FieldLattice(QuadField(5), 2)).g0 == QuadField(5).lambda_power(2));
}

TEST_CASE("balanced_rescale") {
  QuadField k(2);
  FieldLattice L(k, 2);
  const auto D = ConvexRegion::cube(2), W = ConvexRegion::cube(2);
  const auto same = balanced_rescale(L, D, 1, W, Scale(1));
  CHECK(same.k == 0);
  const auto r = balanced_rescale(L, D, 1000, W, Scale(1));
  const double g0 = static_cast<double>(unit_rescalers(L).g0.real());
  CHECK(std::max(r.diam_phys / r.diam_internal, r.diam_internal / r.diam_phys) <= g0);
  CHECK(r.region.volume() == doctest::Approx(1000.0 * 1000 * 4 * 4).epsilon(1e-9));
}

TEST_CASE("balanced region points are the a_0 image of the original points") {
  for (std::int64_t d : {2, 5, 13}) {
    QuadField k(d);
    FieldLattice L(k, 2);
    const auto D = ConvexRegion::cube(2), W = ConvexRegion::cube(2);
    const Rational T = 40;
    const auto r = balanced_rescale(L, D, T, W, Scale(1));
    const auto before = enumerate_points(L, ConvexRegion::product(D.scaled(T), W));
    const auto after = enumerate_points(L, r.region);
    const auto a = unit_rescalers(L);
    std::set<Z> mapped;
    for (const auto& p : before) mapped.insert(a.apply(p.z.data(), r.k));
    CHECK(preimages(after) == mapped);
    CHECK(before.size() == after.size());
  }
}

TEST_CASE("successive minima and the Schmidt check") {
  const auto mins = successive_minima(GridDesc::from_columns({{1, 0}, {5, 1}}));
  REQUIRE(mins.size() == 2);
  CHECK(mins[0] == doctest::Approx(1.0));
  CHECK(mins[1] == doctest::Approx(1.0));

  const auto sq = ConvexRegion::box({0, 0}, {Rational(21, 2), Rational(21, 2)});
  const auto rep = schmidt_count_check(GridDesc::identity(2), sq, 1, 15);
  CHECK(rep.count == 121);
  CHECK(rep.error == doctest::Approx(121 - 110.25));
  CHECK(rep.ratio <= 1);

  const auto empty = ConvexRegion::box({Rational(1, 2), Rational(1, 2)}, {Rational(1, 2), Rational(1, 2)});
  const auto e = schmidt_count_check(GridDesc::identity(2), empty, 1, 2);
  CHECK(e.count == 0);
  CHECK(e.error == 0);

  try {
    schmidt_count_check(GridDesc::identity(2), sq, 1, 5);
    FAIL("expected HypothesisFailed");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::HypothesisFailed);
    CHECK(std::string(err.what()).find("(1)") != std::string::npos);
  }
  try {
    schmidt_count_check(GridDesc::from_columns({{3, 0}, {0, 3}}), sq, 1, 20);
    FAIL("expected HypothesisFailed");
  } catch (const Error& err) {
    CHECK(std::string(err.what()).find("(2)") != std::string::npos);
  }
}

TEST_CASE("unbounded input is rejected") {
  std::vector<ConvexRegion::HalfSpace> half = {{{1, 0}, 1, false}};
  const auto R = ConvexRegion::polytope(2, half);
  CHECK_THROWS_AS(enumerate_points(GridDesc::identity(2), R), Error);
}
