#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "quasivis/errors.hpp"
#include "quasivis/holes.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <set>

using namespace quasivis;

namespace {

std::vector<BigInt> random_translate(const CRTHole& h, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> k(-1000, 1000);
  std::vector<BigInt> ks;
  for (int j = 0; j < h.n; ++j) ks.emplace_back(k(rng));
  return hole_translate(h, ks);
}

// Integer points of Z^2 in [0, m]^2 with gcd 1.
std::vector<std::vector<double>> visible_z2(int m) {
  std::vector<std::vector<double>> out;
  for (int a = 0; a <= m; ++a)
    for (int b = 0; b <= m; ++b)
      if (std::gcd(a, b) == 1) out.push_back({double(a), double(b)});
  return out;
}

}  // namespace

TEST_CASE("first primes") {
  CHECK(first_primes(9) == std::vector<std::int64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23});
  CHECK(first_primes(27).back() == 103);
  CHECK(first_primes(200).back() == 1223);
}

TEST_CASE("CRT hole n=2, A=0") {
  const auto h = build_crt_hole(2, 0);
  CHECK(h.primes == std::vector<std::int64_t>{2});
  CHECK(h.N == 2);
  CHECK(h.x0 == std::vector<BigInt>{0, 0});
  CHECK(verify_hole(h, {4, -6}));
  CHECK(divisor_witness_holds(h, {4, -6}));
  CHECK_THROWS_AS(verify_hole(h, {3, 0}), Error);
}

TEST_CASE("CRT hole n=2, A=1") {
  const auto h = build_crt_hole(2, 1);
  CHECK(h.primes == std::vector<std::int64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23});
  CHECK(h.N == 223092870);
  CHECK(h.tuples.front() == std::vector<int>{-1, -1});
  CHECK(h.tuples.back() == std::vector<int>{1, 1});
  CHECK(h.prime_for({0, 0}) == 11);
  for (std::size_t k = 0; k < h.tuples.size(); ++k)
    for (int j = 0; j < 2; ++j) CHECK(mod_floor(h.x0[j] + h.tuples[k][j], BigInt(h.primes[k])) == 0);
  for (const auto& c : h.x0) CHECK((c >= 0 && c < h.N));
  // Direct gcd over the 9 box points.
  for (int i = -1; i <= 1; ++i)
    for (int j = -1; j <= 1; ++j) CHECK(gcd(h.x0[0] + i, h.x0[1] + j) > 1);
  CHECK(verify_hole(h, h.x0));
  CHECK(verify_hole(h, hole_translate(h, {1, 0})));
  auto bad = h.x0;
  bad[0] += 1;
  CHECK_THROWS_AS(verify_hole(h, bad), Error);
  CHECK_THROWS_AS(divisor_witness_holds(h, bad), Error);
}

TEST_CASE("CRT holes: random translates and divisor witnesses") {
  std::mt19937_64 rng(8);
  for (auto [n, A] : {std::pair{2, 0}, std::pair{2, 1}, std::pair{3, 1}, std::pair{3, 0}, std::pair{4, 0}}) {
    const auto h = build_crt_hole(n, A);
    CHECK(std::set<std::int64_t>(h.primes.begin(), h.primes.end()).size() == h.primes.size());
    BigInt prod = 1;
    for (auto p : h.primes) prod *= p;
    CHECK(prod == h.N);
    CHECK(verify_hole(h, h.x0));
    CHECK(divisor_witness_holds(h, h.x0));
    for (int t = 0; t < 5; ++t) {
      const auto x = random_translate(h, rng);
      CHECK(verify_hole(h, x));
      CHECK(divisor_witness_holds(h, x));
    }
  }
  CHECK(build_crt_hole(3, 1).N > BigInt(1) << 64);
  CHECK_THROWS_AS(build_crt_hole(1, 1), Error);
}

TEST_CASE("hole_near_subspace") {
  const auto h0 = build_crt_hole(2, 0);
  // x0 = 0 lies on the axis.
  const auto axis = hole_near_subspace(h0, {{1, 0}}, 1, 10);
  REQUIRE(axis.has_value());
  CHECK(axis->tried == 1);
  CHECK(axis->distance == 0);

  CHECK_FALSE(hole_near_subspace(build_crt_hole(2, 1), {{1, std::sqrt(2.0)}}, 2, 0).has_value());

  // Irrational line through the A = 1 hole residue class.
  const auto h = build_crt_hole(2, 1);
  const std::vector<std::vector<double>> V{{1, std::sqrt(2.0)}};
  const auto hit = hole_near_subspace(h, V, 2, 400'000'000);
  REQUIRE(hit.has_value());
  CHECK(hit->distance <= 2);
  CHECK(distance_to_subspace(hit->x, V) == doctest::Approx(hit->distance));
  CHECK(verify_hole(h, hit->x));
  // Distance check by hand: |s x_1 - x_2| / sqrt(1 + s^2), s the double nearest sqrt2.
  const long double r2 = std::sqrt(2.0);
  const long double d = std::fabs(r2 * to_long_double(hit->x[0]) - to_long_double(hit->x[1])) / std::sqrt(1 + r2 * r2);
  CHECK(static_cast<double>(d) == doctest::Approx(hit->distance).epsilon(1e-3));
}

TEST_CASE("lifting a gcd hole to the set") {
  // d = 1: z = (a, b) maps to a + b sqrt2 with internal part a - b sqrt2, so the
  // box must sit near the line a = sqrt2 b to meet the set. Within distance 1 the
  // center has |internal| <= sqrt3, and a neighbour offset by 1 or 1 - sqrt2 lands in W.
  QuadField k(2);
  const auto s = CPSetDesc::exact(FieldLattice(k, 1), ConvexRegion::cube(1));
  const auto h = build_crt_hole(2, 1);
  const auto hit = hole_near_subspace(h, {{std::sqrt(2.0), 1}}, 1, 400'000'000);
  REQUIRE(hit.has_value());
  const auto rep = lift_hole(s, h, hit->x);
  CHECK(rep.box_points == 9);
  CHECK(rep.set_points >= 1);
  CHECK(rep.visible == 0);
}

TEST_CASE("scan_empty_ball") {
  const auto empty = scan_empty_ball(std::vector<std::vector<double>>{}, {0, 0}, {10, 4}, 0.5);
  CHECK(empty.radius == doctest::Approx(2));
  CHECK(empty.empirical);

  // (14,20), (14,21), (15,20), (15,21) are all invisible.
  const auto z2 = scan_empty_ball(visible_z2(100), {0, 0}, {100, 100}, 0.25);
  CHECK(z2.radius >= 1.5);
  REQUIRE(z2.center.size() == 2);
  for (const auto& p : visible_z2(100)) {
    CHECK(std::hypot(p[0] - z2.center[0], p[1] - z2.center[1]) >= z2.radius - 1e-12);
  }

  // A brute-force scan of the same grid on a smaller box agrees.
  const auto pts = visible_z2(30);
  const auto fast = scan_empty_ball(pts, {0, 0}, {30, 30}, 0.5);
  double brute = 0;
  for (int i = 1; i < 60; ++i)
    for (int j = 1; j < 60; ++j) {
      const double cx = 0.5 * i, cy = 0.5 * j;
      double r = std::min({cx, cy, 30 - cx, 30 - cy});
      for (const auto& p : pts) r = std::min(r, std::hypot(p[0] - cx, p[1] - cy));
      brute = std::max(brute, r);
    }
  CHECK(fast.radius == doctest::Approx(brute));
}

TEST_CASE("empty balls in the visible points of the Q(sqrt2) set grow with T") {
  QuadField k(2);
  const auto s = CPSetDesc::exact(FieldLattice(k, 2), ConvexRegion::cube(2));
  const auto D = ConvexRegion::cube(2);
  double prev = 0;
  for (int T : {50, 200}) {
    std::vector<CPPoint> vis;
    for (auto& p : generate(s, D, T))
      if (visible_fast(s, p)) vis.push_back(std::move(p));
    const auto b = scan_empty_ball(vis, {-double(T), -double(T)}, {double(T), double(T)}, 0.25);
    CHECK(b.radius > prev);
    prev = b.radius;
  }
}
