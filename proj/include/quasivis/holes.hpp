#pragma once

#include "quasivis/bigint.hpp"
#include "quasivis/cutproject.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace quasivis {

/// A box x + [-A, A]^n of integer points with gcd != 1 for every x = x0 mod N.
/// tuple k (lexicographic over [-A, A]^n) is assigned primes[k], and
/// x0_j = -i_j mod primes[k] for that tuple i.
struct CRTHole {
  int n = 0;
  int A = 0;
  std::vector<std::vector<int>> tuples;
  std::vector<std::int64_t> primes;
  std::vector<BigInt> x0;  // in [0, N)
  BigInt N;

  std::int64_t prime_for(const std::vector<int>& tuple) const;
};

// The first `count` primes.
std::vector<std::int64_t> first_primes(std::size_t count);

CRTHole build_crt_hole(int n, int A);

// x = x0 mod N componentwise, else throws NotInResidueClass.
void check_residue_class(const CRTHole& hole, const std::vector<BigInt>& x);

// No point of x + [-A, A]^n has gcd 1 (the origin counts as non-primitive).
// Exhaustive over the box. Throws NotInResidueClass.
bool verify_hole(const CRTHole& hole, const std::vector<BigInt>& x);

// For every point x + i of the box, primes_for(i) divides every coordinate.
bool divisor_witness_holds(const CRTHole& hole, const std::vector<BigInt>& x);

// x0 + N k
std::vector<BigInt> hole_translate(const CRTHole& hole, const std::vector<BigInt>& k);

struct HoleHit {
  std::vector<BigInt> k;
  std::vector<BigInt> x;  // x0 + N k, the box center
  double distance = 0;    // from x to V
  std::uint64_t tried = 0;
};

// Searches integer k over growing boxes for a translate whose box center lies
// within R of V = span(basis). The last coordinate of k is chosen by rounding;
// budget bounds the number of choices of the other coordinates.
std::optional<HoleHit> hole_near_subspace(const CRTHole& hole, const std::vector<std::vector<double>>& basis,
                                          double R, std::uint64_t budget);

// Euclidean distance from an integer point to span(basis), in extended precision.
double distance_to_subspace(const std::vector<BigInt>& x, const std::vector<std::vector<double>>& basis);

struct EmptyBall {
  std::vector<double> center;
  double radius = 0;
  std::uint64_t centers_tried = 0;
  bool empirical = true;  // grid search, not a certificate
};

// Largest ball on a grid of centers (spacing h) inside the box [lo, hi] that
// contains none of the points in its interior.
EmptyBall scan_empty_ball(const std::vector<std::vector<double>>& points, const std::vector<double>& lo,
                          const std::vector<double>& hi, double h);
// Physical parts of the points.
EmptyBall scan_empty_ball(const std::vector<CPPoint>& points, const std::vector<double>& lo,
                          const std::vector<double>& hi, double h);

struct LiftReport {
  std::uint64_t box_points = 0;
  std::uint64_t set_points = 0;  // box points whose image lies in the set
  std::uint64_t visible = 0;     // must be 0
};

// Images in the set of the hole box at x (lattice coordinates), each tested with visible_fast.
LiftReport lift_hole(const CPSetDesc& desc, const CRTHole& hole, const std::vector<BigInt>& x);

}  // namespace quasivis
