#pragma once

#include "quasivis/quadfield.hpp"

#include <cstdint>
#include <vector>

namespace quasivis {

/// A truncated series value together with an absolute error bound.
struct Truncated {
  double value = 0;
  double bound = 0;
};

struct ZetaBudget {
  std::uint64_t max_terms = 50'000'000;      // direct summation length
  std::uint64_t max_prime = 4'000'000'000;   // Euler product prime bound
};

struct ZetaResult {
  int s = 0;
  double tol = 0;
  double value = 0;  // direct-sum value
  Truncated direct;
  Truncated euler;
  std::uint64_t n_max = 0;
  std::uint64_t p_max = 0;
  bool agree = false;  // |direct - euler| <= 2 tol
};

// H_n for 0 <= n <= n_max (H_0 = 0).
std::vector<std::int16_t> ideal_counts(const QuadField& field, std::uint64_t n_max);

// max_{n <= n_max} H_n / sqrt(n)
double fitted_ideal_constant(const QuadField& field, std::uint64_t n_max);

// L(1, chi) for the character of the field; equals the residue of the Dedekind zeta at 1.
double zeta_residue(const QuadField& field);

// max_k |chi(1) + ... + chi(k)|
int character_sum_bound(const QuadField& field);

Truncated dedekind_zeta_direct(const QuadField& field, int s, std::uint64_t n_max);
Truncated dedekind_zeta_euler(const QuadField& field, int s, std::uint64_t p_max);

// Both methods, each with absolute error <= tol. Throws TolTooTight when the
// budget cannot reach tol.
ZetaResult dedekind_zeta(const QuadField& field, int s, double tol, const ZetaBudget& budget = {});

// Riemann zeta by partial sums with the integral tail enclosure.
Truncated riemann_zeta(int s, double tol);

}  // namespace quasivis
