#pragma once

#include "quasivis/cutproject.hpp"
#include "quasivis/zeta.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace quasivis {

enum class CountMethod { Direct, Moebius, Both };

const char* to_string(CountMethod m);
CountMethod parse_count_method(const std::string& s);

struct CountReport {
  double T = 0;
  std::uint64_t count_vis = 0;
  std::uint64_t count_pr = 0;        // primitive points with internal part in beta W
  std::uint64_t count_pr_inner = 0;  // same for (1/lambda) beta W
  std::uint64_t count_all = 0;       // nonzero points
  double vol_TD = 0;
  double M_T = 0;  // vol(beta W) vol(TD) / covol(L)
  double predicted = 0;
  double rel_error = 0;
  std::uint64_t boundary_ambiguous = 0;
  CountMethod method = CountMethod::Direct;
  bool identity_holds = true;  // count_vis == count_pr - count_pr_inner
  bool methods_agree = true;   // Both: Moebius == direct for each window
};

// Zeta value of the field at s with absolute error tol, computed once per (d, s, tol).
const ZetaResult& cached_dedekind_zeta(const QuadField& field, int s, double tol = 1e-9);

// (1 - lambda^-d) theta / zeta_K(d). Throws NotHammarhjelm.
double predicted_density_hammarhjelm(const CPSetDesc& desc);
// 1 - lambda^-d in floating point.
double hammarhjelm_factor(const QuadField& field, int d);

struct MoebiusResult {
  std::int64_t count = 0;
  std::int64_t cutoff = 0;  // terms with |N(g)| above this are empty
  std::uint64_t terms = 0;  // representatives g in [1, lambda) within the cutoff
  std::uint64_t nonzero_terms = 0;
  std::string justification;
};

// Sum over g in [1, lambda) of mu(g) #(Lambda(beta W, L_g) minus 0, inside T D).
MoebiusResult moebius_count(const CPSetDesc& desc, const ConvexRegion& D, const Rational& T,
                            const EnumOptions& opts = {});
std::int64_t moebius_count_primitive(const CPSetDesc& desc, const ConvexRegion& D, const Rational& T,
                                     const EnumOptions& opts = {});

// Nonzero primitive points of the set in T D, by enumeration.
std::uint64_t direct_count_primitive(const CPSetDesc& desc, const ConvexRegion& D, const Rational& T,
                                     const EnumOptions& opts = {});

// The set with window scaled by an extra 1/lambda.
CPSetDesc inner_window_set(const CPSetDesc& desc);

// Throws NotHammarhjelm.
CountReport visible_count(const CPSetDesc& desc, const ConvexRegion& D, const Rational& T,
                          CountMethod method = CountMethod::Direct, const EnumOptions& opts = {});

struct RateFit {
  std::vector<std::pair<double, double>> points;  // (log vol_TD, log |rel error|)
  double slope = 0;
  double intercept = 0;
  double residual = 0;  // root mean square
  double slope_T = 0;   // the same errors against log T
  int jittered = 0;     // zero errors replaced by half a count
};

// Least squares over >= 6 reports with increasing T. A zero error throws
// DegenerateFit unless jitter_guard is set.
RateFit rate_fit(const std::vector<CountReport>& reports, bool jitter_guard = true);

struct RandomLatticeParams {
  int n = 3;
  int d = 2;
  ConvexRegion window;  // dimension n - d
  ConvexRegion omega;   // dimension d; Omega_T = T omega
  std::vector<Rational> T;
  int samples = 20;
  std::uint64_t seed = 1;
  int threads = 1;
  double tol = 1e-9;
};

struct RandomLatticeRow {
  double T = 0;
  double vol_omega = 0;
  double mean = 0;   // of count / (vol(W) vol(Omega_T))
  double stdev = 0;  // sample standard deviation
  double rel_dev = 0;         // |mean - target| / target
  double mean_abs_error = 0;  // mean of |density - target| / target
  std::uint64_t count = 0;    // summed over samples
  std::uint64_t boundary_ambiguous = 0;
};

struct RandomLatticeSummary {
  int n = 0;
  int d = 0;
  int samples = 0;
  std::uint64_t seed = 0;
  double zeta_n = 0;
  double zeta_bound = 0;
  double target = 0;  // 1 / zeta(n)
  std::vector<RandomLatticeRow> rows;
  std::uint64_t total_count = 0;
  std::uint64_t total_ambiguous = 0;
  bool monotone_error = false;  // mean_abs_error nonincreasing along the T list
};

// A standard normal n x n matrix rescaled to |det| = 1, columns as basis vectors.
GridDesc random_unimodular_grid(int n, int d, std::uint64_t seed);

RandomLatticeSummary random_lattice_experiment(const RandomLatticeParams& params);

}  // namespace quasivis
