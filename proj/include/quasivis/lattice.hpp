#pragma once

#include "quasivis/quadfield.hpp"
#include "quasivis/region.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace quasivis {

/// Grid y = B z + t in R^n with a real basis (float path).
struct GridDesc {
  int n = 0;
  int d = 0;  // physical dimension; m = n - d
  std::vector<double> basis;        // n x n row-major, columns are basis vectors
  std::vector<double> translation;  // empty for lattices

  static GridDesc identity(int n);
  static GridDesc from_columns(const std::vector<std::vector<double>>& columns, int d = 0);
  int m() const { return n - d; }
  double covolume() const;
  void apply(const std::int64_t* z, double* y) const;
};

/// The lattice g * (O_K^d) Minkowski-embedded in R^{2d}: a point is
/// (g x_1, .., g x_d, sigma(g x_1), .., sigma(g x_d)) for x_i in O_K.
/// The preimage is z = (a_1, b_1, .., a_d, b_d) with x_i = a_i + b_i omega.
class FieldLattice {
 public:
  FieldLattice(const QuadField& field, int d);
  FieldLattice(const QuadField& field, int d, QuadInt multiplier);

  const QuadField& field() const { return field_; }
  int d() const { return d_; }
  int n() const { return 2 * d_; }
  const QuadInt& multiplier() const { return g_; }

  // Physical coordinates g x_1 .. g x_d.
  std::vector<QuadInt> coords(const std::int64_t* z) const;
  // Physical coordinates followed by their conjugates.
  std::vector<QuadInt> embedding(const std::int64_t* z) const;
  void embed(const std::int64_t* z, double* y) const;

  GridDesc grid() const;
  double covolume() const;
  // covol^2 = disc^d * N(g)^(2d), exact.
  BigInt covolume_squared() const;

  // Preimage of a vector of field elements, if each lies in g O_K.
  std::optional<std::vector<std::int64_t>> preimage(const std::vector<QuadInt>& xs) const;

 private:
  QuadField field_;
  int d_;
  QuadInt g_;
  double col_[4];  // real and conjugate embeddings of g and g*omega
};

struct EnumOptions {
  double guard = 1e-6;  // exact path: float margin below which the exact test decides
  double tol = 1e-9;    // float path: boundary-ambiguity width
  int threads = 1;
};

struct EnumStats {
  std::uint64_t candidates = 0;
  std::uint64_t accepted = 0;
  std::uint64_t exact_tests = 0;
  std::uint64_t boundary_ambiguous = 0;  // float path only
};

struct LatticePoint {
  std::vector<std::int64_t> z;
  std::vector<double> y;
  std::vector<QuadInt> exact;  // exact path only: embedding(z)
};

using PointVisitor = std::function<void(const std::int64_t* z, const double* y)>;

// Exact path: every lattice point in the region, in lexicographic order of z.
void for_each_point(const FieldLattice& lat, const ConvexRegion& region, const PointVisitor& visit,
                    const EnumOptions& opts = {}, EnumStats* stats = nullptr);
// Float path: points within opts.tol of the boundary are accepted and tallied.
void for_each_point(const GridDesc& grid, const ConvexRegion& region, const PointVisitor& visit,
                    const EnumOptions& opts = {}, EnumStats* stats = nullptr);

std::vector<LatticePoint> enumerate_points(const FieldLattice& lat, const ConvexRegion& region,
                                           const EnumOptions& opts = {}, EnumStats* stats = nullptr);
std::vector<LatticePoint> enumerate_points(const GridDesc& grid, const ConvexRegion& region,
                                           const EnumOptions& opts = {}, EnumStats* stats = nullptr);

std::uint64_t count_points(const FieldLattice& lat, const ConvexRegion& region, const EnumOptions& opts = {});
std::uint64_t count_points(const GridDesc& grid, const ConvexRegion& region, const EnumOptions& opts = {},
                           EnumStats* stats = nullptr);

/// Generator a_{g0} of the unit rescaling group: g0 = lambda^exponent is the
/// smallest unit > 1 of norm +1, acting on z by an integer matrix of det 1.
struct UnitRescaler {
  QuadInt g0;
  int exponent = 1;
  std::vector<std::int64_t> matrix;  // n x n row-major, z -> M z

  std::vector<std::int64_t> apply(const std::int64_t* z, int power = 1) const;
};

UnitRescaler unit_rescalers(const FieldLattice& lat);

/// a_0 = a_{g0^k} carrying T D x beta W to (T g0^k D) x (beta g0^-k W).
struct BalancedRescale {
  int k = 0;
  Scale phys;      // T * g0^k
  Scale internal;  // beta * g0^-k
  ConvexRegion region;
  double diam_phys = 0;
  double diam_internal = 0;
};

BalancedRescale balanced_rescale(const FieldLattice& lat, const ConvexRegion& D, const Rational& T,
                                 const ConvexRegion& W, const Scale& beta);

// Lengths of greedily chosen shortest independent vectors (n values, ascending).
std::vector<double> successive_minima(const GridDesc& grid);

struct SchmidtReport {
  std::uint64_t count = 0;
  double expected = 0;  // vol / covol
  double error = 0;     // |count - expected|
  double bound_side = 0;  // c * T0^(n-1)
  double ratio = 0;       // error / bound_side
  bool violated = false;  // ratio above the supplied fitted constant
};

// Throws HypothesisFailed naming the failed hypothesis.
SchmidtReport schmidt_count_check(const GridDesc& grid, const ConvexRegion& region, double c, double T0,
                                  double fitted_C = std::numeric_limits<double>::infinity());

}  // namespace quasivis
