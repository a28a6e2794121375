#pragma once

#include "quasivis/lattice.hpp"

#include <optional>
#include <vector>

namespace quasivis {

/// A cut-and-project set: lattice (exact field lattice or real grid),
/// window W in internal space and scale beta. The set uses beta * W.
struct CPSetDesc {
  std::optional<FieldLattice> field_lattice;  // exact path
  std::optional<GridDesc> grid;               // float path
  ConvexRegion window;
  Scale beta;
  bool star_shaped = true;
  bool centrally_symmetric = true;

  static CPSetDesc exact(const FieldLattice& lat, const ConvexRegion& window, const Scale& beta = Scale(1));
  static CPSetDesc floating(const GridDesc& grid, const ConvexRegion& window, const Scale& beta = Scale(1));

  bool is_exact() const { return field_lattice.has_value(); }
  int d() const;  // physical dimension
  int m() const;  // internal dimension
  int n() const { return d() + m(); }
  ConvexRegion effective_window() const { return window.scaled(beta); }
  double covolume() const;
  // theta = vol(beta W) / covol(L)
  double density() const;
};

struct CPPoint {
  std::vector<std::int64_t> z;  // lattice preimage
  std::vector<double> phys;
  std::vector<double> internal;
  std::vector<QuadInt> quad;  // exact path: physical coordinates in O_K
};

// Points of the set in T*D (including the origin when present), lexicographic in z.
std::vector<CPPoint> generate(const CPSetDesc& desc, const ConvexRegion& D, const Rational& T,
                              const EnumOptions& opts = {}, EnumStats* stats = nullptr);

// True when the exact path, PID, Hammarhjelm and symmetry hypotheses all hold.
bool is_hammarhjelm_example(const CPSetDesc& desc);

// gcd(x) = 1 and sigma(x) outside the closed window (1/lambda) beta W. Throws NotHammarhjelm.
bool visible_fast(const CPSetDesc& desc, const CPPoint& x);

/// visible_fast with the hypotheses checked once, for use in loops.
class VisibilityTester {
 public:
  explicit VisibilityTester(const CPSetDesc& desc);
  // z: lattice preimage, internal: float internal coordinates.
  bool operator()(const std::int64_t* z, const double* internal) const;
  // sigma(x) in the closed window (1/lambda) beta W.
  bool in_inner_window(const std::int64_t* z, const double* internal) const;

 private:
  const CPSetDesc* desc_;
  ConvexRegion inner_;
};

// Brute force: x is invisible iff some point of `points` is t x with 0 < t < 1.
// `points` must be generate(desc, D, T); throws InsufficientCover otherwise detectable.
bool visible_oracle(const CPSetDesc& desc, const CPPoint& x, const std::vector<CPPoint>& points,
                    const ConvexRegion& D, const Rational& T);
// Oracle verdict for every point of `points` (false for the origin).
std::vector<bool> visible_oracle_all(const CPSetDesc& desc, const std::vector<CPPoint>& points,
                                     const ConvexRegion& D, const Rational& T);

std::vector<CPPoint> primitive_points(const CPSetDesc& desc, const ConvexRegion& D, const Rational& T,
                                      const EnumOptions& opts = {});

// gcd_is_one on the physical coordinates of a point of an exact set.
bool is_primitive(const CPSetDesc& desc, const std::int64_t* z);

// L_g = a_g L; throws ZeroElement.
FieldLattice sublattice_Lg(const CPSetDesc& desc, const QuadInt& g);

// Points of T D coming from visible lattice points (primitive z) that are invisible in the set.
std::vector<CPPoint> strict_inclusion_witness(const CPSetDesc& desc, const ConvexRegion& D, const Rational& T);

}  // namespace quasivis
