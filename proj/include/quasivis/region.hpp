#pragma once

#include "quasivis/quadfield.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace quasivis {

/// Positive scale factor * lambda^unit_exp, exact.
class Scale {
 public:
  Scale() = default;
  explicit Scale(Rational factor);
  Scale(const QuadField& field, int unit_exp, Rational factor = 1);

  const Rational& factor() const { return factor_; }
  int unit_exp() const { return unit_exp_; }
  bool has_unit() const { return unit_exp_ != 0; }
  // lambda^-unit_exp; valid when has_unit().
  const QuadInt& inverse_unit() const { return inverse_unit_; }
  std::int64_t field_d() const { return d_; }
  long double value() const { return value_; }

  Scale operator*(const Scale& other) const;
  bool is_one() const { return !has_unit() && factor_ == 1; }
  std::string to_string() const;

 private:
  Rational factor_ = 1;
  int unit_exp_ = 0;
  std::int64_t d_ = 0;
  QuadInt lambda_;
  QuadInt inverse_unit_;
  long double value_ = 1;
};

enum class FloatMembership { Outside, Boundary, Inside };

struct FloatHalfSpace {
  std::vector<double> a;
  double b = 0;  // a.y <= b
};

/// Convex region in R^k with exact membership for points whose coordinates
/// lie in a real quadratic field: boxes, Euclidean balls, polytopes, and
/// products of two regions. Every region may carry an exact scale.
class ConvexRegion {
 public:
  enum class Kind { Box, Ball, Polytope, Product };

  struct HalfSpace {
    std::vector<Rational> a;
    Rational b;
    bool strict = false;  // a.y < b instead of a.y <= b
  };

  ConvexRegion() = default;

  static ConvexRegion box(std::vector<Rational> lo, std::vector<Rational> hi, std::vector<bool> lo_open = {},
                          std::vector<bool> hi_open = {});
  // [-r, r]^dim, closed.
  static ConvexRegion cube(int dim, const Rational& r = 1);
  static ConvexRegion ball(std::vector<Rational> center, Rational radius_sq);
  static ConvexRegion polytope(int dim, std::vector<HalfSpace> halfspaces);
  // Convex polygon from its vertices (any order).
  static ConvexRegion polygon(const std::vector<std::pair<Rational, Rational>>& vertices);
  // Octagon |x| <= 1, |y| <= 1, |x| + |y| <= 1 + a.
  static ConvexRegion octagon(const Rational& a);
  static ConvexRegion product(const ConvexRegion& first, const ConvexRegion& second);

  ConvexRegion scaled(const Scale& s) const;
  ConvexRegion scaled(const Rational& s) const { return scaled(Scale(s)); }

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  const Scale& scale() const { return scale_; }

  const std::vector<Rational>& box_lo() const { return lo_; }
  const std::vector<Rational>& box_hi() const { return hi_; }
  const std::vector<Rational>& ball_center() const { return center_; }
  const Rational& ball_radius_sq() const { return radius_sq_; }
  const std::vector<HalfSpace>& halfspaces() const { return halfspaces_; }
  const ConvexRegion& first() const { return *first_; }
  const ConvexRegion& second() const { return *second_; }

  // Exact membership. All coordinates must come from the same field as any unit in the scale.
  bool contains(std::span<const QuadInt> v) const;
  bool contains_origin() const;

  // Float classification; Boundary means within tol of the boundary.
  FloatMembership classify(std::span<const double> v, double tol) const;

  // Outer polyhedral approximation (balls become their bounding boxes).
  void outer_halfspaces(std::vector<FloatHalfSpace>& out, int offset, int total_dim) const;
  std::vector<std::pair<double, double>> bounding_box() const;
  // Outward-rounded upper bound of max |y_axis| over the region.
  Rational sup_abs(int axis) const;
  double diameter() const;

  double volume() const;
  bool centrally_symmetric() const;
  // Vertices of the unscaled 2D polytope or box, counter-clockwise.
  std::vector<std::pair<Rational, Rational>> polygon_vertices() const;

  std::string describe() const;

 private:
  bool contains_leaf(std::span<const QuadInt> v) const;
  void init_caches();

  Kind kind_ = Kind::Box;
  int dim_ = 0;
  Scale scale_;
  std::vector<Rational> lo_, hi_;
  std::vector<bool> lo_open_, hi_open_;
  std::vector<Rational> center_;
  Rational radius_sq_ = 0;
  std::vector<HalfSpace> halfspaces_;
  // Integer-scaled rows of the halfspaces: A_i . y <= rhs_i.
  std::vector<std::vector<BigInt>> int_rows_;
  std::vector<Rational> int_rhs_;
  // Float copies for classify(); polytope rows are unit-normalized.
  std::vector<double> lo_d_, hi_d_, center_d_;
  double radius_d_ = 0;
  std::vector<std::vector<double>> rows_d_;
  std::vector<double> rhs_d_;
  std::shared_ptr<const ConvexRegion> first_, second_;
};

}  // namespace quasivis
