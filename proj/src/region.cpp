#include "quasivis/region.hpp"
#include "quasivis/errors.hpp"
#include "quasivis/scanner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace quasivis {

Scale::Scale(Rational factor) : factor_(std::move(factor)) {
  if (factor_ <= 0) throw Error(ErrorKind::InvalidArgument, "scale must be positive");
  value_ = static_cast<long double>(to_double(factor_));
}

Scale::Scale(const QuadField& field, int unit_exp, Rational factor) : Scale(std::move(factor)) {
  unit_exp_ = unit_exp;
  if (unit_exp_ == 0) return;
  d_ = field.d();
  lambda_ = field.lambda();
  inverse_unit_ = field.lambda_power(-unit_exp);
  value_ *= std::pow(field.unit().approx, static_cast<long double>(unit_exp));
}

Scale Scale::operator*(const Scale& other) const {
  if (has_unit() && other.has_unit() && d_ != other.d_)
    throw Error(ErrorKind::InvalidArgument, "scales from different fields");
  Scale r(factor_ * other.factor_);
  r.unit_exp_ = unit_exp_ + other.unit_exp_;
  r.value_ = value_ * other.value_;
  if (r.unit_exp_ != 0) {
    r.d_ = has_unit() ? d_ : other.d_;
    r.lambda_ = has_unit() ? lambda_ : other.lambda_;
    if (has_unit() && other.has_unit())
      r.inverse_unit_ = inverse_unit_ * other.inverse_unit_;
    else
      r.inverse_unit_ = has_unit() ? inverse_unit_ : other.inverse_unit_;
  }
  return r;
}

std::string Scale::to_string() const {
  std::string s = quasivis::to_string(factor_);
  if (unit_exp_ != 0) s += "*lambda^" + std::to_string(unit_exp_);
  return s;
}

namespace {

BigInt denominator_lcm(const std::vector<Rational>& xs) {
  BigInt l = 1;
  for (const auto& x : xs) l = lcm(l, boost::multiprecision::denominator(x));
  return l;
}

std::string rat(const Rational& r) { return to_string(r); }

// Sign of (v - r) in the real embedding.
int cmp(const QuadInt& v, const Rational& r) { return v.compare(r); }

}  // namespace

ConvexRegion ConvexRegion::box(std::vector<Rational> lo, std::vector<Rational> hi, std::vector<bool> lo_open,
                               std::vector<bool> hi_open) {
  if (lo.size() != hi.size() || lo.empty()) throw Error(ErrorKind::InvalidArgument, "box bounds mismatch");
  ConvexRegion r;
  r.kind_ = Kind::Box;
  r.dim_ = static_cast<int>(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (lo[i] > hi[i]) throw Error(ErrorKind::InvalidArgument, "box with lo > hi");
  }
  if (lo_open.empty()) lo_open.assign(lo.size(), false);
  if (hi_open.empty()) hi_open.assign(lo.size(), false);
  r.lo_ = std::move(lo);
  r.hi_ = std::move(hi);
  r.lo_open_ = std::move(lo_open);
  r.hi_open_ = std::move(hi_open);
  r.init_caches();
  return r;
}

ConvexRegion ConvexRegion::cube(int dim, const Rational& rad) {
  return box(std::vector<Rational>(static_cast<std::size_t>(dim), -rad),
             std::vector<Rational>(static_cast<std::size_t>(dim), rad));
}

ConvexRegion ConvexRegion::ball(std::vector<Rational> center, Rational radius_sq) {
  if (center.empty() || radius_sq < 0) throw Error(ErrorKind::InvalidArgument, "bad ball");
  ConvexRegion r;
  r.kind_ = Kind::Ball;
  r.dim_ = static_cast<int>(center.size());
  r.center_ = std::move(center);
  r.radius_sq_ = std::move(radius_sq);
  r.init_caches();
  return r;
}

ConvexRegion ConvexRegion::polytope(int dim, std::vector<HalfSpace> halfspaces) {
  if (dim < 1 || halfspaces.empty()) throw Error(ErrorKind::InvalidArgument, "bad polytope");
  ConvexRegion r;
  r.kind_ = Kind::Polytope;
  r.dim_ = dim;
  for (const auto& h : halfspaces) {
    if (static_cast<int>(h.a.size()) != dim) throw Error(ErrorKind::InvalidArgument, "halfspace dimension");
    const BigInt l = denominator_lcm(h.a);
    std::vector<BigInt> row;
    for (const auto& c : h.a) row.push_back(boost::multiprecision::numerator(Rational(c * l)));
    r.int_rows_.push_back(std::move(row));
    r.int_rhs_.push_back(h.b * l);
  }
  r.halfspaces_ = std::move(halfspaces);
  r.init_caches();
  return r;
}

ConvexRegion ConvexRegion::polygon(const std::vector<std::pair<Rational, Rational>>& vertices) {
  if (vertices.size() < 3) throw Error(ErrorKind::InvalidArgument, "polygon needs 3 vertices");
  double cx = 0, cy = 0;
  for (const auto& [x, y] : vertices) {
    cx += to_double(x);
    cy += to_double(y);
  }
  cx /= static_cast<double>(vertices.size());
  cy /= static_cast<double>(vertices.size());
  auto vs = vertices;
  std::sort(vs.begin(), vs.end(), [&](const auto& p, const auto& q) {
    return std::atan2(to_double(p.second) - cy, to_double(p.first) - cx) <
           std::atan2(to_double(q.second) - cy, to_double(q.first) - cx);
  });
  std::vector<HalfSpace> hs;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const auto& p = vs[i];
    const auto& q = vs[(i + 1) % vs.size()];
    HalfSpace h;
    h.a = {q.second - p.second, p.first - q.first};
    h.b = h.a[0] * p.first + h.a[1] * p.second;
    for (const auto& v : vs) {
      if (h.a[0] * v.first + h.a[1] * v.second > h.b)
        throw Error(ErrorKind::InvalidArgument, "polygon vertices are not in convex position");
    }
    hs.push_back(std::move(h));
  }
  return polytope(2, std::move(hs));
}

ConvexRegion ConvexRegion::octagon(const Rational& a) {
  const Rational c = 1 + a;
  std::vector<HalfSpace> hs = {
      {{1, 0}, 1, false},  {{-1, 0}, 1, false}, {{0, 1}, 1, false},  {{0, -1}, 1, false},
      {{1, 1}, c, false},  {{1, -1}, c, false}, {{-1, 1}, c, false}, {{-1, -1}, c, false},
  };
  return polytope(2, std::move(hs));
}

ConvexRegion ConvexRegion::product(const ConvexRegion& first, const ConvexRegion& second) {
  ConvexRegion r;
  r.kind_ = Kind::Product;
  r.dim_ = first.dim() + second.dim();
  r.first_ = std::make_shared<const ConvexRegion>(first);
  r.second_ = std::make_shared<const ConvexRegion>(second);
  return r;
}

ConvexRegion ConvexRegion::scaled(const Scale& s) const {
  ConvexRegion r = *this;
  if (kind_ == Kind::Product) {
    r.first_ = std::make_shared<const ConvexRegion>(first_->scaled(s));
    r.second_ = std::make_shared<const ConvexRegion>(second_->scaled(s));
  } else {
    r.scale_ = scale_ * s;
  }
  return r;
}

void ConvexRegion::init_caches() {
  lo_d_.clear();
  hi_d_.clear();
  center_d_.clear();
  rows_d_.clear();
  rhs_d_.clear();
  for (const auto& x : lo_) lo_d_.push_back(to_double(x));
  for (const auto& x : hi_) hi_d_.push_back(to_double(x));
  for (const auto& x : center_) center_d_.push_back(to_double(x));
  radius_d_ = std::sqrt(to_double(radius_sq_));
  for (const auto& h : halfspaces_) {
    std::vector<double> a;
    double norm = 0;
    for (const auto& c : h.a) {
      a.push_back(to_double(c));
      norm += a.back() * a.back();
    }
    norm = std::sqrt(norm);
    if (norm == 0) norm = 1;
    for (auto& c : a) c /= norm;
    rows_d_.push_back(std::move(a));
    rhs_d_.push_back(to_double(h.b) / norm);
  }
}

bool ConvexRegion::contains(std::span<const QuadInt> v) const {
  if (static_cast<int>(v.size()) != dim_) throw Error(ErrorKind::InvalidArgument, "point dimension mismatch");
  if (kind_ == Kind::Product) {
    const auto k = static_cast<std::size_t>(first_->dim());
    return first_->contains(v.subspan(0, k)) && second_->contains(v.subspan(k));
  }
  return contains_leaf(v);
}

bool ConvexRegion::contains_leaf(std::span<const QuadInt> v) const {
  // v in s*R  <=>  lambda^-k v / f in R.
  std::vector<QuadInt> w(v.begin(), v.end());
  if (scale_.has_unit()) {
    for (auto& x : w) x = x * scale_.inverse_unit();
  }
  const Rational& f = scale_.factor();
  switch (kind_) {
    case Kind::Box:
      for (std::size_t j = 0; j < w.size(); ++j) {
        const int l = cmp(w[j], lo_[j] * f), h = cmp(w[j], hi_[j] * f);
        if (l < 0 || (l == 0 && lo_open_[j])) return false;
        if (h > 0 || (h == 0 && hi_open_[j])) return false;
      }
      return true;
    case Kind::Polytope:
      for (std::size_t i = 0; i < int_rows_.size(); ++i) {
        QuadInt s(0, 0, w.front().d());
        for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * int_rows_[i][j];
        const int c = cmp(s, int_rhs_[i] * f);
        if (c > 0 || (c == 0 && halfspaces_[i].strict)) return false;
      }
      return true;
    case Kind::Ball: {
      std::vector<Rational> c;
      for (const auto& x : center_) c.push_back(x * f);
      const BigInt l = denominator_lcm(c);
      QuadInt s(0, 0, w.front().d());
      for (std::size_t j = 0; j < w.size(); ++j) {
        QuadInt t = w[j] * l - QuadInt::integer(boost::multiprecision::numerator(Rational(c[j] * l)), w[j].d());
        s += t * t;
      }
      return cmp(s, radius_sq_ * f * f * Rational(l * l)) <= 0;
    }
    case Kind::Product:
      break;
  }
  return false;
}

bool ConvexRegion::contains_origin() const {
  switch (kind_) {
    case Kind::Product:
      return first_->contains_origin() && second_->contains_origin();
    case Kind::Box:
      for (std::size_t j = 0; j < lo_.size(); ++j) {
        if (lo_[j] > 0 || (lo_[j] == 0 && lo_open_[j])) return false;
        if (hi_[j] < 0 || (hi_[j] == 0 && hi_open_[j])) return false;
      }
      return true;
    case Kind::Ball: {
      Rational s = 0;
      for (const auto& c : center_) s += c * c;
      return s <= radius_sq_;
    }
    case Kind::Polytope:
      for (const auto& h : halfspaces_) {
        if (h.b < 0 || (h.b == 0 && h.strict)) return false;
      }
      return true;
  }
  return false;
}

FloatMembership ConvexRegion::classify(std::span<const double> v, double tol) const {
  if (kind_ == Kind::Product) {
    const auto k = static_cast<std::size_t>(first_->dim());
    const auto a = first_->classify(v.subspan(0, k), tol);
    if (a == FloatMembership::Outside) return a;
    const auto b = second_->classify(v.subspan(k), tol);
    return std::min(a, b);
  }
  const double s = static_cast<double>(scale_.value());
  double margin = std::numeric_limits<double>::infinity();
  switch (kind_) {
    case Kind::Box:
      for (std::size_t j = 0; j < v.size(); ++j) {
        const double x = v[j] / s;
        margin = std::min({margin, x - lo_d_[j], hi_d_[j] - x});
      }
      break;
    case Kind::Polytope:
      for (std::size_t i = 0; i < rows_d_.size(); ++i) {
        double dot = 0;
        for (std::size_t j = 0; j < v.size(); ++j) dot += rows_d_[i][j] * v[j];
        margin = std::min(margin, rhs_d_[i] - dot / s);
      }
      break;
    case Kind::Ball: {
      double r2 = 0;
      for (std::size_t j = 0; j < v.size(); ++j) {
        const double t = v[j] / s - center_d_[j];
        r2 += t * t;
      }
      margin = radius_d_ - std::sqrt(r2);
      break;
    }
    case Kind::Product:
      break;
  }
  margin *= s;
  if (margin < -tol) return FloatMembership::Outside;
  if (margin <= tol) return FloatMembership::Boundary;
  return FloatMembership::Inside;
}

void ConvexRegion::outer_halfspaces(std::vector<FloatHalfSpace>& out, int offset, int total_dim) const {
  if (kind_ == Kind::Product) {
    first_->outer_halfspaces(out, offset, total_dim);
    second_->outer_halfspaces(out, offset + first_->dim(), total_dim);
    return;
  }
  const double s = static_cast<double>(scale_.value());
  auto axis_rows = [&](const std::vector<std::pair<double, double>>& bb) {
    for (int j = 0; j < dim_; ++j) {
      FloatHalfSpace up, down;
      up.a.assign(static_cast<std::size_t>(total_dim), 0.0);
      down.a = up.a;
      up.a[static_cast<std::size_t>(offset + j)] = 1;
      up.b = bb[static_cast<std::size_t>(j)].second;
      down.a[static_cast<std::size_t>(offset + j)] = -1;
      down.b = -bb[static_cast<std::size_t>(j)].first;
      out.push_back(std::move(up));
      out.push_back(std::move(down));
    }
  };
  if (kind_ == Kind::Polytope) {
    for (std::size_t i = 0; i < rows_d_.size(); ++i) {
      FloatHalfSpace h;
      h.a.assign(static_cast<std::size_t>(total_dim), 0.0);
      for (int j = 0; j < dim_; ++j) h.a[static_cast<std::size_t>(offset + j)] = rows_d_[i][static_cast<std::size_t>(j)];
      h.b = rhs_d_[i] * s;
      out.push_back(std::move(h));
    }
    return;
  }
  axis_rows(bounding_box());
}

std::vector<std::pair<double, double>> ConvexRegion::bounding_box() const {
  std::vector<std::pair<double, double>> out;
  if (kind_ == Kind::Product) {
    out = first_->bounding_box();
    for (const auto& p : second_->bounding_box()) out.push_back(p);
    return out;
  }
  const double s = static_cast<double>(scale_.value());
  switch (kind_) {
    case Kind::Box:
      for (int j = 0; j < dim_; ++j) out.emplace_back(lo_d_[static_cast<std::size_t>(j)] * s, hi_d_[static_cast<std::size_t>(j)] * s);
      break;
    case Kind::Ball:
      for (int j = 0; j < dim_; ++j) {
        const double c = center_d_[static_cast<std::size_t>(j)];
        out.emplace_back((c - radius_d_) * s, (c + radius_d_) * s);
      }
      break;
    case Kind::Polytope: {
      std::vector<LinearRow> rows;
      for (std::size_t i = 0; i < rows_d_.size(); ++i) rows.push_back({rows_d_[i], rhs_d_[i]});
      for (auto [lo, hi] : polyhedron_bounds(rows, dim_)) out.emplace_back(lo * s, hi * s);
      break;
    }
    case Kind::Product:
      break;
  }
  return out;
}

Rational ConvexRegion::sup_abs(int axis) const {
  if (kind_ == Kind::Product) {
    return axis < first_->dim() ? first_->sup_abs(axis) : second_->sup_abs(axis - first_->dim());
  }
  if (kind_ == Kind::Box && !scale_.has_unit()) {
    const auto j = static_cast<std::size_t>(axis);
    return std::max(abs(lo_[j]), abs(hi_[j])) * scale_.factor();
  }
  const auto bb = bounding_box()[static_cast<std::size_t>(axis)];
  const double m = std::max(std::fabs(bb.first), std::fabs(bb.second));
  return rational_from_double(m * (1 + 1e-12) + 1e-12);
}

double ConvexRegion::diameter() const {
  if (kind_ == Kind::Product) return std::hypot(first_->diameter(), second_->diameter());
  const double s = static_cast<double>(scale_.value());
  switch (kind_) {
    case Kind::Box: {
      double q = 0;
      for (int j = 0; j < dim_; ++j) {
        const double w = hi_d_[static_cast<std::size_t>(j)] - lo_d_[static_cast<std::size_t>(j)];
        q += w * w;
      }
      return std::sqrt(q) * s;
    }
    case Kind::Ball:
      return 2 * radius_d_ * s;
    case Kind::Polytope: {
      if (dim_ == 2) {
        const auto vs = polygon_vertices();
        double best = 0;
        for (const auto& p : vs) {
          for (const auto& q : vs)
            best = std::max(best, std::hypot(to_double(p.first - q.first), to_double(p.second - q.second)));
        }
        return best * s;
      }
      double q = 0;
      for (const auto& [lo, hi] : bounding_box()) q += (hi - lo) * (hi - lo);
      return std::sqrt(q);  // upper bound; bounding_box is already scaled
    }
    case Kind::Product:
      break;
  }
  return 0;
}

double ConvexRegion::volume() const {
  if (kind_ == Kind::Product) return first_->volume() * second_->volume();
  const double sk = std::pow(static_cast<double>(scale_.value()), dim_);
  switch (kind_) {
    case Kind::Box: {
      Rational v = 1;
      for (std::size_t j = 0; j < lo_.size(); ++j) v *= hi_[j] - lo_[j];
      return to_double(v) * sk;
    }
    case Kind::Ball:
      return std::pow(std::numbers::pi, dim_ / 2.0) / std::tgamma(dim_ / 2.0 + 1) * std::pow(radius_d_, dim_) * sk;
    case Kind::Polytope: {
      if (dim_ == 1) {
        Rational lo, hi;
        bool has_lo = false, has_hi = false;
        for (const auto& h : halfspaces_) {
          if (h.a[0] > 0) {
            Rational t = h.b / h.a[0];
            if (!has_hi || t < hi) hi = t;
            has_hi = true;
          } else if (h.a[0] < 0) {
            Rational t = h.b / h.a[0];
            if (!has_lo || t > lo) lo = t;
            has_lo = true;
          }
        }
        if (!has_lo || !has_hi) throw Error(ErrorKind::RegionUnbounded, "unbounded interval");
        return hi > lo ? to_double(hi - lo) * sk : 0.0;
      }
      if (dim_ != 2) throw Error(ErrorKind::InvalidArgument, "polytope volume implemented for dim <= 2");
      const auto vs = polygon_vertices();
      Rational a2 = 0;
      for (std::size_t i = 0; i < vs.size(); ++i) {
        const auto& p = vs[i];
        const auto& q = vs[(i + 1) % vs.size()];
        a2 += p.first * q.second - q.first * p.second;
      }
      return to_double(a2 / 2) * sk;
    }
    case Kind::Product:
      break;
  }
  return 0;
}

bool ConvexRegion::centrally_symmetric() const {
  switch (kind_) {
    case Kind::Product:
      return first_->centrally_symmetric() && second_->centrally_symmetric();
    case Kind::Box:
      for (std::size_t j = 0; j < lo_.size(); ++j) {
        if (lo_[j] != -hi_[j] || lo_open_[j] != hi_open_[j]) return false;
      }
      return true;
    case Kind::Ball:
      return std::all_of(center_.begin(), center_.end(), [](const Rational& c) { return c == 0; });
    case Kind::Polytope: {
      auto normalized = [](const HalfSpace& h) {
        Rational m = 0;
        for (const auto& c : h.a) m = std::max(m, Rational(abs(c)));
        HalfSpace n = h;
        if (m != 0) {
          for (auto& c : n.a) c /= m;
          n.b /= m;
        }
        return n;
      };
      std::vector<HalfSpace> ns;
      for (const auto& h : halfspaces_) ns.push_back(normalized(h));
      for (const auto& h : ns) {
        bool found = false;
        for (const auto& g : ns) {
          bool opposite = g.b == h.b && g.strict == h.strict;
          for (std::size_t j = 0; j < h.a.size() && opposite; ++j) opposite = g.a[j] == -h.a[j];
          if (opposite) {
            found = true;
            break;
          }
        }
        if (!found) return false;
      }
      return true;
    }
  }
  return false;
}

std::vector<std::pair<Rational, Rational>> ConvexRegion::polygon_vertices() const {
  if (dim_ != 2 || kind_ == Kind::Product || kind_ == Kind::Ball)
    throw Error(ErrorKind::InvalidArgument, "polygon_vertices needs a 2D box or polytope");
  if (kind_ == Kind::Box) return {{lo_[0], lo_[1]}, {hi_[0], lo_[1]}, {hi_[0], hi_[1]}, {lo_[0], hi_[1]}};
  std::vector<LinearRow> rows;
  for (std::size_t i = 0; i < rows_d_.size(); ++i) rows.push_back({rows_d_[i], rhs_d_[i]});
  const auto bb = polyhedron_bounds(rows, 2);
  const Rational x0 = static_cast<long long>(std::floor(bb[0].first)) - 1;
  const Rational x1 = static_cast<long long>(std::ceil(bb[0].second)) + 1;
  const Rational y0 = static_cast<long long>(std::floor(bb[1].first)) - 1;
  const Rational y1 = static_cast<long long>(std::ceil(bb[1].second)) + 1;
  std::vector<std::pair<Rational, Rational>> poly = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  // Sutherland-Hodgman with exact rationals.
  for (const auto& h : halfspaces_) {
    std::vector<std::pair<Rational, Rational>> next;
    auto val = [&](const std::pair<Rational, Rational>& p) { return h.a[0] * p.first + h.a[1] * p.second - h.b; };
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const auto& p = poly[i];
      const auto& q = poly[(i + 1) % poly.size()];
      const Rational vp = val(p), vq = val(q);
      if (vp <= 0) next.push_back(p);
      if ((vp < 0 && vq > 0) || (vp > 0 && vq < 0)) {
        const Rational t = vp / (vp - vq);
        next.emplace_back(p.first + t * (q.first - p.first), p.second + t * (q.second - p.second));
      }
    }
    poly.clear();
    for (auto& p : next) {
      if (poly.empty() || poly.back() != p) poly.push_back(std::move(p));
    }
    while (poly.size() > 1 && poly.front() == poly.back()) poly.pop_back();
    if (poly.empty()) break;
  }
  return poly;
}

std::string ConvexRegion::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Product:
      return first_->describe() + " x " + second_->describe();
    case Kind::Box:
      os << "box(";
      for (std::size_t j = 0; j < lo_.size(); ++j) {
        if (j) os << "x";
        os << (lo_open_[j] ? "(" : "[") << rat(lo_[j]) << "," << rat(hi_[j]) << (hi_open_[j] ? ")" : "]");
      }
      os << ")";
      break;
    case Kind::Ball:
      os << "ball(center=[";
      for (std::size_t j = 0; j < center_.size(); ++j) os << (j ? "," : "") << rat(center_[j]);
      os << "],r2=" << rat(radius_sq_) << ")";
      break;
    case Kind::Polytope:
      os << "polytope(dim=" << dim_ << ",rows=" << halfspaces_.size() << ")";
      break;
  }
  if (!scale_.is_one()) os << "*" << scale_.to_string();
  return os.str();
}

}  // namespace quasivis
