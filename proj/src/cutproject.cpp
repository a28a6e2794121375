#include "quasivis/cutproject.hpp"
#include "quasivis/errors.hpp"
#include "quasivis/ideal.hpp"

#include <cmath>
#include <map>
#include <numeric>

namespace quasivis {

CPSetDesc CPSetDesc::exact(const FieldLattice& lat, const ConvexRegion& window, const Scale& beta) {
  if (window.dim() != lat.d()) throw Error(ErrorKind::InvalidArgument, "window dimension must equal d");
  CPSetDesc s;
  s.field_lattice = lat;
  s.window = window;
  s.beta = beta;
  s.centrally_symmetric = window.centrally_symmetric();
  s.star_shaped = window.contains_origin();
  return s;
}

CPSetDesc CPSetDesc::floating(const GridDesc& grid, const ConvexRegion& window, const Scale& beta) {
  if (grid.d < 1 || grid.d >= grid.n) throw Error(ErrorKind::InvalidArgument, "grid needs 0 < d < n");
  if (window.dim() != grid.m()) throw Error(ErrorKind::InvalidArgument, "window dimension must equal m");
  CPSetDesc s;
  s.grid = grid;
  s.window = window;
  s.beta = beta;
  s.centrally_symmetric = window.centrally_symmetric();
  s.star_shaped = window.contains_origin();
  return s;
}

int CPSetDesc::d() const { return field_lattice ? field_lattice->d() : grid->d; }
int CPSetDesc::m() const { return field_lattice ? field_lattice->d() : grid->m(); }

double CPSetDesc::covolume() const { return field_lattice ? field_lattice->covolume() : grid->covolume(); }

double CPSetDesc::density() const { return effective_window().volume() / covolume(); }

namespace {

CPPoint make_point(const CPSetDesc& desc, const std::int64_t* z, const double* y) {
  CPPoint p;
  const auto d = static_cast<std::size_t>(desc.d()), n = static_cast<std::size_t>(desc.n());
  p.z.assign(z, z + (desc.is_exact() ? 2 * d : n));
  p.phys.assign(y, y + d);
  p.internal.assign(y + d, y + n);
  if (desc.is_exact()) p.quad = desc.field_lattice->coords(z);
  return p;
}

bool is_origin(const CPPoint& p) {
  return std::all_of(p.z.begin(), p.z.end(), [](std::int64_t v) { return v == 0; });
}

// y is t*x for some 0 < t < 1.
bool shadows_exact(const std::vector<QuadInt>& y, const std::vector<QuadInt>& x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (y[i].sign() != x[i].sign()) return false;
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      if (y[i] * x[j] != y[j] * x[i]) return false;
    }
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].sign() > 0) return y[i].compare(x[i]) < 0;
    if (x[i].sign() < 0) return y[i].compare(x[i]) > 0;
  }
  return false;
}

bool shadows_float(const std::vector<double>& y, const std::vector<double>& x) {
  double xx = 0, yy = 0, xy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xx += x[i] * x[i];
    yy += y[i] * y[i];
    xy += x[i] * y[i];
  }
  if (xy <= 0 || yy >= xx * (1 - 1e-12)) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      if (std::fabs(y[i] * x[j] - y[j] * x[i]) > 1e-9 * std::sqrt(xx * yy)) return false;
    }
  }
  return true;
}

bool shadows(const CPSetDesc& desc, const CPPoint& y, const CPPoint& x) {
  return desc.is_exact() ? shadows_exact(y.quad, x.quad) : shadows_float(y.phys, x.phys);
}

void check_cover(const CPSetDesc& desc, const ConvexRegion& D, const Rational& T, const CPPoint* x) {
  if (!D.contains_origin()) throw Error(ErrorKind::InsufficientCover, "D does not contain the origin");
  if (!x) return;
  const auto TD = D.scaled(T);
  const bool inside = desc.is_exact() ? TD.contains(x->quad)
                                      : TD.classify(x->phys, 1e-9) != FloatMembership::Outside;
  if (!inside) throw Error(ErrorKind::InsufficientCover, "point lies outside T*D");
}

using Cell = std::vector<std::int64_t>;

Cell direction_cell(const std::vector<double>& v, double q) {
  double l = 0;
  for (double c : v) l += c * c;
  l = std::sqrt(l);
  Cell cell;
  for (double c : v) cell.push_back(static_cast<std::int64_t>(std::floor(c / l / q)));
  return cell;
}

}  // namespace

std::vector<CPPoint> generate(const CPSetDesc& desc, const ConvexRegion& D, const Rational& T,
                              const EnumOptions& opts, EnumStats* stats) {
  if (D.dim() != desc.d()) throw Error(ErrorKind::InvalidArgument, "D dimension must equal d");
  const auto region = ConvexRegion::product(D.scaled(T), desc.effective_window());
  std::vector<CPPoint> out;
  const PointVisitor visit = [&](const std::int64_t* z, const double* y) { out.push_back(make_point(desc, z, y)); };
  if (desc.is_exact())
    for_each_point(*desc.field_lattice, region, visit, opts, stats);
  else
    for_each_point(*desc.grid, region, visit, opts, stats);
  return out;
}

bool is_hammarhjelm_example(const CPSetDesc& desc) {
  if (!desc.is_exact() || !desc.centrally_symmetric) return false;
  const QuadField& k = desc.field_lattice->field();
  if (!k.is_pid() || !check_hammarhjelm(k)) return false;
  return desc.field_lattice->multiplier() == k.one();
}

bool is_primitive(const CPSetDesc& desc, const std::int64_t* z) {
  const FieldLattice& lat = *desc.field_lattice;
  if (lat.multiplier() == lat.field().one()) {
    if (auto r = gcd_is_one_small(z, lat.d(), lat.field().d())) return *r;
  }
  return gcd_is_one(lat.coords(z));
}

VisibilityTester::VisibilityTester(const CPSetDesc& desc) : desc_(&desc) {
  if (!is_hammarhjelm_example(desc))
    throw Error(ErrorKind::NotHammarhjelm, "visible_fast needs an exact Hammarhjelm example");
  inner_ = desc.window.scaled(desc.beta * Scale(desc.field_lattice->field(), -1));
}

bool VisibilityTester::in_inner_window(const std::int64_t* z, const double* internal) const {
  const auto d = static_cast<std::size_t>(desc_->d());
  switch (inner_.classify(std::span<const double>(internal, d), 1e-6)) {
    case FloatMembership::Inside:
      return true;
    case FloatMembership::Outside:
      return false;
    case FloatMembership::Boundary:
      break;
  }
  std::vector<QuadInt> s;
  for (const auto& q : desc_->field_lattice->coords(z)) s.push_back(q.conj());
  return inner_.contains(s);
}

bool VisibilityTester::operator()(const std::int64_t* z, const double* internal) const {
  const auto n = static_cast<std::size_t>(2 * desc_->d());
  if (std::all_of(z, z + n, [](std::int64_t v) { return v == 0; })) return false;
  return is_primitive(*desc_, z) && !in_inner_window(z, internal);
}

bool visible_fast(const CPSetDesc& desc, const CPPoint& x) {
  return VisibilityTester(desc)(x.z.data(), x.internal.data());
}

bool visible_oracle(const CPSetDesc& desc, const CPPoint& x, const std::vector<CPPoint>& points,
                    const ConvexRegion& D, const Rational& T) {
  check_cover(desc, D, T, &x);
  if (is_origin(x)) return false;
  for (const auto& y : points) {
    if (!is_origin(y) && shadows(desc, y, x)) return false;
  }
  return true;
}

std::vector<bool> visible_oracle_all(const CPSetDesc& desc, const std::vector<CPPoint>& points,
                                     const ConvexRegion& D, const Rational& T) {
  check_cover(desc, D, T, nullptr);
  // Collinear points share a direction up to rounding; bucket directions and
  // compare each point with the neighbouring buckets only.
  constexpr double q = 1e-7;
  std::map<Cell, std::vector<std::size_t>> buckets;
  std::vector<Cell> cells(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (is_origin(points[i])) continue;
    cells[i] = direction_cell(points[i].phys, q);
    buckets[cells[i]].push_back(i);
  }
  const std::size_t d = static_cast<std::size_t>(desc.d());
  std::size_t neighbours = 1;
  for (std::size_t i = 0; i < d; ++i) neighbours *= 3;
  std::vector<bool> out(points.size(), false);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (is_origin(points[i])) continue;
    bool visible = true;
    for (std::size_t code = 0; code < neighbours && visible; ++code) {
      Cell c = cells[i];
      std::size_t r = code;
      for (std::size_t j = 0; j < d; ++j, r /= 3) c[j] += static_cast<std::int64_t>(r % 3) - 1;
      auto it = buckets.find(c);
      if (it == buckets.end()) continue;
      for (std::size_t k : it->second) {
        if (k != i && shadows(desc, points[k], points[i])) {
          visible = false;
          break;
        }
      }
    }
    out[i] = visible;
  }
  return out;
}

std::vector<CPPoint> primitive_points(const CPSetDesc& desc, const ConvexRegion& D, const Rational& T,
                                      const EnumOptions& opts) {
  if (!desc.is_exact()) throw Error(ErrorKind::InvalidArgument, "primitive points need the exact path");
  std::vector<CPPoint> out;
  for (auto& p : generate(desc, D, T, opts)) {
    if (!is_origin(p) && is_primitive(desc, p.z.data())) out.push_back(std::move(p));
  }
  return out;
}

FieldLattice sublattice_Lg(const CPSetDesc& desc, const QuadInt& g) {
  if (!desc.is_exact()) throw Error(ErrorKind::InvalidArgument, "L_g needs a field lattice");
  if (g.is_zero()) throw Error(ErrorKind::ZeroElement, "g = 0");
  const FieldLattice& L = *desc.field_lattice;
  return FieldLattice(L.field(), L.d(), L.multiplier() * g);
}

std::vector<CPPoint> strict_inclusion_witness(const CPSetDesc& desc, const ConvexRegion& D, const Rational& T) {
  if (!desc.star_shaped) throw Error(ErrorKind::InvalidArgument, "window must be star-shaped");
  const auto points = generate(desc, D, T);
  const auto vis = visible_oracle_all(desc, points, D, T);
  std::vector<CPPoint> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (is_origin(points[i]) || vis[i]) continue;
    std::int64_t g = 0;
    for (auto v : points[i].z) g = std::gcd(g, v);
    if (g == 1) out.push_back(points[i]);
  }
  return out;
}

}  // namespace quasivis
