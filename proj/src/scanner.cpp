#include "quasivis/scanner.hpp"
#include "quasivis/errors.hpp"

#include <algorithm>
#include <limits>

namespace quasivis {

namespace {

constexpr std::size_t kMaxRows = 4000;

double row_scale(const LinearRow& r, int nvars) {
  double m = 0;
  for (int i = 0; i < nvars; ++i) m = std::max(m, std::fabs(r.a[static_cast<std::size_t>(i)]));
  return m;
}

bool implied_by_box(const LinearRow& r, int nvars, const std::vector<std::pair<double, double>>& zbox) {
  if (zbox.empty()) return false;
  double worst = 0;
  for (int i = 0; i < nvars; ++i) {
    const double c = r.a[static_cast<std::size_t>(i)];
    const auto& [lo, hi] = zbox[static_cast<std::size_t>(i)];
    worst += std::max(c * lo, c * hi);
  }
  return worst <= r.b;
}

std::vector<LinearRow> dedupe(std::vector<LinearRow> rows, int nvars) {
  std::sort(rows.begin(), rows.end(), [nvars](const LinearRow& x, const LinearRow& y) {
    for (int i = 0; i < nvars; ++i) {
      if (x.a[static_cast<std::size_t>(i)] != y.a[static_cast<std::size_t>(i)])
        return x.a[static_cast<std::size_t>(i)] < y.a[static_cast<std::size_t>(i)];
    }
    return x.b < y.b;
  });
  std::vector<LinearRow> out;
  for (auto& r : rows) {
    if (!out.empty()) {
      bool same = true;
      for (int i = 0; i < nvars && same; ++i)
        same = std::fabs(out.back().a[static_cast<std::size_t>(i)] - r.a[static_cast<std::size_t>(i)]) <= 1e-13;
      if (same) continue;  // sorted by b, the first kept is the tightest
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<double> invert(int n, const std::vector<double>& m) {
  std::vector<double> a = m, inv(static_cast<std::size_t>(n * n), 0.0);
  for (int i = 0; i < n; ++i) inv[static_cast<std::size_t>(i * n + i)] = 1;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(a[static_cast<std::size_t>(r * n + col)]) > std::fabs(a[static_cast<std::size_t>(piv * n + col)]))
        piv = r;
    const double p = a[static_cast<std::size_t>(piv * n + col)];
    if (std::fabs(p) < 1e-300) throw Error(ErrorKind::InvalidArgument, "singular lattice basis");
    for (int k = 0; k < n; ++k) {
      std::swap(a[static_cast<std::size_t>(col * n + k)], a[static_cast<std::size_t>(piv * n + k)]);
      std::swap(inv[static_cast<std::size_t>(col * n + k)], inv[static_cast<std::size_t>(piv * n + k)]);
    }
    for (int k = 0; k < n; ++k) {
      a[static_cast<std::size_t>(col * n + k)] /= p;
      inv[static_cast<std::size_t>(col * n + k)] /= p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[static_cast<std::size_t>(r * n + col)];
      if (f == 0) continue;
      for (int k = 0; k < n; ++k) {
        a[static_cast<std::size_t>(r * n + k)] -= f * a[static_cast<std::size_t>(col * n + k)];
        inv[static_cast<std::size_t>(r * n + k)] -= f * inv[static_cast<std::size_t>(col * n + k)];
      }
    }
  }
  return inv;
}

double pad(double v) { return 1e-9 * (1 + std::fabs(v)); }

}  // namespace

std::vector<LinearRow> eliminate_last(const std::vector<LinearRow>& rows, int nvars,
                                      const std::vector<std::pair<double, double>>& zbox) {
  const auto v = static_cast<std::size_t>(nvars - 1);
  std::vector<const LinearRow*> pos, neg;
  std::vector<LinearRow> out;
  for (const auto& r : rows) {
    const double c = r.a[v];
    if (c > 0)
      pos.push_back(&r);
    else if (c < 0)
      neg.push_back(&r);
    else
      out.push_back(r);
  }
  for (auto* p : pos) {
    for (auto* q : neg) {
      const double cp = p->a[v], cq = -q->a[v];
      LinearRow r;
      r.a.assign(p->a.size(), 0.0);
      for (std::size_t i = 0; i < v; ++i) r.a[i] = p->a[i] * cq + q->a[i] * cp;
      r.b = p->b * cq + q->b * cp;
      out.push_back(std::move(r));
    }
  }
  std::vector<LinearRow> kept;
  for (auto& r : out) {
    r.a[v] = 0;
    const double s = row_scale(r, nvars - 1);
    if (s == 0) {
      kept.push_back(std::move(r));  // constant row; range() checks feasibility
      continue;
    }
    for (auto& x : r.a) x /= s;
    r.b /= s;
    if (!implied_by_box(r, nvars - 1, zbox)) kept.push_back(std::move(r));
  }
  return dedupe(std::move(kept), nvars - 1);
}

std::vector<std::pair<double, double>> polyhedron_bounds(const std::vector<LinearRow>& rows, int nvars) {
  std::vector<std::pair<double, double>> out;
  for (int k = 0; k < nvars; ++k) {
    // Move variable k to position 0, then eliminate the rest.
    std::vector<LinearRow> sys;
    for (const auto& r : rows) {
      LinearRow p = r;
      std::swap(p.a[0], p.a[static_cast<std::size_t>(k)]);
      sys.push_back(std::move(p));
    }
    for (int m = nvars; m > 1; --m) sys = eliminate_last(sys, m, {});
    double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
    for (const auto& r : sys) {
      if (r.a[0] > 0) hi = std::min(hi, r.b / r.a[0]);
      if (r.a[0] < 0) lo = std::max(lo, r.b / r.a[0]);
    }
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw Error(ErrorKind::RegionUnbounded, "polytope is unbounded");
    out.emplace_back(lo, hi);
  }
  return out;
}

IntegerScanner::IntegerScanner(int n, const std::vector<double>& basis, const std::vector<FloatHalfSpace>& region,
                               const std::vector<std::pair<double, double>>& region_box)
    : n_(n) {
  const auto N = static_cast<std::size_t>(n);
  for (const auto& [lo, hi] : region_box) {
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw Error(ErrorKind::RegionUnbounded, "region is unbounded");
  }
  const std::vector<double> inv = invert(n, basis);

  // z = B^-1 y with y in the region box, by interval arithmetic.
  zbox_.resize(N);
  for (std::size_t k = 0; k < N; ++k) {
    double lo = 0, hi = 0;
    for (std::size_t l = 0; l < N; ++l) {
      const double c = inv[k * N + l];
      lo += std::min(c * region_box[l].first, c * region_box[l].second);
      hi += std::max(c * region_box[l].first, c * region_box[l].second);
    }
    lo = std::floor(lo - pad(lo));
    hi = std::ceil(hi + pad(hi));
    if (lo > hi) empty_ = true;
    zbox_[k] = {lo, hi};
  }
  if (empty_) return;

  std::vector<LinearRow> rows;
  for (const auto& h : region) {
    LinearRow r;
    r.a.assign(N, 0.0);
    for (std::size_t j = 0; j < N; ++j) {
      double s = 0;
      for (std::size_t i = 0; i < N; ++i) s += h.a[i] * basis[i * N + j];
      r.a[j] = s;
    }
    const double sc = row_scale(r, n);
    if (sc == 0) {
      if (h.b < -pad(h.b)) empty_ = true;
      continue;
    }
    for (auto& x : r.a) x /= sc;
    r.b = h.b / sc;
    r.b += pad(r.b);
    if (!implied_by_box(r, n, zbox_)) rows.push_back(std::move(r));
  }
  if (empty_) return;
  for (std::size_t k = 0; k < N; ++k) {
    LinearRow up, down;
    up.a.assign(N, 0.0);
    down.a.assign(N, 0.0);
    up.a[k] = 1;
    up.b = zbox_[k].second;
    down.a[k] = -1;
    down.b = -zbox_[k].first;
    rows.push_back(std::move(up));
    rows.push_back(std::move(down));
  }

  levels_.assign(N, {});
  levels_[N - 1] = dedupe(std::move(rows), n);
  bool box_only = false;
  for (int j = n - 1; j >= 1; --j) {
    auto& next = levels_[static_cast<std::size_t>(j - 1)];
    if (!box_only) {
      next = eliminate_last(levels_[static_cast<std::size_t>(j)], j + 1, zbox_);
      if (next.size() > kMaxRows) box_only = true;
    }
    if (box_only) next.clear();  // range() falls back to the box
  }
  auto r0 = range(0, std::vector<std::int64_t>(N, 0));
  outer_ = r0;
  if (r0.first > r0.second) empty_ = true;
}

std::pair<std::int64_t, std::int64_t> IntegerScanner::range(int j, const std::vector<std::int64_t>& z) const {
  const auto J = static_cast<std::size_t>(j);
  double lo = zbox_[J].first, hi = zbox_[J].second;
  for (const auto& r : levels_[J]) {
    double rest = r.b;
    for (std::size_t i = 0; i < J; ++i) rest -= r.a[i] * static_cast<double>(z[i]);
    const double c = r.a[J];
    if (c == 0) {
      if (rest < -1e-7 * (1 + std::fabs(r.b))) return {1, 0};
      continue;
    }
    if (c > 0)
      hi = std::min(hi, rest / c);
    else
      lo = std::max(lo, rest / c);
  }
  if (lo > hi + 1e-7 * (1 + std::fabs(hi))) return {1, 0};
  return {static_cast<std::int64_t>(std::ceil(lo - pad(lo))), static_cast<std::int64_t>(std::floor(hi + pad(hi)))};
}

}  // namespace quasivis
