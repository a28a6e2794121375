#pragma once

#include "quasivis/region.hpp"

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace quasivis {

struct LinearRow {
  std::vector<double> a;
  double b = 0;  // a.z <= b
};

// Fourier-Motzkin elimination of the last variable of a system in `nvars` variables.
// Rows implied by the box `zbox` are dropped.
std::vector<LinearRow> eliminate_last(const std::vector<LinearRow>& rows, int nvars,
                                      const std::vector<std::pair<double, double>>& zbox);

// Per-axis bounds of {y : rows} by successive elimination; throws RegionUnbounded.
std::vector<std::pair<double, double>> polyhedron_bounds(const std::vector<LinearRow>& rows, int nvars);

/// Enumerates integer vectors z with B z inside a polyhedral outer region.
/// Candidates are a superset of the true points; callers test membership.
class IntegerScanner {
 public:
  // basis: n x n row-major with columns the basis vectors.
  IntegerScanner(int n, const std::vector<double>& basis, const std::vector<FloatHalfSpace>& region,
                 const std::vector<std::pair<double, double>>& region_box);

  int n() const { return n_; }
  bool empty() const { return empty_; }
  // Range of the outermost coordinate.
  std::pair<std::int64_t, std::int64_t> outer_range() const { return outer_; }

  // visit(const std::int64_t* z) for every candidate with z[0] in [lo, hi].
  template <class Visit>
  void scan(std::int64_t lo, std::int64_t hi, Visit&& visit) const {
    if (empty_) return;
    std::vector<std::int64_t> z(static_cast<std::size_t>(n_), 0);
    lo = std::max(lo, outer_.first);
    hi = std::min(hi, outer_.second);
    for (std::int64_t v = lo; v <= hi; ++v) {
      z[0] = v;
      if (n_ == 1)
        visit(z.data());
      else
        descend(1, z, visit);
    }
  }

  template <class Visit>
  void scan(Visit&& visit) const {
    scan(outer_.first, outer_.second, visit);
  }

 private:
  // Integer range of coordinate j given z[0..j-1]; lo > hi when empty.
  std::pair<std::int64_t, std::int64_t> range(int j, const std::vector<std::int64_t>& z) const;

  template <class Visit>
  void descend(int j, std::vector<std::int64_t>& z, Visit& visit) const {
    auto [lo, hi] = range(j, z);
    for (std::int64_t v = lo; v <= hi; ++v) {
      z[static_cast<std::size_t>(j)] = v;
      if (j + 1 == n_)
        visit(z.data());
      else
        descend(j + 1, z, visit);
    }
  }

  int n_;
  bool empty_ = false;
  std::pair<std::int64_t, std::int64_t> outer_{0, -1};
  std::vector<std::pair<double, double>> zbox_;
  // levels_[j]: rows in variables z_0..z_j (only coefficients 0..j are used).
  std::vector<std::vector<LinearRow>> levels_;
};

}  // namespace quasivis
