#pragma once

#include "quasivis/io.hpp"

#include <optional>
#include <string>
#include <vector>

namespace quasivis {

// Exit codes of the command line tool.
enum ExitCode : int { kExitOk = 0, kExitIdentity = 1, kExitConfig = 2, kExitBudget = 3 };

Json cmd_field(std::int64_t d);

// visible_fast on Hammarhjelm examples, the brute-force oracle otherwise.
std::vector<bool> visibility_flags(const CPSetDesc& desc, const std::vector<CPPoint>& points, const ConvexRegion& D,
                                   const Rational& T);

struct HcRow {
  std::int64_t d = 0;
  std::int64_t disc = 0;
  QuadInt lambda;
  bool satisfied = false;
  std::optional<QuadInt> witness;  // element of (1, lambda) x [-1, 1] when not satisfied
};

// Squarefree d in [d_min, d_max] from the PID table.
std::vector<HcRow> cmd_check_hc(std::int64_t d_min, std::int64_t d_max);
std::string hc_csv(const std::vector<HcRow>& rows);
Json hc_json(const std::vector<HcRow>& rows);

struct DensityRun {
  std::vector<CountReport> reports;
  std::optional<RateFit> fit;
  std::string fit_error;  // why no fit was made
  bool identities_hold = true;
};

DensityRun cmd_density(const SetConfig& cfg, const EnumOptions& opts = {});
std::string density_csv(const DensityRun& run);
Json density_json(const DensityRun& run);

struct MoebiusRow {
  Rational T;
  MoebiusResult moebius;
  std::uint64_t direct = 0;
  bool equal = false;
};

std::vector<MoebiusRow> cmd_moebius(const SetConfig& cfg, const EnumOptions& opts = {});

struct HolesRun {
  Json result;
  int exit_code = kExitOk;
};

// config keys: n, A, translates, seed, subspace, R, budget, scan.
HolesRun cmd_holes(const Json& config, const EnumOptions& opts = {});

// Points of the set in T D (first T of the config) with visible points filled.
std::string plot_set_svg(const SetConfig& cfg, const EnumOptions& opts = {});
// Minkowski embedding (x, sigma(x)) of ring elements in [-r, r]^2 with the box (1, lambda) x [-1, 1].
std::string plot_field_svg(std::int64_t d, double r = 4);
// CSV with columns x, y[, visible].
std::string plot_points_svg(const std::string& csv_text);

}  // namespace quasivis
