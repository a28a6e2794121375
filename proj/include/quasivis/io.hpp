#pragma once

#include "quasivis/counting.hpp"
#include "quasivis/holes.hpp"

#include <json.hpp>

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace quasivis {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& bytes);
std::string hex64(std::uint64_t v);

Json to_json(const QuadInt& x);
QuadInt quad_from_json(const Json& j);
Json to_json(const CRTHole& h);
Json to_json(const CountReport& r);
Json to_json(const RateFit& f);
Json to_json(const RandomLatticeSummary& s);
Json to_json(const ZetaResult& z);

// Config values: rationals may be given as numbers or strings like "41/99".
Rational rational_from_json(const Json& j, const std::string& what);

// Region config: {"kind": "square", "r": 1} | {"kind": "box", "lo": [..], "hi": [..]} |
// {"kind": "octagon", "a": "41/99"} | {"kind": "polygon", "vertices": [[x, y], ..]} |
// {"kind": "disc", "radius": r, "dim": 2}. "dim" defaults to `dim`.
ConvexRegion region_from_json(const Json& j, int dim, const std::string& what);
// "1", "1/lambda", "lambda^-2" or a rational.
Scale scale_from_json(const Json& j, const QuadField& field);

/// A validated cut-and-project experiment config.
struct SetConfig {
  std::int64_t field = 2;
  int dim = 2;
  ConvexRegion window;
  ConvexRegion D;
  Scale beta;
  std::vector<Rational> T;
  CountMethod method = CountMethod::Direct;
  CPSetDesc desc() const;
};

// Throws Error(Config) on schema violations.
SetConfig set_config_from_json(const Json& j);
RandomLatticeParams random_config_from_json(const Json& j);

// Header block shared by all outputs.
Json output_header(const std::string& command, const Json& config, const std::string& path);
void write_csv_header(std::ostream& os, const Json& header);

// Frozen column orders.
extern const std::vector<std::string> kCountReportColumns;
// a1,b1,..,x1,..,s1,..,visible for an exact set of physical dimension d.
std::vector<std::string> point_columns(int d);
void write_count_report_row(std::ostream& os, const CountReport& r);

struct PlotPoint {
  double x = 0;
  double y = 0;
  bool filled = true;
};

struct PlotBox {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  std::string label;
};

// Deterministic SVG scatter with axes; filled points solid, others hollow.
std::string svg_scatter(const std::vector<PlotPoint>& points, const std::vector<PlotBox>& boxes,
                        const std::string& title, double xmin, double xmax, double ymin, double ymax);

}  // namespace quasivis
