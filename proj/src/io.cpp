#include "quasivis/io.hpp"
#include "quasivis/errors.hpp"

#include <cmath>
#include <cstdio>
#include <regex>
#include <set>
#include <sstream>

namespace quasivis {

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

namespace {

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::Config, what); }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& what) {
  if (!j.is_object()) config_error(what + " must be an object");
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) config_error(what + ": unknown key '" + k + "'");
  }
}

std::vector<Rational> rationals(const Json& j, const std::string& what) {
  if (!j.is_array()) config_error(what + " must be an array");
  std::vector<Rational> out;
  for (const auto& v : j) out.push_back(rational_from_json(v, what));
  return out;
}

}  // namespace

Json to_json(const QuadInt& x) { return Json{{"a", to_string(x.a())}, {"b", to_string(x.b())}, {"d", x.d()}}; }

QuadInt quad_from_json(const Json& j) {
  try {
    return QuadInt(parse_bigint(j.at("a").get<std::string>()), parse_bigint(j.at("b").get<std::string>()),
                   j.at("d").get<std::int64_t>());
  } catch (const Json::exception& e) {
    config_error(std::string("field element: ") + e.what());
  }
}

Json to_json(const CRTHole& h) {
  Json primes = Json::array();
  for (std::size_t k = 0; k < h.tuples.size(); ++k)
    primes.push_back(Json{{"tuple", h.tuples[k]}, {"prime", std::to_string(h.primes[k])}});
  Json x0 = Json::array();
  for (const auto& c : h.x0) x0.push_back(to_string(c));
  return Json{{"n", h.n}, {"A", h.A}, {"primes", primes}, {"x0", x0}, {"N", to_string(h.N)}};
}

Json to_json(const CountReport& r) {
  return Json{{"T", r.T},
              {"count_vis", r.count_vis},
              {"count_pr", r.count_pr},
              {"count_pr_inner", r.count_pr_inner},
              {"count_all", r.count_all},
              {"vol_TD", r.vol_TD},
              {"M_T", r.M_T},
              {"predicted", r.predicted},
              {"rel_error", r.rel_error},
              {"boundary_ambiguous", r.boundary_ambiguous},
              {"method", to_string(r.method)},
              {"identity_holds", r.identity_holds},
              {"methods_agree", r.methods_agree}};
}

Json to_json(const RateFit& f) {
  Json pts = Json::array();
  for (const auto& [x, y] : f.points) pts.push_back(Json::array({x, y}));
  return Json{{"points", pts},          {"slope", f.slope},   {"intercept", f.intercept},
              {"residual", f.residual}, {"slope_T", f.slope_T}, {"jittered", f.jittered}};
}

Json to_json(const RandomLatticeSummary& s) {
  Json rows = Json::array();
  for (const auto& r : s.rows)
    rows.push_back(Json{{"T", r.T},
                        {"vol_omega", r.vol_omega},
                        {"mean", r.mean},
                        {"stdev", r.stdev},
                        {"rel_dev", r.rel_dev},
                        {"mean_abs_error", r.mean_abs_error},
                        {"count", r.count},
                        {"boundary_ambiguous", r.boundary_ambiguous}});
  return Json{{"n", s.n},
              {"d", s.d},
              {"samples", s.samples},
              {"seed", s.seed},
              {"zeta_n", s.zeta_n},
              {"zeta_bound", s.zeta_bound},
              {"target", s.target},
              {"rows", rows},
              {"total_count", s.total_count},
              {"total_ambiguous", s.total_ambiguous},
              {"monotone_error", s.monotone_error}};
}

Json to_json(const ZetaResult& z) {
  return Json{{"s", z.s},
              {"tol", z.tol},
              {"value", z.value},
              {"direct", {{"value", z.direct.value}, {"bound", z.direct.bound}, {"n_max", z.n_max}}},
              {"euler", {{"value", z.euler.value}, {"bound", z.euler.bound}, {"p_max", z.p_max}}},
              {"agree", z.agree}};
}

Rational rational_from_json(const Json& j, const std::string& what) {
  try {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_number_float()) return parse_rational(j.dump());
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const Error&) {
  } catch (const std::exception&) {
  }
  config_error(what + ": expected a rational, got " + j.dump());
}

ConvexRegion region_from_json(const Json& j, int dim, const std::string& what) {
  check_keys(j, {"kind", "r", "lo", "hi", "a", "vertices", "radius", "dim"}, what);
  if (!j.contains("kind") || !j["kind"].is_string()) config_error(what + ": missing 'kind'");
  const std::string kind = j["kind"];
  const int k = j.contains("dim") ? j["dim"].get<int>() : dim;
  try {
    if (kind == "square" || kind == "cube")
      return ConvexRegion::cube(k, j.contains("r") ? rational_from_json(j["r"], what + ".r") : Rational(1));
    if (kind == "box") {
      auto lo = rationals(j.at("lo"), what + ".lo"), hi = rationals(j.at("hi"), what + ".hi");
      if (static_cast<int>(lo.size()) != k || static_cast<int>(hi.size()) != k)
        config_error(what + ": box bounds must have " + std::to_string(k) + " entries");
      return ConvexRegion::box(lo, hi);
    }
    if (kind == "octagon") {
      if (k != 2) config_error(what + ": octagon is 2-dimensional");
      return ConvexRegion::octagon(j.contains("a") ? rational_from_json(j["a"], what + ".a") : Rational(41, 99));
    }
    if (kind == "polygon") {
      if (k != 2) config_error(what + ": polygon is 2-dimensional");
      std::vector<std::pair<Rational, Rational>> vs;
      for (const auto& v : j.at("vertices")) {
        auto xy = rationals(v, what + ".vertices");
        if (xy.size() != 2) config_error(what + ": vertices are pairs");
        vs.emplace_back(xy[0], xy[1]);
      }
      return ConvexRegion::polygon(vs);
    }
    if (kind == "disc" || kind == "ball") {
      const Rational r = j.contains("radius") ? rational_from_json(j["radius"], what + ".radius") : Rational(1);
      return ConvexRegion::ball(std::vector<Rational>(static_cast<std::size_t>(k), Rational(0)), r * r);
    }
  } catch (const Json::exception& e) {
    config_error(what + ": " + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Config) throw;
    config_error(what + ": " + e.what());
  }
  config_error(what + ": unknown kind '" + kind + "'");
}

Scale scale_from_json(const Json& j, const QuadField& field) {
  if (j.is_string()) {
    static const std::regex unit(R"(\s*(?:([-+0-9/.eE]+)\s*\*\s*)?(?:(1\s*/\s*lambda)|lambda\s*\^\s*(-?\d+)|lambda)\s*)");
    std::smatch m;
    const std::string s = j.get<std::string>();
    if (std::regex_match(s, m, unit)) {
      const Rational f = m[1].matched ? rational_from_json(Json(m[1].str()), "beta") : Rational(1);
      if (f <= 0) config_error("beta must be positive");
      const int e = m[2].matched ? -1 : m[3].matched ? std::stoi(m[3].str()) : 1;
      return Scale(field, e, f);
    }
  }
  const Rational r = rational_from_json(j, "beta");
  if (r <= 0) config_error("beta must be positive");
  return Scale(r);
}

CPSetDesc SetConfig::desc() const {
  return CPSetDesc::exact(FieldLattice(QuadField(field), dim), window, beta);
}

SetConfig set_config_from_json(const Json& j) {
  check_keys(j, {"field", "dim", "window", "D", "T", "beta", "method", "seed", "threads", "scan", "out"}, "config");
  SetConfig c;
  try {
    c.field = j.value("field", std::int64_t{2});
    c.dim = j.value("dim", 2);
  } catch (const Json::exception& e) {
    config_error(std::string("config: ") + e.what());
  }
  if (c.dim < 1 || c.dim > 3) config_error("dim must be 1, 2 or 3");
  if (!is_squarefree(c.field) || c.field < 2) config_error("field must be a squarefree integer >= 2");
  const QuadField k(c.field);
  c.window = j.contains("window") ? region_from_json(j["window"], c.dim, "window") : ConvexRegion::cube(c.dim);
  c.D = j.contains("D") ? region_from_json(j["D"], c.dim, "D") : ConvexRegion::cube(c.dim);
  c.beta = j.contains("beta") ? scale_from_json(j["beta"], k) : Scale(1);
  if (!j.contains("T")) config_error("config: missing 'T'");
  c.T = j["T"].is_array() ? rationals(j["T"], "T") : std::vector<Rational>{rational_from_json(j["T"], "T")};
  for (const auto& t : c.T)
    if (t <= 0) config_error("T values must be positive");
  if (j.contains("method")) {
    try {
      c.method = parse_count_method(j["method"].get<std::string>());
    } catch (const std::exception& e) {
      config_error(std::string("method: ") + e.what());
    }
  }
  return c;
}

RandomLatticeParams random_config_from_json(const Json& j) {
  check_keys(j, {"n", "d", "window", "omega", "T", "samples", "seed", "threads", "tol", "out"}, "config");
  RandomLatticeParams p;
  try {
    p.n = j.value("n", 3);
    p.d = j.value("d", 2);
    p.samples = j.value("samples", 20);
    p.seed = j.value("seed", std::uint64_t{1});
    p.threads = j.value("threads", 1);
    p.tol = j.value("tol", 1e-9);
  } catch (const Json::exception& e) {
    config_error(std::string("config: ") + e.what());
  }
  if (p.n < 3 || p.d < 1 || p.d >= p.n) config_error("need n >= 3 and 0 < d < n");
  if (p.samples < 1) config_error("samples must be positive");
  p.window = j.contains("window") ? region_from_json(j["window"], p.n - p.d, "window")
                                  : ConvexRegion::cube(p.n - p.d, Rational(1, 2));
  p.omega = j.contains("omega") ? region_from_json(j["omega"], p.d, "omega")
                                : ConvexRegion::ball(std::vector<Rational>(static_cast<std::size_t>(p.d), 0), 1);
  if (!j.contains("T")) config_error("config: missing 'T'");
  p.T = j["T"].is_array() ? rationals(j["T"], "T") : std::vector<Rational>{rational_from_json(j["T"], "T")};
  for (const auto& t : p.T)
    if (t <= 0) config_error("T values must be positive");
  return p;
}

Json output_header(const std::string& command, const Json& config, const std::string& path) {
  return Json{{"tool", "quasivis"},
              {"version", kToolVersion},
              {"command", command},
              {"config_hash", hex64(fnv1a(config.dump()))},
              {"path", path},
              {"config", config}};
}

void write_csv_header(std::ostream& os, const Json& header) {
  os << "# tool=" << header["tool"].get<std::string>() << " version=" << header["version"].get<std::string>()
     << " command=" << header["command"].get<std::string>() << "\n";
  os << "# config_hash=" << header["config_hash"].get<std::string>() << " path=" << header["path"].get<std::string>()
     << "\n";
  os << "# config=" << header["config"].dump() << "\n";
}

const std::vector<std::string> kCountReportColumns = {
    "T",       "count_vis", "count_pr",  "count_pr_inner",     "count_all", "vol_TD",         "M_T",
    "predicted", "rel_error", "boundary_ambiguous", "method", "identity_holds", "methods_agree"};

std::vector<std::string> point_columns(int d) {
  std::vector<std::string> cols;
  for (int i = 1; i <= d; ++i) {
    cols.push_back("a" + std::to_string(i));
    cols.push_back("b" + std::to_string(i));
  }
  for (int i = 1; i <= d; ++i) cols.push_back("x" + std::to_string(i));
  for (int i = 1; i <= d; ++i) cols.push_back("s" + std::to_string(i));
  cols.push_back("visible");
  return cols;
}

void write_count_report_row(std::ostream& os, const CountReport& r) {
  os << num(r.T) << ',' << r.count_vis << ',' << r.count_pr << ',' << r.count_pr_inner << ',' << r.count_all << ','
     << num(r.vol_TD) << ',' << num(r.M_T) << ',' << num(r.predicted) << ',' << num(r.rel_error) << ','
     << r.boundary_ambiguous << ',' << to_string(r.method) << ',' << (r.identity_holds ? "true" : "false") << ','
     << (r.methods_agree ? "true" : "false") << '\n';
}

std::string svg_scatter(const std::vector<PlotPoint>& points, const std::vector<PlotBox>& boxes,
                        const std::string& title, double xmin, double xmax, double ymin, double ymax) {
  if (!(xmax > xmin) || !(ymax > ymin)) throw Error(ErrorKind::InvalidArgument, "empty plot range");
  constexpr double size = 600, margin = 40;
  const double sx = (size - 2 * margin) / (xmax - xmin), sy = (size - 2 * margin) / (ymax - ymin);
  auto px = [&](double x) { return short_num(margin + (x - xmin) * sx); };
  auto py = [&](double y) { return short_num(size - margin - (y - ymin) * sy); };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"600\" viewBox=\"0 0 600 600\">\n";
  os << "<rect width=\"600\" height=\"600\" fill=\"white\"/>\n";
  os << "<text x=\"300\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" << title
     << "</text>\n";
  // Axes through the origin when it is in range, else along the frame.
  const double ax = (xmin <= 0 && 0 <= xmax) ? 0 : xmin, ay = (ymin <= 0 && 0 <= ymax) ? 0 : ymin;
  os << "<line x1=\"" << px(xmin) << "\" y1=\"" << py(ay) << "\" x2=\"" << px(xmax) << "\" y2=\"" << py(ay)
     << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  os << "<line x1=\"" << px(ax) << "\" y1=\"" << py(ymin) << "\" x2=\"" << px(ax) << "\" y2=\"" << py(ymax)
     << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  for (const auto& b : boxes) {
    os << "<rect x=\"" << px(std::min(b.x0, b.x1)) << "\" y=\"" << py(std::max(b.y0, b.y1)) << "\" width=\""
       << short_num(std::fabs(b.x1 - b.x0) * sx) << "\" height=\"" << short_num(std::fabs(b.y1 - b.y0) * sy)
       << "\" fill=\"none\" stroke=\"red\" stroke-width=\"1.5\"/>\n";
    if (!b.label.empty())
      os << "<text x=\"" << px(std::max(b.x0, b.x1)) << "\" y=\"" << py(std::max(b.y0, b.y1))
         << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"red\">" << b.label << "</text>\n";
  }
  for (const auto& p : points) {
    if (p.x < xmin || p.x > xmax || p.y < ymin || p.y > ymax) continue;
    os << "<circle cx=\"" << px(p.x) << "\" cy=\"" << py(p.y) << "\" r=\"2\" "
       << (p.filled ? "fill=\"black\"" : "fill=\"none\" stroke=\"black\" stroke-width=\"0.6\"") << "/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace quasivis
