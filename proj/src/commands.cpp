#include "quasivis/commands.hpp"
#include "quasivis/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace quasivis {

namespace {

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::Config, what); }

QuadField field_or_config_error(std::int64_t d) {
  if (d < 2 || !is_squarefree(d)) config_error("field must be a squarefree integer >= 2, got " + std::to_string(d));
  return QuadField(d);
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json strings(const std::vector<BigInt>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

std::vector<std::vector<double>> basis_from_json(const Json& j, int n) {
  if (!j.is_array() || j.empty()) config_error("subspace must be a nonempty array of vectors");
  std::vector<std::vector<double>> out;
  for (const auto& v : j) {
    if (!v.is_array() || static_cast<int>(v.size()) != n)
      config_error("subspace vectors must have " + std::to_string(n) + " entries");
    std::vector<double> row;
    for (const auto& x : v) {
      if (x.is_number()) {
        row.push_back(x.get<double>());
      } else if (x.is_string()) {
        // "sqrt(k)" or a rational
        const std::string s = x.get<std::string>();
        if (s.rfind("sqrt(", 0) == 0 && s.back() == ')')
          row.push_back(std::sqrt(to_double(rational_from_json(Json(s.substr(5, s.size() - 6)), "subspace"))));
        else
          row.push_back(to_double(rational_from_json(x, "subspace")));
      } else {
        config_error("subspace entries must be numbers");
      }
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

Json cmd_field(std::int64_t d) {
  const QuadField k = field_or_config_error(d);
  const auto& u = k.unit();
  Json j{{"d", d},
         {"disc", k.disc()},
         {"omega", k.trace() == 1 ? "(1+sqrt(d))/2" : "sqrt(d)"},
         {"lambda", to_json(u.value)},
         {"lambda_approx", static_cast<double>(u.approx)},
         {"lambda_error_bound", static_cast<double>(u.error_bound)},
         {"lambda_certified", u.certified},
         {"unit_norm", k.unit_norm()},
         {"is_pid", k.is_pid()}};
  if (k.is_pid()) j["hammarhjelm"] = check_hammarhjelm(k);
  return j;
}

std::vector<bool> visibility_flags(const CPSetDesc& desc, const std::vector<CPPoint>& points, const ConvexRegion& D,
                                   const Rational& T) {
  if (!is_hammarhjelm_example(desc)) return visible_oracle_all(desc, points, D, T);
  const VisibilityTester vis(desc);
  std::vector<bool> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    const bool origin = std::all_of(p.z.begin(), p.z.end(), [](std::int64_t v) { return v == 0; });
    out[i] = !origin && vis(p.z.data(), p.internal.data());
  }
  return out;
}

std::vector<HcRow> cmd_check_hc(std::int64_t d_min, std::int64_t d_max) {
  if (d_min < 2 || d_min > d_max) config_error("need 2 <= dmin <= dmax");
  if (d_max > 100) config_error("the PID table covers d <= 100");
  std::vector<HcRow> rows;
  for (std::int64_t d = d_min; d <= d_max; ++d) {
    if (!is_squarefree(d) || !is_pid_table(d)) continue;
    const QuadField k(d);
    HcRow r;
    r.d = d;
    r.disc = k.disc();
    r.lambda = k.lambda();
    const auto hits = enumerate_ring_box(k, hammarhjelm_box(k));
    r.satisfied = hits.empty();
    if (!hits.empty()) r.witness = hits.front();
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string hc_csv(const std::vector<HcRow>& rows) {
  std::ostringstream os;
  os << "d,disc,lambda_a,lambda_b,lambda,hammarhjelm,witness_a,witness_b,witness,witness_conj\n";
  for (const auto& r : rows) {
    os << r.d << ',' << r.disc << ',' << to_string(r.lambda.a()) << ',' << to_string(r.lambda.b()) << ','
       << num(static_cast<double>(r.lambda.real())) << ',' << (r.satisfied ? "true" : "false") << ',';
    if (r.witness)
      os << to_string(r.witness->a()) << ',' << to_string(r.witness->b()) << ','
         << num(static_cast<double>(r.witness->real())) << ',' << num(static_cast<double>(r.witness->conj_real()));
    else
      os << ",,,";
    os << '\n';
  }
  return os.str();
}

Json hc_json(const std::vector<HcRow>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    Json j{{"d", r.d},
           {"disc", r.disc},
           {"lambda", to_json(r.lambda)},
           {"lambda_approx", static_cast<double>(r.lambda.real())},
           {"hammarhjelm", r.satisfied}};
    j["witness"] = r.witness ? to_json(*r.witness) : Json(nullptr);
    out.push_back(std::move(j));
  }
  return out;
}

DensityRun cmd_density(const SetConfig& cfg, const EnumOptions& opts) {
  const auto desc = cfg.desc();
  if (!is_hammarhjelm_example(desc))
    throw Error(ErrorKind::NotHammarhjelm, "density needs a Hammarhjelm example with a symmetric star-shaped window");
  DensityRun run;
  for (const auto& T : cfg.T) {
    run.reports.push_back(visible_count(desc, cfg.D, T, cfg.method, opts));
    const auto& r = run.reports.back();
    run.identities_hold = run.identities_hold && r.identity_holds && r.methods_agree;
  }
  if (run.reports.size() >= 6) {
    try {
      run.fit = rate_fit(run.reports);
    } catch (const Error& e) {
      run.fit_error = e.what();
    }
  } else {
    run.fit_error = "fewer than 6 values of T";
  }
  return run;
}

std::string density_csv(const DensityRun& run) {
  std::ostringstream os;
  for (std::size_t i = 0; i < kCountReportColumns.size(); ++i) os << (i ? "," : "") << kCountReportColumns[i];
  os << '\n';
  for (const auto& r : run.reports) write_count_report_row(os, r);
  return os.str();
}

Json density_json(const DensityRun& run) {
  Json rows = Json::array();
  for (const auto& r : run.reports) rows.push_back(to_json(r));
  Json j{{"rows", rows}, {"identities_hold", run.identities_hold}};
  if (run.fit)
    j["fit"] = to_json(*run.fit);
  else
    j["fit"] = Json{{"error", run.fit_error}};
  return j;
}

std::vector<MoebiusRow> cmd_moebius(const SetConfig& cfg, const EnumOptions& opts) {
  const auto desc = cfg.desc();
  std::vector<MoebiusRow> rows;
  for (const auto& T : cfg.T) {
    MoebiusRow r;
    r.T = T;
    r.moebius = moebius_count(desc, cfg.D, T, opts);
    r.direct = direct_count_primitive(desc, cfg.D, T, opts);
    r.equal = r.moebius.count >= 0 && static_cast<std::uint64_t>(r.moebius.count) == r.direct;
    rows.push_back(std::move(r));
  }
  return rows;
}

HolesRun cmd_holes(const Json& config, const EnumOptions& opts) {
  if (!config.is_object()) config_error("config must be an object");
  for (const auto& [key, v] : config.items()) {
    static const std::vector<std::string> allowed{"n",      "A", "translates", "seed", "subspace",
                                                  "R",      "budget", "scan",  "threads", "out"};
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      config_error("config: unknown key '" + key + "'");
  }
  int n = 2, A = 1, translates = 5;
  std::uint64_t seed = 1, budget = 100'000'000;
  double R = 1;
  try {
    n = config.value("n", 2);
    A = config.value("A", 1);
    translates = config.value("translates", 5);
    seed = config.value("seed", std::uint64_t{1});
    budget = config.value("budget", std::uint64_t{100'000'000});
    R = config.value("R", 1.0);
  } catch (const Json::exception& e) {
    config_error(std::string("config: ") + e.what());
  }
  if (n < 2 || n > 8 || A < 0 || A > 3) config_error("need 2 <= n <= 8 and 0 <= A <= 3");
  if (translates < 0) config_error("translates must be nonnegative");
  if (!(R > 0)) config_error("R must be positive");

  HolesRun run;
  const auto hole = build_crt_hole(n, A);
  Json out{{"hole", to_json(hole)}};

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(-1000, 1000);
  Json ts = Json::array();
  bool all_ok = true;
  for (int t = 0; t < translates; ++t) {
    std::vector<BigInt> k;
    for (int j = 0; j < n; ++j) k.emplace_back(pick(rng));
    const auto x = hole_translate(hole, k);
    const bool verified = verify_hole(hole, x);
    const bool witness = divisor_witness_holds(hole, x);
    all_ok = all_ok && verified && witness;
    ts.push_back(Json{{"k", strings(k)}, {"x", strings(x)}, {"verified", verified}, {"divisor_witness", witness}});
  }
  const bool base_ok = verify_hole(hole, hole.x0) && divisor_witness_holds(hole, hole.x0);
  all_ok = all_ok && base_ok;
  out["x0_verified"] = base_ok;
  out["translates"] = ts;
  out["all_verified"] = all_ok;
  if (!all_ok) run.exit_code = kExitIdentity;

  if (config.contains("subspace")) {
    const auto basis = basis_from_json(config["subspace"], n);
    Json s{{"R", R}, {"budget", budget}};
    const auto hit = hole_near_subspace(hole, basis, R, budget);
    if (hit) {
      s["found"] = true;
      s["k"] = strings(hit->k);
      s["x"] = strings(hit->x);
      s["distance"] = hit->distance;
      s["tried"] = hit->tried;
      s["verified"] = verify_hole(hole, hit->x);
      if (!s["verified"].get<bool>()) run.exit_code = kExitIdentity;
    } else {
      s["found"] = false;
      if (run.exit_code == kExitOk) run.exit_code = kExitBudget;
    }
    out["search"] = s;
  }

  if (config.contains("scan")) {
    Json sc = config["scan"];
    if (!sc.is_object()) config_error("scan must be an object");
    double h = 0.25;
    if (sc.contains("h")) {
      h = to_double(rational_from_json(sc["h"], "scan.h"));
      sc.erase("h");
    }
    if (!(h > 0)) config_error("scan.h must be positive");
    const auto cfg = set_config_from_json(sc);
    const auto desc = cfg.desc();
    if (cfg.dim > 3) config_error("scan supports dimensions 1 to 3");
    Json rows = Json::array();
    for (const auto& T : cfg.T) {
      const auto pts = generate(desc, cfg.D, T, opts);
      const auto vis = visibility_flags(desc, pts, cfg.D, T);
      std::vector<CPPoint> kept;
      for (std::size_t i = 0; i < pts.size(); ++i)
        if (vis[i]) kept.push_back(pts[i]);
      std::vector<double> lo, hi;
      for (const auto& [a, b] : cfg.D.bounding_box()) {
        lo.push_back(a * to_double(T));
        hi.push_back(b * to_double(T));
      }
      const auto ball = scan_empty_ball(kept, lo, hi, h);
      rows.push_back(Json{{"T", to_double(T)},
                          {"visible_points", kept.size()},
                          {"center", ball.center},
                          {"radius", ball.radius},
                          {"centers_tried", ball.centers_tried},
                          {"empirical", ball.empirical}});
    }
    out["scan"] = Json{{"h", h}, {"rows", rows}};
  }
  run.result = std::move(out);
  return run;
}

std::string plot_set_svg(const SetConfig& cfg, const EnumOptions& opts) {
  if (cfg.dim > 2) config_error("plot supports dim 1 or 2");
  const auto desc = cfg.desc();
  const Rational& T = cfg.T.front();
  const auto pts = generate(desc, cfg.D, T, opts);
  const auto vis = visibility_flags(desc, pts, cfg.D, T);
  std::vector<PlotPoint> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    // dim 1: the Minkowski picture (x, sigma(x)).
    const double y = cfg.dim == 2 ? pts[i].phys[1] : pts[i].internal[0];
    out.push_back({pts[i].phys[0], y, vis[i]});
  }
  const auto bb = cfg.D.bounding_box();
  const double t = to_double(T);
  double ylo = bb[0].first * t, yhi = bb[0].second * t;
  if (cfg.dim == 2) {
    ylo = bb[1].first * t;
    yhi = bb[1].second * t;
  } else {
    const auto wb = desc.effective_window().bounding_box();
    ylo = wb[0].first;
    yhi = wb[0].second;
  }
  const double padx = 0.02 * (bb[0].second - bb[0].first) * t, pady = 0.02 * (yhi - ylo);
  const std::string title = "Q(sqrt " + std::to_string(cfg.field) + "), T = " + to_string(T) +
                            ", filled = visible (" + std::to_string(std::count(vis.begin(), vis.end(), true)) + "/" +
                            std::to_string(pts.size()) + ")";
  return svg_scatter(out, {}, title, bb[0].first * t - padx, bb[0].second * t + padx, ylo - pady, yhi + pady);
}

std::string plot_field_svg(std::int64_t d, double r) {
  const QuadField k = field_or_config_error(d);
  const double lam = static_cast<double>(k.lambda().real());
  if (r <= 0) r = std::min(std::max(4.0, 1.25 * lam), 50.0);
  const Rational rr = rational_from_double(r);
  const RingBox box{RingBound::closed(-rr), RingBound::closed(rr), RingBound::closed(-rr), RingBound::closed(rr)};
  const auto hc = hammarhjelm_box(k);
  std::vector<PlotPoint> pts;
  for (const auto& x : enumerate_ring_box(k, box))
    pts.push_back({static_cast<double>(x.real()), static_cast<double>(x.conj_real()), !hc.contains(x)});
  const std::vector<PlotBox> boxes{{1, -1, lam, 1, "(1, lambda) x [-1, 1]"}};
  return svg_scatter(pts, boxes, "Q(sqrt " + std::to_string(d) + "): (x, sigma(x)), hollow = inside box", -r, r, -r,
                     r);
}

std::string plot_points_svg(const std::string& csv_text) {
  std::istringstream is(csv_text);
  std::string line;
  std::vector<std::string> cols;
  std::vector<PlotPoint> pts;
  int ix = -1, iy = -1, iv = -1;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ls(s);
    while (std::getline(ls, cell, ',')) out.push_back(cell);
    return out;
  };
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto cells = split(line);
    if (cols.empty()) {
      cols = cells;
      for (int i = 0; i < static_cast<int>(cols.size()); ++i) {
        if (cols[i] == "x" || cols[i] == "x1") ix = i;
        if (cols[i] == "y" || cols[i] == "x2") iy = i;
        if (cols[i] == "visible") iv = i;
      }
      if (iy < 0)
        for (int i = 0; i < static_cast<int>(cols.size()); ++i)
          if (cols[i] == "s1") iy = i;
      if (ix < 0 || iy < 0) config_error("points file needs x and y columns (x,y or x1,x2 or x1,s1)");
      continue;
    }
    if (static_cast<int>(cells.size()) <= std::max({ix, iy, iv})) config_error("short row in points file");
    try {
      const bool filled = iv < 0 || cells[iv] == "true" || cells[iv] == "1";
      pts.push_back({std::stod(cells[ix]), std::stod(cells[iy]), filled});
    } catch (const std::exception&) {
      config_error("bad number in points file: " + line);
    }
  }
  if (pts.empty()) config_error("points file has no rows");
  double x0 = pts[0].x, x1 = x0, y0 = pts[0].y, y1 = y0;
  for (const auto& p : pts) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  const double px = std::max(1e-9, 0.02 * (x1 - x0)) + (x1 == x0), py = std::max(1e-9, 0.02 * (y1 - y0)) + (y1 == y0);
  return svg_scatter(pts, {}, "points", x0 - px, x1 + px, y0 - py, y1 + py);
}

}  // namespace quasivis
