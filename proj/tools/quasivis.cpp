#include "quasivis/commands.hpp"
#include "quasivis/errors.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace quasivis;
namespace fs = std::filesystem;

namespace {

struct Globals {
  std::string config_path;
  std::string out_dir;
  std::string method;
  std::string format;
  std::optional<std::uint64_t> seed;
  int threads = 0;
};

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::Config, what); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) config_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json load_config(const Globals& g, bool required = true) {
  if (g.config_path.empty()) {
    if (required) config_error("--config is required for this command");
    return Json::object();
  }
  Json j;
  try {
    j = Json::parse(read_file(g.config_path));
  } catch (const Json::parse_error& e) {
    config_error(g.config_path + ": " + e.what());
  }
  if (!j.is_object()) config_error(g.config_path + ": config must be a JSON object");
  return j;
}

int resolve_threads(const Globals& g, const Json& config) {
  int t = g.threads;
  if (t <= 0) {
    if (const char* env = std::getenv("QUASIVIS_THREADS")) {
      try {
        t = std::stoi(env);
      } catch (const std::exception&) {
        config_error("QUASIVIS_THREADS must be an integer");
      }
    }
  }
  if (t <= 0 && config.contains("threads") && config["threads"].is_number_integer()) t = config["threads"].get<int>();
  if (t <= 0) t = 1;
  return t;
}

// Applies the command line overrides so the header records what actually ran.
Json resolve(const Globals& g, Json config, bool has_method, bool has_seed) {
  if (has_method && !g.method.empty()) config["method"] = g.method;
  if (has_seed && g.seed) config["seed"] = *g.seed;
  config["threads"] = resolve_threads(g, config);
  return config;
}

std::string pick_format(const Globals& g, const std::vector<std::string>& allowed) {
  if (g.format.empty()) return allowed.front();
  for (const auto& f : allowed)
    if (f == g.format) return f;
  config_error("format '" + g.format + "' is not available for this command");
}

std::string out_dir(const Globals& g, const Json& config) {
  if (!g.out_dir.empty()) return g.out_dir;
  if (config.contains("out") && config["out"].is_string()) return config["out"].get<std::string>();
  return {};
}

void emit(const std::string& dir, const std::string& name, const std::string& content) {
  if (dir.empty()) {
    std::cout << content;
    return;
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  const auto path = fs::path(dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << content;
  std::cerr << "wrote " << path.string() << "\n";
}

std::string with_csv_header(const Json& header, const std::string& body) {
  std::ostringstream os;
  write_csv_header(os, header);
  os << body;
  return os.str();
}

std::string with_json_header(const Json& header, const std::string& key, Json body) {
  Json j{{"header", header}, {key, std::move(body)}};
  return j.dump(2) + "\n";
}

std::string with_svg_header(const Json& header, const std::string& svg) {
  std::string h = header.dump();
  for (std::size_t p; (p = h.find("--")) != std::string::npos;) h.replace(p, 2, "- -");
  const auto cut = svg.find('\n') + 1;
  return svg.substr(0, cut) + "<!-- " + h + " -->\n" + svg.substr(cut);
}

EnumOptions enum_options(const Json& config) {
  EnumOptions o;
  o.threads = config.value("threads", 1);
  return o;
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::TolTooTight:
    case ErrorKind::InsufficientCover:
      return kExitBudget;
    case ErrorKind::DegenerateFit:
      return kExitIdentity;
    default:
      return kExitConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Visible points of cut-and-project sets"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "JSON config file");
  app.add_option("--out", g.out_dir, "write outputs into this directory instead of stdout");
  app.add_option("--method", g.method, "counting method")->check(CLI::IsMember({"direct", "moebius", "both"}));
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--threads", g.threads, "worker threads (default: QUASIVIS_THREADS or 1)")->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"csv", "json", "svg"}));
  app.fallthrough();

  std::function<int()> run;

  std::int64_t field_d = 2;
  auto* field = app.add_subcommand("field", "ring of integers, fundamental unit and Hammarhjelm check");
  field->add_option("d", field_d, "squarefree d > 1")->required();
  field->callback([&] {
    run = [&] {
      const Json config = resolve(g, Json{{"d", field_d}}, false, false);
      const Json header = output_header("field", config, "exact");
      pick_format(g, {"json"});
      emit(out_dir(g, config), "field.json", with_json_header(header, "field", cmd_field(field_d)));
      return kExitOk;
    };
  });

  std::int64_t hc_min = 2, hc_max = 100;
  auto* hc = app.add_subcommand("check-hc", "Hammarhjelm condition for the PID fields in a range");
  hc->add_option("dmin", hc_min)->required();
  hc->add_option("dmax", hc_max)->required();
  hc->callback([&] {
    run = [&] {
      const Json config = resolve(g, Json{{"dmin", hc_min}, {"dmax", hc_max}}, false, false);
      const Json header = output_header("check-hc", config, "exact");
      const auto fmt = pick_format(g, {"csv", "json"});
      const auto rows = cmd_check_hc(hc_min, hc_max);
      if (fmt == "csv")
        emit(out_dir(g, config), "check_hc.csv", with_csv_header(header, hc_csv(rows)));
      else
        emit(out_dir(g, config), "check_hc.json", with_json_header(header, "fields", hc_json(rows)));
      return kExitOk;
    };
  });

  std::int64_t zeta_d = 2;
  int zeta_s = 2;
  double zeta_tol = 1e-9;
  auto* zeta = app.add_subcommand("zeta", "Dedekind zeta value by direct sum and Euler product");
  zeta->add_option("d", zeta_d)->required();
  zeta->add_option("s", zeta_s)->required()->check(CLI::Range(2, 64));
  zeta->add_option("--tol", zeta_tol, "absolute tolerance")->check(CLI::PositiveNumber);
  zeta->callback([&] {
    run = [&] {
      const Json config = resolve(g, Json{{"d", zeta_d}, {"s", zeta_s}, {"tol", zeta_tol}}, false, false);
      const Json header = output_header("zeta", config, "exact");
      pick_format(g, {"json"});
      if (zeta_d < 2 || !is_squarefree(zeta_d)) config_error("d must be a squarefree integer >= 2");
      const auto z = dedekind_zeta(QuadField(zeta_d), zeta_s, zeta_tol);
      emit(out_dir(g, config), "zeta.json", with_json_header(header, "zeta", to_json(z)));
      return z.agree ? kExitOk : kExitIdentity;
    };
  });

  auto* gen = app.add_subcommand("generate", "points of the set in T D with visibility flags");
  gen->callback([&] {
    run = [&] {
      const Json config = resolve(g, load_config(g), true, false);
      const auto cfg = set_config_from_json(config);
      const Json header = output_header("generate", config, "exact");
      const auto fmt = pick_format(g, {"csv", "json"});
      const auto desc = cfg.desc();
      const auto opts = enum_options(config);
      std::ostringstream csv;
      Json rows = Json::array();
      const auto cols = point_columns(cfg.dim);
      csv << "T";
      for (const auto& c : cols) csv << ',' << c;
      csv << '\n';
      for (const auto& T : cfg.T) {
        const auto pts = generate(desc, cfg.D, T, opts);
        const auto vis = visibility_flags(desc, pts, cfg.D, T);
        for (std::size_t i = 0; i < pts.size(); ++i) {
          const auto& p = pts[i];
          if (fmt == "csv") {
            csv << to_string(T);
            for (auto v : p.z) csv << ',' << v;
            char buf[32];
            for (double v : p.phys) csv << ',' << (std::snprintf(buf, sizeof buf, "%.17g", v), buf);
            for (double v : p.internal) csv << ',' << (std::snprintf(buf, sizeof buf, "%.17g", v), buf);
            csv << ',' << (vis[i] ? "true" : "false") << '\n';
          } else {
            Json q = Json::array();
            for (const auto& x : p.quad) q.push_back(to_json(x));
            rows.push_back(Json{{"T", to_string(T)},
                                {"z", p.z},
                                {"coords", q},
                                {"phys", p.phys},
                                {"internal", p.internal},
                                {"visible", static_cast<bool>(vis[i])}});
          }
        }
      }
      if (fmt == "csv")
        emit(out_dir(g, config), "points.csv", with_csv_header(header, csv.str()));
      else
        emit(out_dir(g, config), "points.json", with_json_header(header, "points", rows));
      return kExitOk;
    };
  });

  auto* density = app.add_subcommand("density", "visible-point counts against the predicted density");
  density->callback([&] {
    run = [&] {
      const Json config = resolve(g, load_config(g), true, false);
      const auto cfg = set_config_from_json(config);
      const Json header = output_header("density", config, "exact");
      const auto fmt = pick_format(g, {"csv", "json"});
      const auto result = cmd_density(cfg, enum_options(config));
      const auto dir = out_dir(g, config);
      if (fmt == "csv") {
        emit(dir, "density.csv", with_csv_header(header, density_csv(result)));
        if (!dir.empty()) emit(dir, "density_summary.json", with_json_header(header, "density", density_json(result)));
      } else {
        emit(dir, "density.json", with_json_header(header, "density", density_json(result)));
      }
      if (!result.identities_hold) std::cerr << "error: counting identity violated\n";
      return result.identities_hold ? kExitOk : kExitIdentity;
    };
  });

  auto* moebius = app.add_subcommand("moebius", "Moebius-sum count of primitive points against direct enumeration");
  moebius->callback([&] {
    run = [&] {
      const Json config = resolve(g, load_config(g), true, false);
      const auto cfg = set_config_from_json(config);
      const Json header = output_header("moebius", config, "exact");
      const auto fmt = pick_format(g, {"csv", "json"});
      const auto rows = cmd_moebius(cfg, enum_options(config));
      bool ok = true;
      std::ostringstream csv;
      csv << "T,moebius,direct,equal,cutoff,terms,nonzero_terms\n";
      Json js = Json::array();
      for (const auto& r : rows) {
        ok = ok && r.equal;
        csv << to_string(r.T) << ',' << r.moebius.count << ',' << r.direct << ',' << (r.equal ? "true" : "false")
            << ',' << r.moebius.cutoff << ',' << r.moebius.terms << ',' << r.moebius.nonzero_terms << '\n';
        js.push_back(Json{{"T", to_string(r.T)},
                          {"moebius", r.moebius.count},
                          {"direct", r.direct},
                          {"equal", r.equal},
                          {"cutoff", r.moebius.cutoff},
                          {"terms", r.moebius.terms},
                          {"nonzero_terms", r.moebius.nonzero_terms},
                          {"justification", r.moebius.justification}});
      }
      if (fmt == "csv")
        emit(out_dir(g, config), "moebius.csv", with_csv_header(header, csv.str()));
      else
        emit(out_dir(g, config), "moebius.json", with_json_header(header, "moebius", js));
      if (!ok) std::cerr << "error: Moebius count differs from direct enumeration\n";
      return ok ? kExitOk : kExitIdentity;
    };
  });

  auto* random = app.add_subcommand("random", "visible-point density of random cut-and-project sets");
  random->callback([&] {
    run = [&] {
      const Json config = resolve(g, load_config(g), false, true);
      auto params = random_config_from_json(config);
      params.threads = config["threads"].get<int>();
      const Json header = output_header("random", config, "float");
      const auto fmt = pick_format(g, {"json", "csv"});
      const auto s = random_lattice_experiment(params);
      if (fmt == "json") {
        emit(out_dir(g, config), "random.json", with_json_header(header, "random", to_json(s)));
      } else {
        std::ostringstream csv;
        csv << "T,vol_omega,mean,stdev,rel_dev,mean_abs_error,count,boundary_ambiguous,target\n";
        for (const auto& r : s.rows) {
          char buf[256];
          std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%llu,%llu,%.17g\n", r.T, r.vol_omega,
                        r.mean, r.stdev, r.rel_dev, r.mean_abs_error, static_cast<unsigned long long>(r.count),
                        static_cast<unsigned long long>(r.boundary_ambiguous), s.target);
          csv << buf;
        }
        emit(out_dir(g, config), "random.csv", with_csv_header(header, csv.str()));
      }
      return kExitOk;
    };
  });

  int holes_n = 0, holes_A = -1, holes_translates = -1;
  auto* holes = app.add_subcommand("holes", "CRT holes in the primitive lattice points");
  holes->add_option("--n", holes_n, "dimension");
  holes->add_option("--A", holes_A, "half side of the box");
  holes->add_option("--translates", holes_translates, "random translates to verify");
  holes->callback([&] {
    run = [&] {
      Json config = load_config(g, false);
      if (holes_n > 0) config["n"] = holes_n;
      if (holes_A >= 0) config["A"] = holes_A;
      if (holes_translates >= 0) config["translates"] = holes_translates;
      config = resolve(g, config, false, true);
      const Json header = output_header("holes", config, "exact");
      pick_format(g, {"json"});
      const auto r = cmd_holes(config, enum_options(config));
      emit(out_dir(g, config), "holes.json", with_json_header(header, "holes", r.result));
      if (r.exit_code == kExitBudget) std::cerr << "error: search budget exhausted\n";
      if (r.exit_code == kExitIdentity) std::cerr << "error: hole verification failed\n";
      return r.exit_code;
    };
  });

  std::string plot_kind;
  std::string plot_arg;
  double plot_range = 0;
  auto* plot = app.add_subcommand("plot", "SVG plots: 'set' (uses --config), 'field <d>' or 'points <csv>'");
  plot->add_option("kind", plot_kind)->required()->check(CLI::IsMember({"set", "field", "points"}));
  plot->add_option("arg", plot_arg, "d for field, a CSV path for points");
  plot->add_option("--range", plot_range, "field plot half-width");
  plot->callback([&] {
    run = [&] {
      pick_format(g, {"svg"});
      std::string svg;
      Json config;
      if (plot_kind == "set") {
        config = resolve(g, load_config(g), false, false);
        svg = plot_set_svg(set_config_from_json(config), enum_options(config));
      } else if (plot_kind == "field") {
        std::int64_t d = 0;
        try {
          d = std::stoll(plot_arg);
        } catch (const std::exception&) {
          config_error("plot field needs an integer d");
        }
        config = resolve(g, Json{{"d", d}, {"range", plot_range}}, false, false);
        svg = plot_field_svg(d, plot_range);
      } else {
        if (plot_arg.empty()) config_error("plot points needs a CSV path");
        config = resolve(g, Json{{"points", plot_arg}}, false, false);
        svg = plot_points_svg(read_file(plot_arg));
      }
      const Json header = output_header("plot", config, "exact");
      emit(out_dir(g, config), "plot.svg", with_svg_header(header, svg));
      return kExitOk;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  try {
    return run ? run() : kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const Json::exception& e) {
    std::cerr << "error: Config: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIdentity;
  }
}
