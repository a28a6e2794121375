#include "quasivis/commands.hpp"
#include "quasivis/errors.hpp"

#include <pybind11/pybind11.h>

namespace py = pybind11;
using namespace quasivis;

namespace {

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::Config, e.what());
  }
}

EnumOptions options(const Json& config) {
  EnumOptions o;
  o.threads = config.value("threads", 1);
  return o;
}

std::string generate_json(const std::string& text) {
  const Json config = parse(text);
  const auto cfg = set_config_from_json(config);
  const auto desc = cfg.desc();
  Json out = Json::array();
  for (const auto& T : cfg.T) {
    const auto pts = generate(desc, cfg.D, T, options(config));
    const auto vis = visibility_flags(desc, pts, cfg.D, T);
    for (std::size_t i = 0; i < pts.size(); ++i)
      out.push_back(Json{{"T", to_string(T)},
                         {"z", pts[i].z},
                         {"phys", pts[i].phys},
                         {"internal", pts[i].internal},
                         {"visible", static_cast<bool>(vis[i])}});
  }
  return out.dump();
}

std::string moebius_json(const std::string& text) {
  const Json config = parse(text);
  Json out = Json::array();
  for (const auto& r : cmd_moebius(set_config_from_json(config), options(config)))
    out.push_back(Json{{"T", to_string(r.T)},
                       {"moebius", r.moebius.count},
                       {"direct", r.direct},
                       {"equal", r.equal},
                       {"cutoff", r.moebius.cutoff},
                       {"terms", r.moebius.terms}});
  return out.dump();
}

}  // namespace

PYBIND11_MODULE(_quasivis, m) {
  m.doc() = "Visible points of cut-and-project sets (JSON in, JSON out)";
  py::register_exception<Error>(m, "Error", PyExc_ValueError);
  m.attr("version") = kToolVersion;

  m.def("field", [](std::int64_t d) { return cmd_field(d).dump(); }, py::arg("d"));
  m.def("check_hc", [](std::int64_t lo, std::int64_t hi) { return hc_json(cmd_check_hc(lo, hi)).dump(); },
        py::arg("dmin"), py::arg("dmax"));
  m.def(
      "zeta", [](std::int64_t d, int s, double tol) { return to_json(dedekind_zeta(QuadField(d), s, tol)).dump(); },
      py::arg("d"), py::arg("s"), py::arg("tol") = 1e-9);
  m.def("generate", &generate_json, py::arg("config"));
  m.def(
      "density",
      [](const std::string& text) {
        const Json config = parse(text);
        return density_json(cmd_density(set_config_from_json(config), options(config))).dump();
      },
      py::arg("config"));
  m.def("moebius", &moebius_json, py::arg("config"));
  m.def(
      "random_lattice",
      [](const std::string& text) {
        py::gil_scoped_release release;
        return to_json(random_lattice_experiment(random_config_from_json(parse(text)))).dump();
      },
      py::arg("config"));
  m.def(
      "holes",
      [](const std::string& text) {
        const Json config = parse(text);
        auto r = cmd_holes(config, options(config));
        r.result["exit_code"] = r.exit_code;
        return r.result.dump();
      },
      py::arg("config"));
  m.def(
      "plot_set", [](const std::string& text) { return plot_set_svg(set_config_from_json(parse(text))); },
      py::arg("config"));
  m.def("plot_field", &plot_field_svg, py::arg("d"), py::arg("r") = 0.0);
}
