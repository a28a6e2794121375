#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

const fs::path kDir = fs::temp_directory_path() / "quasivis_cli_test";

int run(const std::string& args, const std::string& out_file = "") {
  const std::string cmd = std::string(QUASIVIS_BIN) + " " + args + " > " +
                          (out_file.empty() ? std::string("/dev/null") : (kDir / out_file).string()) + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string write(const std::string& name, const std::string& text) {
  fs::create_directories(kDir);
  std::ofstream(kDir / name) << text;
  return (kDir / name).string();
}

std::string slurp(const std::string& name) {
  std::ifstream in(kDir / name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("exit codes") {
  const auto good = write("good.json", R"({"field": 2, "T": [5, 10], "method": "both"})");
  CHECK(run("--config " + good + " density") == 0);
  CHECK(run("--config " + good + " moebius") == 0);
  CHECK(run("--config " + write("bad.json", R"({"field": 2, "T": 5, "colour": 1})") + " density") == 2);
  CHECK(run("--config " + write("broken.json", "{\"field\": ") + " density") == 2);
  CHECK(run("--config " + write("nopid.json", R"({"field": 10, "T": 5})") + " density") == 2);
  CHECK(run("--config " + write("beta.json", R"({"field": 2, "T": 5, "beta": "-1"})") + " density") == 2);
  CHECK(run("field 4") == 2);
  CHECK(run("check-hc 2 500") == 2);
  CHECK(run("--format svg field 2") == 2);
  const auto budget = write("budget.json", R"j({"n": 2, "A": 1, "subspace": [[1, "sqrt(2)"]], "R": 1, "budget": 10})j");
  CHECK(run("--config " + budget + " holes") == 3);
}

TEST_CASE("every output carries the header") {
  const auto cfg = write("hdr.json", R"({"field": 5, "T": [4], "beta": "1/lambda"})");
  REQUIRE(run("--config " + cfg + " --method direct density", "d.csv") == 0);
  const auto csv = slurp("d.csv");
  CHECK(csv.rfind("# tool=quasivis version=", 0) == 0);
  CHECK(csv.find("\"method\":\"direct\"") != std::string::npos);
  CHECK(csv.find("T,count_vis,count_pr,count_pr_inner,count_all,vol_TD,M_T,predicted,rel_error,boundary_ambiguous,"
                 "method,identity_holds,methods_agree\n") != std::string::npos);

  REQUIRE(run("--format json --config " + cfg + " density", "d.json") == 0);
  const auto j = nlohmann::json::parse(slurp("d.json"));
  CHECK(j["header"]["command"] == "density");
  CHECK(j["header"]["config_hash"].get<std::string>().size() == 16);
  CHECK(j["density"]["rows"].size() == 1);

  // Overrides change the resolved config and therefore the hash.
  REQUIRE(run("--format json --threads 2 --config " + cfg + " density", "d2.json") == 0);
  CHECK(nlohmann::json::parse(slurp("d2.json"))["header"]["config_hash"] != j["header"]["config_hash"]);
}

TEST_CASE("svg output is byte-identical across runs") {
  const auto cfg = write("plot.json", R"({"field": 2, "T": 7})");
  REQUIRE(run("--config " + cfg + " plot set", "a.svg") == 0);
  REQUIRE(run("--config " + cfg + " plot set", "b.svg") == 0);
  CHECK(slurp("a.svg") == slurp("b.svg"));
  CHECK(slurp("a.svg").find("<!-- {\"tool\":\"quasivis\"") != std::string::npos);
  REQUIRE(run("plot field 13", "f.svg") == 0);
  CHECK(slurp("f.svg").find("stroke=\"red\"") != std::string::npos);
}

TEST_CASE("--out writes files") {
  const auto cfg = write("out.json", R"({"field": 2, "T": [5, 6, 7, 8, 9, 10]})");
  const auto dir = kDir / "outdir";
  fs::remove_all(dir);
  REQUIRE(run("--out " + dir.string() + " --config " + cfg + " density") == 0);
  CHECK(fs::exists(dir / "density.csv"));
  REQUIRE(fs::exists(dir / "density_summary.json"));
  std::ifstream in(dir / "density_summary.json");
  const auto j = nlohmann::json::parse(in);
  CHECK(j["density"]["fit"].contains("slope"));
}
