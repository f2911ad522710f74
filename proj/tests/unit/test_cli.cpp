#include <sys/wait.h>

#include <catch_amalgamated.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <string>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(TODA_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string data(const std::string& name) { return std::string(TODA_TEST_DATA) + "/" + name; }

fs::path fresh(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("toda_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

nlohmann::json report_without_timings(const fs::path& path) {
  std::ifstream in(path);
  auto j = nlohmann::json::parse(in);
  j.erase("timings");
  return j;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("check is deterministic and passes on the Liouville seed") {
  const auto a = fresh("a");
  const auto b = fresh("b");
  REQUIRE(run("check --config " + data("liouville.json") + " --out " + a.string()) == 0);
  REQUIRE(run("check --config " + data("liouville.json") + " --out " + b.string() + " --threads 3") == 0);
  CHECK(report_without_timings(a / "report.json").dump() == report_without_timings(b / "report.json").dump());
  CHECK(slurp(a / "metric_grid.csv") == slurp(b / "metric_grid.csv"));
}

TEST_CASE("exit codes") {
  const auto out = fresh("codes");
  CHECK(run("check --config " + data("degenerate.json") + " --out " + out.string()) == 2);
  CHECK(run("check --config " + data("missing.json") + " --out " + out.string()) == 2);
  CHECK(run("check --config " + data("liouville.json") + " --out " + out.string() + " --tolerance pde=1e-12") == 1);
  CHECK(run("check --config " + data("liouville.json") + " --out " + out.string() + " --tolerance bogus=1") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("check --config " + data("bryant.json") + " --out " + out.string()) == 0);
}

TEST_CASE("environment overrides") {
  const auto out = fresh("env");
  const std::string env = "TODA_CONFIG=" + data("liouville.json") + " TODA_OUT=" + out.string() +
                          " TODA_TOLERANCE=pde=1e-12,plucker=1e-12 ";
  const int status = std::system((env + TODA_CLI + " check > /dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(status) == 1);
  const auto j = report_without_timings(out / "report.json");
  CHECK(j["config"]["tolerances"]["pde"].get<double>() == 1e-12);
  CHECK(j["config"]["tolerances"]["plucker"].get<double>() == 1e-12);
}

TEST_CASE("normalize, fuchsian and grid verbs") {
  const auto out = fresh("verbs");
  REQUIRE(run("normalize --config " + data("veronese.json") + " --out " + out.string()) == 0);
  const auto reload = out / "normalized_seed.json";
  REQUIRE(fs::exists(reload));
  CHECK(run("check --config " + reload.string() + " --out " + (out / "again").string()) == 0);

  REQUIRE(run("fuchsian --config " + data("bryant.json") + " --out " + out.string()) == 0);
  std::ifstream in(out / "operator.json");
  const auto op = nlohmann::json::parse(in);
  CHECK(op["n"] == 1);
  CHECK(std::abs(op["indicial_roots"][0].get<double>() + 0.5) < 1e-10);
  CHECK(std::abs(op["coefficients"][0]["series"][0][0].get<double>() + 0.75) < 1e-12);

  REQUIRE(run("grid --config " + data("bryant.json") + " --out " + out.string()) == 0);
  CHECK(fs::exists(out / "metric_grid.csv"));
}
