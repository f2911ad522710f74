#include <catch_amalgamated.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "toda/error.hpp"
#include "toda/scenario.hpp"

using namespace toda;

namespace {

const char* kMinimal = R"({"n": 1, "gamma": [0], "g": [[[1, 0]], [[1, 0]]], "tasks": ["pde"]})";

ErrorKind kind_of(std::string_view text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("config was accepted");
  return ErrorKind::InternalInconsistency;
}

std::string message_of(std::string_view text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("toda_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("minimal config loads with defaults") {
  const auto c = parse_config(kMinimal);
  CHECK(c.n == 1);
  CHECK(c.tasks == std::vector<std::string>{"pde"});
  CHECK(c.truncation_order == 40);
  CHECK(c.grid == GridSpec{});
  CHECK(c.tolerances == default_tolerances());
}

TEST_CASE("config errors") {
  CHECK(kind_of(R"({"n": 1, "gamma": [-1.5], "g": [[[1, 0]], [[1, 0]]]})") == ErrorKind::IllegalWeight);
  CHECK(kind_of(R"({"n": 1, "gamma": [0], "g": [[[1, 0]]]})") == ErrorKind::ArityMismatch);
  CHECK(kind_of(R"({"n": 2, "gamma": [0], "g": [[[1, 0]], [[1, 0]], [[1, 0]]]})") == ErrorKind::ArityMismatch);
  CHECK(kind_of(R"({"n": 1, "gamma": [0], "g": [[[1, 0]], [[1, 0]]], "colour": 1})") == ErrorKind::ConfigValidation);
  CHECK(kind_of(R"({"n": 1, "gamma": [0], "g": [[[1, 0]], [[1, 0]]], "tasks": ["pde", "pde"]})") ==
        ErrorKind::ConfigValidation);
  CHECK(kind_of(R"({"n": 1, "gamma": [0], "g": [[[1, 0]], [[1, 0]]], "tasks": ["paint"]})") ==
        ErrorKind::ConfigValidation);
  CHECK(kind_of(R"({"n": 1, "gamma": [0], "g": [[[1, 0]], [[1, 0]]], "truncation_order": 4})") ==
        ErrorKind::ConfigValidation);
  CHECK(kind_of(R"({"n": 1, "gamma": [0], "g": [[[1, 0]], [[1, 0]]], "grid": {"fd_step": 0.5}})") ==
        ErrorKind::ConfigValidation);
  CHECK(kind_of(R"({"n": 1, "gamma": [0], "g": [[[1, 0]], [[1, 0]]], "tolerances": {"pde": -1}})") ==
        ErrorKind::ConfigValidation);

  CHECK(kind_of("{\"n\": 1,\n  \"gamma\": [0,]\n}") == ErrorKind::ConfigParse);
  CHECK(message_of("{\"n\": 1,\n  \"gamma\": [0,]\n}").find("line 2") != std::string::npos);
  CHECK(kind_of(R"({"n": "one", "gamma": [0], "g": []})") == ErrorKind::ConfigParse);
  CHECK(message_of(R"({"n": 1, "gamma": [0], "g": [[[1, "x"]], [[1, 0]]]})").find("g[0][0][1]") != std::string::npos);
}

TEST_CASE("config round trip and overrides") {
  auto c = parse_config(R"({"n": 2, "gamma": [0.5, 1], "g": [[[1, 0], [0.1, -0.2]], [[1, 0]], [[0.5, 0.5]]],
                            "tasks": ["pde", "chart"], "grid": {"n_r": 3}, "tolerances": {"pde": 1e-5},
                            "cone": {"radii": [0.01, 0.001, 0.0001], "theta0": 0.3}})");
  CHECK(config_from_json(config_to_json(c)) == c);
  CHECK(parse_config(config_to_json(c).dump()) == c);

  set_tolerance(c, "chart=1e-9");
  CHECK(c.tolerances["chart"] == 1e-9);
  CHECK_THROWS_AS(set_tolerance(c, "nonsense=1"), Error);
  CHECK_THROWS_AS(set_tolerance(c, "chart"), Error);
  CHECK_THROWS_AS(set_tolerance(c, "chart=abc"), Error);

  const auto a = parse_config(kMinimal);
  auto b = a;
  b.tasks = {"energy"};
  CHECK(seed_fingerprint(a) == seed_fingerprint(b));
  CHECK(seed_fingerprint(a).rfind("fnv1a64:", 0) == 0);
  b.gamma = {0.5};
  CHECK(seed_fingerprint(a) != seed_fingerprint(b));
}

TEST_CASE("scenarios") {
  auto c = parse_config(R"({"n": 1, "gamma": [0], "g": [[[1, 0]], [[1, 0]]], "tasks": ["pde", "plucker", "energy"]})");
  const auto liouville = run_scenario(c);
  REQUIRE(liouville.report.checks.size() == 3);
  CHECK(liouville.report.all_passed());

  const auto bryant =
      run_scenario(parse_config(R"({"n": 1, "gamma": [1], "g": [[[1, 0]], [[1, 0]]], "tasks": ["chart", "cone-angle"]})"));
  CHECK(bryant.report.all_passed());
  const auto& cone = bryant.report.checks[1];
  CHECK(cone.name == "cone-angle");
  CHECK(std::abs(cone.metrics["metrics"][0]["extrapolated"].get<double>() - 4 * std::numbers::pi) < 0.04 * std::numbers::pi);

  c.tasks.clear();
  const auto none = run_scenario(c);
  CHECK(none.report.checks.empty());
  CHECK(none.report.all_passed());

  try {
    run_scenario(parse_config(R"({"n": 1, "gamma": [0], "g": [[[0, 0], [1, 0]], [[1, 0]]], "tasks": ["pde"]})"));
    FAIL("expected DegenerateSeed");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateSeed);
  }
}

TEST_CASE("unnormalized seeds are normalized and the root recorded") {
  const auto r = run_scenario(parse_config(R"({"n": 1, "gamma": [0], "g": [[[2, 0]], [[1, 0]]], "tasks": ["normalize"]})"));
  REQUIRE(r.prepared.seed.normalization_root.has_value());
  CHECK(std::abs(*r.prepared.seed.normalization_root - std::sqrt(2.0)) < 1e-15);
  CHECK(r.report.checks[0].status == CheckStatus::Pass);
  const auto j = report_json(r, parse_config(R"({"n": 1, "gamma": [0], "g": [[[2, 0]], [[1, 0]]]})"));
  CHECK(j["normalization"]["applied"].get<bool>());
}

TEST_CASE("metric grid") {
  auto c = parse_config(R"({"n": 1, "gamma": [0], "g": [[[1, 0]], [[1, 0]]], "tasks": ["metric-grid"],
                            "grid": {"r_min": 0.2, "r_max": 0.4, "n_r": 2, "n_theta": 2}})");
  const auto r = run_scenario(c);
  REQUIRE(r.grid_csv.has_value());
  std::istringstream in(*r.grid_csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,y,u_1,density_1");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    double x = 0, y = 0, u = 0, d = 0;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &x, &y, &u, &d) == 4);
    CHECK(std::abs(d - 1.0 / std::pow(1 + x * x + y * y, 2)) < 1e-15);
    CHECK(std::abs(u - std::log(d)) < 1e-14);
  }
  CHECK(rows == 4);
}

TEST_CASE("outputs") {
  const auto dir = temp_dir("outputs");
  auto c = parse_config(kMinimal);
  c.tasks = {"pde", "metric-grid"};
  const auto r = run_scenario(c);
  emit_outputs(r, c, dir);
  CHECK(std::filesystem::exists(dir / "report.json"));
  CHECK(std::filesystem::exists(dir / "metric_grid.csv"));

  std::ifstream in(dir / "report.json");
  const auto j = nlohmann::json::parse(in);
  CHECK(config_from_json(j["config"]) == c);
  CHECK(j["checks"].size() == 2);
  CHECK(j["fingerprint"] == seed_fingerprint(c));

  auto first = report_json(r, c);
  auto second = report_json(run_scenario(c), c);
  first.erase("timings");
  second.erase("timings");
  CHECK(first.dump() == second.dump());

  const auto blocker = dir / "file";
  std::ofstream(blocker) << "x";
  try {
    emit_outputs(r, c, blocker / "sub");
    FAIL("expected an I/O error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Io);
    CHECK(std::string(e.what()).find("file") != std::string::npos);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("failing tasks are recorded, not fatal") {
  auto c = parse_config(kMinimal);
  c.tasks = {"pde", "cone-angle"};
  c.tolerances["pde"] = 1e-12;
  c.energy_radius = 0.5;
  const auto r = run_scenario(c);
  REQUIRE(r.report.checks.size() == 2);
  CHECK(r.report.checks[0].status == CheckStatus::Fail);
  CHECK(r.report.checks[1].status == CheckStatus::Pass);
  CHECK_FALSE(r.report.all_passed());
}
