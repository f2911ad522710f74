#pragma once

#include <filesystem>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "toda/fuchsian.hpp"
#include "toda/verify.hpp"

namespace toda {

struct OutputPaths {
  std::string report = "report.json";
  std::string grid_csv = "metric_grid.csv";
  std::string normalized_seed = "normalized_seed.json";
  std::string operator_file = "operator.json";

  friend bool operator==(const OutputPaths&, const OutputPaths&) = default;
};

/// One verification run: polynomial seed coefficients, the tasks to execute
/// and every numerical parameter they use. Defaults are filled on load.
struct ScenarioConfig {
  int n = 1;
  std::vector<double> gamma;
  /// g[i][j] is the z^j coefficient of g_i.
  std::vector<std::vector<complex>> g;
  int truncation_order = 40;
  std::vector<std::string> tasks;
  GridSpec grid;
  std::map<std::string, double> tolerances;
  std::vector<double> cone_radii{1e-2, 1e-3, 1e-4};
  double cone_theta0 = 0.0;
  double energy_radius = 0.5;
  std::vector<double> energy_epsilons{1e-2, 1e-3, 1e-4};
  /// Upper bound on the radius inside which the seed is trusted.
  double validity_radius = kDefaultValidityCap;
  OutputPaths output;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// normalize, pde, plucker, fuchsian, cone-angle, energy, metric-grid, chart, branch.
const std::vector<std::string>& known_tasks();
const std::map<std::string, double>& default_tolerances();

/// Throws ConfigParse (with line and column) on malformed JSON or wrongly
/// typed fields, ConfigValidation on unknown keys or broken invariants, and
/// IllegalWeight / ArityMismatch for bad exponents or seed counts.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig config_from_json(const nlohmann::json& j);
/// Io if the file cannot be read.
ScenarioConfig load_config(const std::filesystem::path& path);
/// Complete echo, defaults included; config_from_json inverts it.
nlohmann::json config_to_json(const ScenarioConfig& config);

/// Applies "NAME=VALUE" to the tolerance map (ConfigValidation on unknown names).
void set_tolerance(ScenarioConfig& config, std::string_view assignment);

/// FNV-1a 64-bit hash of the seed data (n, gamma, g, truncation order, validity cap).
std::string seed_fingerprint(const ScenarioConfig& config);

struct PreparedSeed {
  SeedData raw;
  SeedData seed;  ///< normalized
  double raw_defect = 0.0;
  double defect = 0.0;
};

/// Builds and normalizes the seed. DegenerateSeed and InsufficientOrder are
/// fatal for the whole scenario.
PreparedSeed prepare_seed(const ScenarioConfig& config);

struct ScenarioResult {
  VerificationReport report;
  PreparedSeed prepared;
  /// CSV text when the metric-grid task ran.
  std::optional<std::string> grid_csv;
};

struct RunOptions {
  int threads = 1;
};

/// Normalizes, then runs each task once in the listed order. A task that
/// throws is recorded with status error; only seed preparation is fatal.
ScenarioResult run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

/// Header x,y,u_1..u_n,density_1..density_n and one row per grid point, %.17g.
std::string metric_grid_csv(const CanonicalCurve& curve, const GridSpec& grid, int threads = 1);

/// Report as JSON; timings are kept under their own top-level key.
nlohmann::json report_json(const ScenarioResult& result, const ScenarioConfig& config);

/// Loadable config whose seeds are the normalized series.
nlohmann::json normalized_seed_json(const PreparedSeed& prepared, const ScenarioConfig& config);

/// Reconstructed operator coefficients, pole orders and exponents.
nlohmann::json operator_json(const FuchsianOperator& op, const SeedData& seed);

/// Writes `text` to out_dir / name, creating out_dir; Io with the path on failure.
std::filesystem::path write_output(const std::filesystem::path& out_dir, const std::string& name, const std::string& text);

/// Writes the report (and the CSV when present) below out_dir.
void emit_outputs(const ScenarioResult& result, const ScenarioConfig& config, const std::filesystem::path& out_dir);

}  // namespace toda
